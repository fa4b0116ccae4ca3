#include <string>
#include <vector>

#include "doctest.h"
#include "icc/icurry.hpp"
#include "icc/normalize.hpp"
#include "icc/translate.hpp"
#include "support/gen.hpp"
#include "support/util.hpp"

using namespace icc;
using icc::tu::corpus;
using icc::tu::golden;
using icc::tu::pipe;

TEST_CASE("golden: head2 lowers to fetch, case, exempt, select") {
  Pipeline p = pipe(corpus("head2.mcy"));
  CHECK(pretty_icurry(p.icurry, kModuleMain) == golden("head2_icurry.golden"));
}

TEST_CASE("golden: zip lowers to nested complete cases") {
  Pipeline p = pipe(corpus("zip.mcy"));
  CHECK(pretty_flat(p.flat, kModuleMain) == golden("zip_flat.golden"));
  CHECK(pretty_icurry(p.icurry, kModuleMain) == golden("zip_icurry.golden"));
}

TEST_CASE("golden: oneTwo builds its cycle with a patch") {
  Pipeline p = pipe(corpus("onetwo.mcy"));
  std::string got = pretty_icurry(p.icurry, kModuleMain);
  CHECK(got == golden("onetwo_icurry.golden"));
  // the load-bearing line: x's second successor is patched to y afterwards
  CHECK(got.find("x[2] = y") != std::string::npos);
}

TEST_CASE("translated heads declare and fetch each parameter once") {
  Pipeline p = pipe(corpus("zip.mcy"));
  const IFunction* z = p.icurry.find_function(intern(kModuleMain, "zip"));
  REQUIRE(z != nullptr);
  REQUIRE(z->arity == 2);
  REQUIRE(z->body.decls.size() == 2);
  REQUIRE(z->body.assigns.size() == 2);
  CHECK(z->body.assigns[0].rhs == IExpr::mk_var(VarRef::root_arg(1)));
  CHECK(z->body.assigns[1].rhs == IExpr::mk_var(VarRef::root_arg(2)));
  CHECK(z->body.stm.kind == IStmtKind::Case);
  // branch blocks fetch pattern vars by select paths off the scrutinee
  const IBlock& cons_branch = z->body.stm.blocks[1];
  REQUIRE(cons_branch.assigns.size() == 2);
  CHECK(cons_branch.assigns[0].rhs.ref.path == std::vector<int>{1});
  CHECK(cons_branch.assigns[1].rhs.ref.path == std::vector<int>{2});
}

TEST_CASE("case branches cover the type in tag order") {
  Pipeline p = pipe(corpus("selfcontained.mcy"), "", /*with_prelude=*/false);
  const IFunction* n = p.icurry.find_function(intern(kModuleMain, "next"));
  REQUIRE(n != nullptr);
  REQUIRE(n->body.stm.kind == IStmtKind::Case);
  std::vector<std::string> names;
  for (SymId c : n->body.stm.ctors) names.push_back(sym_name(c));
  CHECK(names == std::vector<std::string>{"Red", "Green", "Blue"});
  REQUIRE(n->body.stm.blocks.size() == 3);
  for (const IBlock& b : n->body.stm.blocks) CHECK(b.stm.kind == IStmtKind::Return);
}

TEST_CASE("or bodies become or expressions, not calls") {
  Pipeline p = pipe(corpus("selfcontained.mcy"), "", /*with_prelude=*/false);
  const IFunction* q = p.icurry.find_function(intern(kModuleMain, "?"));
  REQUIRE(q != nullptr);
  REQUIRE(q->body.stm.kind == IStmtKind::Return);
  CHECK(q->body.stm.expr.kind == IExprKind::Or);
}

TEST_CASE("a branch body that is a pattern variable shortens to a select return") {
  Pipeline p = pipe(corpus("head2.mcy"));
  const IFunction* h = p.icurry.find_function(intern(kModuleMain, "head2"));
  REQUIRE(h != nullptr);
  const IBlock& cons = h->body.stm.blocks[1];
  CHECK(cons.decls.empty());
  CHECK(cons.assigns.empty());
  REQUIRE(cons.stm.kind == IStmtKind::Return);
  CHECK(cons.stm.expr == IExpr::mk_var(VarRef::select(1, 1)));
}

TEST_CASE("translation requires the preconditions") {
  FlatProgram p;
  p.types.add_type(intern("M", "T"), {{intern("M", "A"), 0}});
  FlatFunction f;
  f.name = intern("M", "f");
  f.arity = 1;
  f.params = {1};
  // a case in argument position is not normalized; translate refuses it
  Pattern pat;
  pat.ctor = intern("M", "A");
  FlatExpr inner = FlatExpr::mk_case(FlatExpr::mk_var(1), {pat}, {FlatExpr::mk_lit(0)});
  f.body = FlatExpr::mk_call(intern("M", "g"), {std::move(inner)});
  p.functions.push_back(std::move(f));
  CHECK_THROWS_AS(translate_program(p), CompileError);
}

TEST_CASE("every translated corpus program validates") {
  for (const char* name :
       {"zip.mcy", "head2.mcy", "onetwo.mcy", "coin.mcy", "somedup.mcy", "narrow.mcy"}) {
    Pipeline pl = pipe(corpus(name));
    auto v = validate_icurry(pl.icurry);
    std::string msg = std::string(name) + (v.empty() ? "" : ": " + v[0].message);
    CHECK_MESSAGE(v.empty(), msg);
  }
}

TEST_CASE("generated programs translate to valid ICurry") {
  for (unsigned seed = 100; seed < 140; ++seed) {
    genp::GenOptions o;
    o.seed = seed;
    FlatProgram fp = genp::gen_program(o);
    normalize(fp);
    IProgram ip = translate_program(fp);
    auto v = validate_icurry(ip);
    std::string msg = "seed " + std::to_string(seed) + (v.empty() ? "" : ": " + v[0].message);
    CHECK_MESSAGE(v.empty(), msg);
  }
}
