#include <string>
#include <vector>

#include "doctest.h"
#include "icc/icurry.hpp"
#include "icc/normalize.hpp"
#include "icc/symbols.hpp"
#include "icc/translate.hpp"
#include "support/gen.hpp"
#include "support/util.hpp"

using namespace icc;

namespace {

TypeTable color_types() {
  TypeTable t;
  t.add_type(intern(kModuleMain, "Color"), {{intern(kModuleMain, "Red"), 0},
                                            {intern(kModuleMain, "Green"), 0},
                                            {intern(kModuleMain, "Blue"), 0}});
  return t;
}

IProgram prog_with(TypeTable types, IFunction fn) {
  IProgram p;
  p.types = std::move(types);
  p.functions.push_back(std::move(fn));
  return p;
}

IFunction nullary(const std::string& name, IBlock body) {
  IFunction f;
  f.name = intern(kModuleMain, name);
  f.arity = 0;
  f.body = std::move(body);
  return f;
}

IStatement ret(IExpr e) {
  IStatement s;
  s.kind = IStmtKind::Return;
  s.expr = std::move(e);
  return s;
}

}  // namespace

TEST_CASE("validator accepts a declare/assign/return chain") {
  IBlock b;
  b.decls = {{false, 1}};
  b.assigns = {{VarRef::local(1), IExpr::mk_int(42)}};
  b.stm = ret(IExpr::mk_var(VarRef::local(1)));
  CHECK(validate_icurry(prog_with(color_types(), nullary("f", std::move(b)))).empty());
}

TEST_CASE("validator catches scope and ordering mistakes") {
  SUBCASE("use before declaration") {
    IBlock b;
    b.stm = ret(IExpr::mk_var(VarRef::local(3)));
    auto v = validate_icurry(prog_with(color_types(), nullary("f", std::move(b))));
    REQUIRE(!v.empty());
    CHECK(v[0].message.find("undeclared") != std::string::npos);
  }

  SUBCASE("use before assignment") {
    IBlock b;
    b.decls = {{false, 1}, {false, 2}};
    b.assigns = {{VarRef::local(1), IExpr::mk_var(VarRef::local(2))},
                 {VarRef::local(2), IExpr::mk_int(0)}};
    b.stm = ret(IExpr::mk_var(VarRef::local(1)));
    auto v = validate_icurry(prog_with(color_types(), nullary("f", std::move(b))));
    REQUIRE(!v.empty());
    CHECK(v[0].message.find("before assignment") != std::string::npos);
  }

  SUBCASE("free variables need no assignment") {
    IBlock b;
    b.decls = {{true, 1}};
    b.stm = ret(IExpr::mk_var(VarRef::local(1)));
    CHECK(validate_icurry(prog_with(color_types(), nullary("f", std::move(b)))).empty());
  }

  SUBCASE("double assignment") {
    IBlock b;
    b.decls = {{false, 1}};
    b.assigns = {{VarRef::local(1), IExpr::mk_int(0)},
                 {VarRef::local(1), IExpr::mk_int(1)}};
    b.stm = ret(IExpr::mk_var(VarRef::local(1)));
    auto v = validate_icurry(prog_with(color_types(), nullary("f", std::move(b))));
    REQUIRE(!v.empty());
    CHECK(v[0].message.find("second assignment") != std::string::npos);
  }

  SUBCASE("select index zero") {
    IBlock b;
    b.decls = {{false, 1}};
    b.assigns = {{VarRef::local(1), IExpr::mk_var({RefBase::Root, 0, {0}})}};
    b.stm = ret(IExpr::mk_var(VarRef::local(1)));
    auto v = validate_icurry(prog_with(color_types(), nullary("f", std::move(b))));
    REQUIRE(!v.empty());
    CHECK(v[0].message.find("select index") != std::string::npos);
  }
}

TEST_CASE("validator checks node labels and saturation") {
  SUBCASE("over-saturated constructor") {
    IBlock b;
    b.stm = ret(IExpr::mk_node({LabelKind::Constructor, intern(kModuleMain, "Red")},
                               {IExpr::mk_int(1)}));
    auto v = validate_icurry(prog_with(color_types(), nullary("f", std::move(b))));
    REQUIRE(!v.empty());
    CHECK(v[0].message.find("over-saturated") != std::string::npos);
  }

  SUBCASE("unknown constructor label") {
    IBlock b;
    b.stm = ret(IExpr::mk_node({LabelKind::Constructor, intern(kModuleMain, "Nope")}));
    auto v = validate_icurry(prog_with(color_types(), nullary("f", std::move(b))));
    REQUIRE(!v.empty());
    CHECK(v[0].message.find("unknown constructor label") != std::string::npos);
  }

  SUBCASE("under-saturation is fine when a patch fills the hole") {
    // mirrors the oneTwo pattern: x = Green-node with no args is complete,
    // so build a 1-ary type here instead
    TypeTable t;
    t.add_type(intern(kModuleMain, "Box"), {{intern(kModuleMain, "Box"), 1}});
    IBlock b;
    b.decls = {{false, 1}};
    b.assigns = {{VarRef::local(1),
                  IExpr::mk_node({LabelKind::Constructor, intern(kModuleMain, "Box")})},
                 {VarRef::select(1, 1), IExpr::mk_int(5)}};
    b.stm = ret(IExpr::mk_var(VarRef::local(1)));
    CHECK(validate_icurry(prog_with(std::move(t), nullary("f", std::move(b)))).empty());
  }
}

TEST_CASE("validator checks case coverage and order") {
  auto mk_case = [](std::vector<std::string> ctors) {
    IStatement s;
    s.kind = IStmtKind::Case;
    s.scrut = VarRef::local(1);
    for (const auto& c : ctors) {
      s.ctors.push_back(intern(kModuleMain, c));
      IBlock blk;
      blk.stm.kind = IStmtKind::Exempt;
      s.blocks.push_back(std::move(blk));
    }
    return s;
  };
  auto wrap = [&](IStatement s) {
    IBlock b;
    b.decls = {{true, 1}};
    b.stm = std::move(s);
    return prog_with(color_types(), nullary("f", std::move(b)));
  };

  CHECK(validate_icurry(wrap(mk_case({"Red", "Green", "Blue"}))).empty());

  auto incomplete = validate_icurry(wrap(mk_case({"Red", "Green"})));
  REQUIRE(!incomplete.empty());
  CHECK(incomplete[0].message.find("not complete") != std::string::npos);

  auto shuffled = validate_icurry(wrap(mk_case({"Red", "Blue", "Green"})));
  REQUIRE(!shuffled.empty());
  CHECK(shuffled[0].message.find("out of tag order") != std::string::npos);
}

TEST_CASE("literal cases need a default block") {
  IStatement s;
  s.kind = IStmtKind::CaseLit;
  s.scrut = VarRef::local(1);
  s.lits = {0, 1};
  for (int i = 0; i < 2; ++i) {
    IBlock blk;
    blk.stm = ret(IExpr::mk_int(i));
    s.blocks.push_back(std::move(blk));
  }
  IBlock b;
  b.decls = {{true, 1}};
  b.stm = std::move(s);
  IProgram bad = prog_with(color_types(), nullary("f", std::move(b)));
  auto v = validate_icurry(bad);
  REQUIRE(!v.empty());
  CHECK(v[0].message.find("plus a default") != std::string::npos);

  // adding the default block fixes it
  IBlock dflt;
  dflt.stm.kind = IStmtKind::Exempt;
  bad.functions[0].body.stm.blocks.push_back(std::move(dflt));
  CHECK(validate_icurry(bad).empty());
}

TEST_CASE("pretty text round-trips through the parser") {
  auto roundtrip = [](const std::string& name, bool with_prelude) {
    Pipeline p = icc::tu::pipe(icc::tu::corpus(name), "", with_prelude);
    std::string text = pretty_icurry(p.icurry, "");
    IProgram back = parse_icurry_text(text, p.icurry.types);
    REQUIRE_MESSAGE(back.functions.size() == p.icurry.functions.size(), name);
    std::string again = pretty_icurry(back, "");
    CHECK_MESSAGE(again == text, name);
  };
  roundtrip("selfcontained.mcy", false);
  roundtrip("onetwo.mcy", true);
  roundtrip("zip.mcy", true);
  roundtrip("somedup.mcy", true);
}

TEST_CASE("generated programs round-trip through the text format") {
  for (unsigned seed = 300; seed < 320; ++seed) {
    genp::GenOptions o;
    o.seed = seed;
    FlatProgram fp = genp::gen_program(o);
    normalize(fp);
    IProgram ip = translate_program(fp);
    std::string text = pretty_icurry(ip, "");
    IProgram back = parse_icurry_text(text, ip.types);
    std::string again = pretty_icurry(back, "");
    std::string where = "seed " + std::to_string(seed);
    CHECK_MESSAGE(again == text, where);
  }
}

TEST_CASE("icurry_alpha_equal tolerates renumbering only") {
  IBlock a;
  a.decls = {{false, 1}};
  a.assigns = {{VarRef::local(1), IExpr::mk_int(7)}};
  a.stm = ret(IExpr::mk_var(VarRef::local(1)));
  IBlock b;
  b.decls = {{false, 9}};
  b.assigns = {{VarRef::local(9), IExpr::mk_int(7)}};
  b.stm = ret(IExpr::mk_var(VarRef::local(9)));
  IFunction fa = nullary("f", std::move(a));
  IFunction fb = nullary("f", std::move(b));
  CHECK(icurry_alpha_equal(fa, fb));
  fb.body.assigns[0].rhs = IExpr::mk_int(8);
  CHECK(!icurry_alpha_equal(fa, fb));
}
