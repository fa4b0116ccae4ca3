#include <string>

#include "doctest.h"
#include "icc/json_io.hpp"
#include "icc/normalize.hpp"
#include "icc/translate.hpp"
#include "support/gen.hpp"
#include "support/util.hpp"

using namespace icc;
using icc::tu::corpus;
using icc::tu::golden;
using icc::tu::pipe;

TEST_CASE("golden: the emitted document is byte-stable") {
  Pipeline p = pipe(corpus("selfcontained.mcy"), "", /*with_prelude=*/false);
  std::string doc = emit_json(p.icurry);
  CHECK(doc == golden("selfcontained.json.golden"));
  // emitting twice is identical, not merely equivalent
  CHECK(emit_json(p.icurry) == doc);
}

TEST_CASE("parse inverts emit on the corpus") {
  for (const char* name :
       {"zip.mcy", "head2.mcy", "onetwo.mcy", "coin.mcy", "somedup.mcy", "narrow.mcy"}) {
    Pipeline pl = pipe(corpus(name));
    std::string doc = emit_json(pl.icurry);
    IProgram back = parse_json(doc);
    CHECK_MESSAGE(emit_json(back) == doc, name);
    REQUIRE(back.functions.size() == pl.icurry.functions.size());
    for (size_t i = 0; i < back.functions.size(); ++i) {
      CHECK(back.functions[i] == pl.icurry.functions[i]);
    }
  }
}

TEST_CASE("parse inverts emit on generated programs") {
  for (unsigned seed = 500; seed < 530; ++seed) {
    genp::GenOptions o;
    o.seed = seed;
    FlatProgram fp = genp::gen_program(o);
    normalize(fp);
    IProgram ip = translate_program(fp);
    std::string doc = emit_json(ip);
    IProgram back = parse_json(doc);
    std::string where = "seed " + std::to_string(seed);
    CHECK_MESSAGE(emit_json(back) == doc, where);
  }
}

TEST_CASE("format tag is enforced") {
  CHECK_THROWS_WITH_AS(parse_json(R"({"format":"icurry-json/9","types":[],"functions":[]})"),
                       doctest::Contains("unsupported format"), CompileError);
  CHECK_THROWS_WITH_AS(parse_json(R"({"types":[],"functions":[]})"),
                       doctest::Contains("format"), CompileError);
}

TEST_CASE("malformed documents fail with located messages") {
  CHECK_THROWS_AS(parse_json("{"), CompileError);
  CHECK_THROWS_AS(parse_json("[]"), CompileError);
  // a function missing its body
  CHECK_THROWS_WITH_AS(
      parse_json(R"({"format":"icurry-json/1","types":[],
                     "functions":[{"name":"Main.f","arity":0}]})"),
      doctest::Contains("body"), CompileError);
  // bad statement discriminator
  CHECK_THROWS_WITH_AS(
      parse_json(R"({"format":"icurry-json/1","types":[],
                     "functions":[{"name":"Main.f","arity":0,
                       "body":{"declare":[],"assign":[],
                               "stmt":{"kind":"jump"}}}]})"),
      doctest::Contains("jump"), CompileError);
  // ref base must be root or local
  CHECK_THROWS_WITH_AS(
      parse_json(R"({"format":"icurry-json/1","types":[],
                     "functions":[{"name":"Main.f","arity":0,
                       "body":{"declare":[],"assign":[],
                               "stmt":{"kind":"return",
                                       "expr":{"kind":"var",
                                               "ref":{"base":"global"}}}}}]})"),
      doctest::Contains("global"), CompileError);
}

TEST_CASE("qualified names split at the first dot only") {
  Pipeline p = pipe(corpus("selfcontained.mcy"), "", false);
  std::string doc = emit_json(p.icurry);
  IProgram back = parse_json(doc);
  const IFunction* q = back.find_function(intern(kModuleMain, "?"));
  REQUIRE(q != nullptr);
  CHECK(sym_module(q->name) == "Main");
  CHECK(sym_name(q->name) == "?");
}
