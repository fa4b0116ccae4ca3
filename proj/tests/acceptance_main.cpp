// Acceptance gate for the toolkit. Each criterion prints exactly one
// PASS/FAIL line; criteria 1-9 decide the exit code, criterion 10 is
// reported for information only. Run via ctest or directly.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "icc/builtins.hpp"
#include "icc/driver.hpp"
#include "icc/flat.hpp"
#include "icc/graph.hpp"
#include "icc/icurry.hpp"
#include "icc/json_io.hpp"
#include "icc/normalize.hpp"
#include "icc/translate.hpp"
#include "icc/vm.hpp"
#include "support/gen.hpp"
#include "support/ref_interp.hpp"
#include "support/util.hpp"

using namespace icc;
using icc::tu::as_set;
using icc::tu::corpus;
using icc::tu::golden;
using icc::tu::pipe;
using icc::tu::run_goal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string note;  // appended to the line (timings, counts, failure cause)
};

// Every corpus program the sweep-style criteria run over, with the prelude
// flag each one expects.
const std::vector<std::pair<std::string, bool>> kCorpus = {
    {"zip.mcy", true},      {"head2.mcy", true},  {"onetwo.mcy", true},
    {"coin.mcy", true},     {"somedup.mcy", true}, {"narrow.mcy", true},
    {"selfcontained.mcy", false},
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// --- 1: zip ------------------------------------------------------------------

FlatFunction expected_zip() {
  SymId nil = intern(kModulePrelude, "[]");
  SymId cons = intern(kModulePrelude, ":");
  SymId pair = intern(kModulePrelude, "Pair");
  SymId zip = intern(kModuleMain, "zip");
  // Deliberately eccentric variable numbering: the comparison is alpha-blind.
  FlatExpr inner = FlatExpr::mk_case(
      FlatExpr::mk_var(20),
      {Pattern{false, nil, {}, 0}, Pattern{false, cons, {41, 42}, 0}},
      {FlatExpr::mk_cons(nil),
       FlatExpr::mk_cons(
           cons, {FlatExpr::mk_cons(pair, {FlatExpr::mk_var(31), FlatExpr::mk_var(41)}),
                  FlatExpr::mk_call(zip, {FlatExpr::mk_var(32), FlatExpr::mk_var(42)})})});
  FlatFunction fn;
  fn.name = zip;
  fn.arity = 2;
  fn.params = {10, 20};
  fn.body = FlatExpr::mk_case(
      FlatExpr::mk_var(10),
      {Pattern{false, nil, {}, 0}, Pattern{false, cons, {31, 32}, 0}},
      {FlatExpr::mk_cons(nil), std::move(inner)});
  return fn;
}

Outcome criterion_zip() {
  auto t0 = Clock::now();
  Pipeline p = pipe(corpus("zip.mcy"));
  SymId zip = intern(kModuleMain, "zip");

  if (pretty_flat(p.flat, kModuleMain) != golden("zip_flat.golden"))
    return fail("FlatCurry listing deviates from the golden file");
  if (pretty_icurry(p.icurry, kModuleMain) != golden("zip_icurry.golden"))
    return fail("ICurry listing deviates from the golden file");

  const FlatFunction* got = p.flat.find_function(zip);
  if (!got || !flat_alpha_equal(*got, expected_zip()))
    return fail("compiled zip is not alpha-equal to the nested-case tree");

  // The ICurry cases must run over List's constructors, complete and in tag
  // order, at both levels of the tree.
  std::vector<SymId> list_order;
  for (const ConstructorDecl& c :
       p.icurry.types.constructors_of(intern(kModulePrelude, "List")))
    list_order.push_back(c.name);
  const IFunction* ifn = p.icurry.find_function(zip);
  if (!ifn || ifn->body.stm.kind != IStmtKind::Case)
    return fail("zip ICurry body is not a case");
  if (ifn->body.stm.ctors != list_order)
    return fail("outer case branches not complete in tag order");
  const IBlock& cons_block = ifn->body.stm.blocks[1];
  if (cons_block.stm.kind != IStmtKind::Case || cons_block.stm.ctors != list_order)
    return fail("inner case branches not complete in tag order");
  if (!validate_icurry(p.icurry).empty())
    return fail("validate_icurry reports violations");

  double dt = seconds_since(t0);
  if (dt >= 1.0) return fail("took " + std::to_string(dt) + "s (limit 1s)");
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.2fs < 1s)", dt);
  return {true, buf};
}

// --- 2: head -----------------------------------------------------------------

Outcome criterion_head() {
  Pipeline p = pipe(corpus("head2.mcy"));
  if (pretty_icurry(p.icurry, kModuleMain) != golden("head2_icurry.golden"))
    return fail("ICurry text deviates from the golden file");

  const IFunction* fn = p.icurry.find_function(intern(kModuleMain, "head2"));
  if (!fn) return fail("head2 not translated");
  const IBlock& b = fn->body;
  if (b.assigns.size() != 1 ||
      b.assigns[0].rhs != IExpr::mk_var(VarRef::root_arg(1)))
    return fail("missing `arg = ROOT[1]`");
  VarId arg = b.assigns[0].lhs.var;
  if (b.stm.kind != IStmtKind::Case || b.stm.scrut != VarRef::local(arg))
    return fail("body does not case on LABEL(arg)");
  if (b.stm.blocks[0].stm.kind != IStmtKind::Exempt)
    return fail("nil branch is not exempt");
  const IStatement& cons_stm = b.stm.blocks[1].stm;
  if (cons_stm.kind != IStmtKind::Return ||
      cons_stm.expr != IExpr::mk_var(VarRef::select(arg, 1)))
    return fail("cons branch is not `return arg[1]`");
  return {true, {}};
}

// --- 3: oneTwo ---------------------------------------------------------------

Outcome criterion_one_two() {
  Pipeline p = pipe(corpus("onetwo.mcy"));
  SymId one_two = intern(kModuleMain, "oneTwo");
  const IFunction* fn = p.icurry.find_function(one_two);
  if (!fn) return fail("oneTwo not translated");

  int node_assigns = 0;
  bool patch = false;
  for (const IAssign& a : fn->body.assigns) {
    if (a.lhs.path.empty() && a.rhs.kind == IExprKind::Node) ++node_assigns;
    if (a.lhs.path == std::vector<int>{2} && a.rhs.kind == IExprKind::Var &&
        a.rhs.ref.path.empty())
      patch = true;
  }
  if (node_assigns != 2) return fail("expected exactly two NODE assignments");
  if (!patch) return fail("missing the back-edge patch x[2] = y");

  VM vm(p.icurry);
  RunResult r = vm.run(one_two, {.max_answers = 4, .max_steps = 100000, .dfs = false});
  if (r.values != std::vector<std::string>{"(1 : 2 : #0)"})
    return fail("evaluation did not print the cyclic list");

  // Re-run the block and inspect the live graph: two cons cells, two
  // literals, and the back edge.
  NodeId root = vm.make_goal(one_two);
  vm.hnf(root);
  GraphStore& g = vm.graph();
  NodeId res = g.deref(root);
  if (reachable_count(g, res) != 4)
    return fail("result graph is not four nodes");

  SymId cons = intern(kModulePrelude, ":");
  GraphStore h;
  NodeId lit1 = h.make_int(1);
  NodeId lit2 = h.make_int(2);
  NodeId x = h.make_ctor(cons, 1, {lit1, h.hole()});
  NodeId y = h.make_ctor(cons, 1, {lit2, x});
  h.at(x).succ[1] = y;
  if (!graph_isomorphic(g, res, h, x))
    return fail("result graph is not isomorphic to the expected cycle");
  return {true, {}};
}

// --- 4: choices and silent failure --------------------------------------------

Outcome criterion_choice() {
  RunResult coin = run_goal(corpus("coin.mcy"), "0 ? 1");
  if (as_set(coin.values) != std::set<std::string>{"0", "1"})
    return fail("0 ? 1 produced the wrong value set");
  if (coin.incomplete) return fail("0 ? 1 left work unfinished");

  RunResult none = run_goal(corpus("coin.mcy"), "head []");
  if (!none.values.empty()) return fail("head [] produced a value");
  if (none.incomplete) return fail("head [] flagged incomplete");
  return {true, {}};
}

// --- 5: sharing vs copying -----------------------------------------------------

Outcome criterion_sharing() {
  const std::string shared_goal = "let { x = coin } in x + x";
  const std::string indep_goal = "coin + coin";

  RunResult shared = run_goal(corpus("coin.mcy"), shared_goal);
  RunResult indep = run_goal(corpus("coin.mcy"), indep_goal);
  if (as_set(shared.values) != std::set<std::string>{"0", "2"})
    return fail("shared coin produced the wrong value set");
  if (as_set(indep.values) != std::set<std::string>{"0", "1", "2"})
    return fail("independent coins produced the wrong value set");

  // Cross-check both goals against the reference interpreter.
  for (const std::string& goal : {shared_goal, indep_goal}) {
    Pipeline p = pipe(corpus("coin.mcy"), goal);
    refi::RefResult ref = refi::ref_run(p.flat, goal_symbol());
    if (ref.incomplete) return fail("reference run incomplete for " + goal);
    const RunResult& vm = goal == shared_goal ? shared : indep;
    if (as_set(vm.values) != as_set(ref.answers))
      return fail("VM disagrees with the reference on " + goal);
  }
  return {true, {}};
}

// --- 6: narrowing --------------------------------------------------------------

Outcome criterion_narrowing() {
  RunResult r = run_goal(corpus("coin.mcy"), "head x where x free");
  if (r.values.size() != 1)
    return fail("expected exactly one answer, got " +
                std::to_string(r.values.size()));
  if (r.trees[0].kind != ValueTree::Kind::Free || r.values[0] != "_a")
    return fail("answer is not an unbound variable, got " + r.values[0]);
  return {true, {}};
}

// --- 7: random differential ----------------------------------------------------

Outcome criterion_differential() {
  auto t0 = Clock::now();
  SymId goal = intern(kModuleMain, "main_goal");
  int compared = 0, attempts = 0, mismatches = 0;
  for (unsigned seed = 1; compared < 50 && attempts < 200; ++seed, ++attempts) {
    genp::GenOptions o;
    o.seed = seed * 104729u;
    o.n_functions = 4;
    FlatProgram prog = genp::gen_program(o);
    normalize(prog);

    refi::RefResult expect = refi::ref_run(prog, goal, /*max_answers=*/512,
                                           /*steps_per_run=*/200000,
                                           /*max_runs=*/4096);
    VM vm(translate_program(prog));
    RunResult got = vm.run(goal, {.max_answers = 512, .max_steps = 5'000'000,
                                  .dfs = false});
    if (expect.incomplete || got.incomplete) continue;  // not comparable
    ++compared;
    if (as_set(got.values) != as_set(expect.answers)) ++mismatches;
  }
  double dt = seconds_since(t0);
  if (mismatches > 0)
    return fail(std::to_string(mismatches) + " of " + std::to_string(compared) +
                " programs disagree with the reference");
  if (compared < 50)
    return fail("only " + std::to_string(compared) +
                " comparable programs out of " + std::to_string(attempts));
  if (dt >= 60.0) return fail("took " + std::to_string(dt) + "s (limit 60s)");
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%d programs, %d attempts, %.1fs < 60s)",
                compared, attempts, dt);
  return {true, buf};
}

// --- 8: preconditions ----------------------------------------------------------

Outcome criterion_preconditions() {
  // Every corpus function must come out of normalization clean.
  int functions = 0;
  for (const auto& [name, with_prelude] : kCorpus) {
    Pipeline p = pipe(corpus(name), "", with_prelude);
    functions += static_cast<int>(p.normalized.functions.size());
    std::vector<PrecondViolation> v = check_preconditions(p.normalized);
    if (!v.empty())
      return fail(name + ": " + sym_qualified(v[0].function) + ": " +
                  v[0].message);
  }

  // The classic lift: f x = g x (case x of ...) must become a call to a
  // fresh auxiliary holding the case.
  SymId fs = intern(kModuleMain, "f");
  SymId gs = intern(kModuleMain, "g");
  SymId fls = intern(kModulePrelude, "False");
  SymId trs = intern(kModulePrelude, "True");
  FlatProgram prog;
  prog.types.add_type(intern(kModulePrelude, "Bool"), {{fls, 0}, {trs, 0}});
  FlatFunction g;
  g.name = gs;
  g.arity = 2;
  g.params = {1, 2};
  g.body = FlatExpr::mk_var(1);
  FlatFunction f;
  f.name = fs;
  f.arity = 1;
  f.params = {1};
  f.body = FlatExpr::mk_call(
      gs, {FlatExpr::mk_var(1),
           FlatExpr::mk_case(FlatExpr::mk_var(1),
                             {Pattern{false, fls, {}, 0}, Pattern{false, trs, {}, 0}},
                             {FlatExpr::mk_lit(2), FlatExpr::mk_lit(1)})});
  prog.functions = {g, f};

  if (check_preconditions(prog).empty())
    return fail("checker missed the impure argument");
  normalize(prog);
  if (!check_preconditions(prog).empty() || !validate_flat(prog).empty())
    return fail("normalization left violations behind");
  if (prog.functions.size() != 3)
    return fail("expected one auxiliary function");
  const FlatFunction& aux = prog.functions[2];
  const FlatFunction& f2 = prog.functions[1];
  bool call_shape = f2.body.kind == FlatKind::FuncApply && f2.body.sym == gs &&
                    f2.body.kids.size() == 2 &&
                    f2.body.kids[0].kind == FlatKind::Var &&
                    f2.body.kids[1].kind == FlatKind::FuncApply &&
                    f2.body.kids[1].sym == aux.name &&
                    f2.body.kids[1].kids.size() == 1 &&
                    f2.body.kids[1].kids[0].kind == FlatKind::Var;
  if (!call_shape) return fail("f does not call g x (aux x)");
  if (aux.arity != 1 || aux.body.kind != FlatKind::Case)
    return fail("auxiliary does not hold the case");
  return {true, "(" + std::to_string(functions) + " corpus functions clean)"};
}

// --- 9: JSON round trip ----------------------------------------------------------

Outcome criterion_json() {
  for (const auto& [name, with_prelude] : kCorpus) {
    Pipeline p = pipe(corpus(name), "", with_prelude);
    std::string s1 = emit_json(p.icurry);
    IProgram back = parse_json(s1);
    if (emit_json(back) != s1) return fail(name + ": emit/parse/emit not a fixpoint");
    if (back.functions.size() != p.icurry.functions.size())
      return fail(name + ": function count changed");
    for (size_t i = 0; i < back.functions.size(); ++i)
      if (!(back.functions[i] == p.icurry.functions[i]))
        return fail(name + ": " + sym_qualified(p.icurry.functions[i].name) +
                    " changed across the round trip");
    if (!(back.types.types() == p.icurry.types.types()))
      return fail(name + ": type table changed across the round trip");

    // Byte stability: a second compile of the same source emits identical bytes.
    Pipeline q = pipe(corpus(name), "", with_prelude);
    if (emit_json(q.icurry) != s1) return fail(name + ": bytes differ across runs");
  }
  return {true, "(" + std::to_string(kCorpus.size()) + " programs)"};
}

// --- 10: stretch -----------------------------------------------------------------

Outcome criterion_somedup() {
  RunResult r = run_goal(corpus("somedup.mcy"), "someDup [1,2,1]",
                         {.max_answers = 1, .max_steps = 1'000'000, .dfs = false});
  if (r.incomplete) return fail("step budget exhausted");
  if (r.values != std::vector<std::string>{"1"})
    return fail(r.values.empty() ? "no answer" : "first answer " + r.values[0]);
  return {true, {}};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> run;
    bool gating;
  };
  const std::vector<Criterion> criteria = {
      {"zip compiles to the nested-case tree (goldens)", criterion_zip, true},
      {"head2 ICurry matches the frozen listing", criterion_head, true},
      {"oneTwo builds the four-node cyclic graph", criterion_one_two, true},
      {"choices fork, failures stay silent", criterion_choice, true},
      {"sharing decides once, copying twice", criterion_sharing, true},
      {"head of a free list narrows to one unbound answer", criterion_narrowing, true},
      {"VM agrees with the reference on random programs", criterion_differential, true},
      {"normalization establishes the preconditions", criterion_preconditions, true},
      {"JSON round-trips with stable bytes", criterion_json, true},
      {"stretch: someDup [1,2,1] answers 1 first", criterion_somedup, false},
  };

  int gating_failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    if (!o.pass && criteria[i].gating) ++gating_failures;
    std::string note = o.note.empty() ? std::string() : "  " + o.note;
    std::printf("%2zu %-52s %s%s%s\n", i + 1, criteria[i].label,
                o.pass ? "PASS" : "FAIL",
                criteria[i].gating ? "" : " [advisory]", note.c_str());
  }
  if (gating_failures)
    std::printf("acceptance: %d gating criteria failed\n", gating_failures);
  else
    std::printf("acceptance: all gating criteria passed\n");
  return gating_failures ? 1 : 0;
}
