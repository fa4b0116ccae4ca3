#include "icc/normalize.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace icc {
namespace {

bool is_pure(const FlatExpr& e) {
  switch (e.kind) {
    case FlatKind::Var:
    case FlatKind::Lit:
      return true;
    case FlatKind::ConsApply:
    case FlatKind::FuncApply:
      return std::all_of(e.kids.begin(), e.kids.end(), [](const FlatExpr& k) { return is_pure(k); });
    default:
      return false;
  }
}

// Free variables of `e` in first-occurrence order.
void free_vars_rec(const FlatExpr& e, std::set<VarId>& bound, std::vector<VarId>& out,
                   std::set<VarId>& seen) {
  switch (e.kind) {
    case FlatKind::Var:
      if (!bound.count(e.var) && seen.insert(e.var).second) out.push_back(e.var);
      break;
    case FlatKind::Lit:
    case FlatKind::Exempt:
      break;
    case FlatKind::ConsApply:
    case FlatKind::FuncApply:
    case FlatKind::Or:
      for (const auto& k : e.kids) free_vars_rec(k, bound, out, seen);
      break;
    case FlatKind::Case: {
      free_vars_rec(e.scrutinee(), bound, out, seen);
      for (size_t i = 0; i < e.branch_count(); ++i) {
        std::vector<VarId> added;
        for (VarId v : e.pats[i].vars)
          if (bound.insert(v).second) added.push_back(v);
        free_vars_rec(e.branch_body(i), bound, out, seen);
        for (VarId v : added) bound.erase(v);
      }
      break;
    }
    case FlatKind::Let: {
      std::vector<VarId> added;
      for (VarId v : e.vars)
        if (bound.insert(v).second) added.push_back(v);
      for (const auto& k : e.kids) free_vars_rec(k, bound, out, seen);
      for (VarId v : added) bound.erase(v);
      break;
    }
    case FlatKind::Free: {
      std::vector<VarId> added;
      for (VarId v : e.vars)
        if (bound.insert(v).second) added.push_back(v);
      free_vars_rec(e.body(), bound, out, seen);
      for (VarId v : added) bound.erase(v);
      break;
    }
  }
}

std::vector<VarId> free_vars(const FlatExpr& e) {
  std::set<VarId> bound, seen;
  std::vector<VarId> out;
  free_vars_rec(e, bound, out, seen);
  return out;
}

struct Lifter {
  FlatProgram& prog;
  std::map<SymId, int>& counters;
  std::set<SymId>& taken;  // every function name in the program so far
  SymId base = 0;
  std::map<VarId, std::string> base_names;  // copy: make_aux may reallocate prog.functions

  // Moves `e` into a fresh auxiliary function and returns the call replacing it.
  FlatExpr make_aux(FlatExpr e) {
    std::vector<VarId> fv = free_vars(e);
    SymId aux;
    do {  // earlier passes may have used lower counters for this base
      int k = ++counters[base];
      aux = intern(sym_module(base), sym_name(base) + "_aux" + std::to_string(k));
    } while (!taken.insert(aux).second);
    FlatFunction fn;
    fn.name = aux;
    fn.arity = static_cast<int>(fv.size());
    fn.params = fv;
    fn.body = std::move(e);
    for (VarId v : fv) {
      auto it = base_names.find(v);
      if (it != base_names.end()) fn.var_names[v] = it->second;
    }
    prog.functions.push_back(std::move(fn));
    std::vector<FlatExpr> args;
    args.reserve(fv.size());
    for (VarId v : fv) args.push_back(FlatExpr::mk_var(v));
    return FlatExpr::mk_call(aux, std::move(args));
  }

  // lift_impure_args: post-order purification.
  void purify(FlatExpr& e) {
    switch (e.kind) {
      case FlatKind::Var:
      case FlatKind::Lit:
      case FlatKind::Exempt:
        break;
      case FlatKind::ConsApply:
      case FlatKind::FuncApply:
        for (auto& k : e.kids) {
          purify(k);
          if (!is_pure(k)) k = make_aux(std::move(k));
        }
        break;
      case FlatKind::Or:
        for (auto& k : e.kids) {
          purify(k);
          if (!is_pure(k)) k = make_aux(std::move(k));
        }
        break;
      case FlatKind::Case:
        purify(e.scrutinee());
        for (size_t i = 0; i < e.branch_count(); ++i) purify(e.branch_body(i));
        break;
      case FlatKind::Let:
        for (size_t i = 0; i < e.bind_count(); ++i) {
          FlatExpr& b = e.bind_expr(i);
          purify(b);
          // bindings must be pure or Or; Case/Let/Free move out
          if (b.kind == FlatKind::Case || b.kind == FlatKind::Let || b.kind == FlatKind::Free ||
              b.kind == FlatKind::Exempt)
            b = make_aux(std::move(b));
        }
        purify(e.body());
        break;
      case FlatKind::Free:
        purify(e.body());
        break;
    }
  }

  // normalize_scrutinees: only case scrutinees move.
  void scrutinees(FlatExpr& e) {
    switch (e.kind) {
      case FlatKind::Case: {
        scrutinees(e.scrutinee());
        for (size_t i = 0; i < e.branch_count(); ++i) scrutinees(e.branch_body(i));
        FlatExpr& s = e.scrutinee();
        if (s.kind == FlatKind::Or || s.kind == FlatKind::Let || s.kind == FlatKind::Free ||
            s.kind == FlatKind::Case || s.kind == FlatKind::Exempt)
          s = make_aux(std::move(s));
        break;
      }
      case FlatKind::ConsApply:
      case FlatKind::FuncApply:
      case FlatKind::Or:
      case FlatKind::Let:
      case FlatKind::Free:
        for (auto& k : e.kids) scrutinees(k);
        break;
      default:
        break;
    }
  }
};

}  // namespace

namespace {

std::set<SymId> function_names(const FlatProgram& program) {
  std::set<SymId> names;
  for (const auto& fn : program.functions) names.insert(fn.name);
  return names;
}

}  // namespace

void lift_impure_args(FlatProgram& program) {
  std::map<SymId, int> counters;
  std::set<SymId> taken = function_names(program);
  for (size_t i = 0; i < program.functions.size(); ++i) {
    // by-index: make_aux appends, which may reallocate
    Lifter lf{program, counters, taken, program.functions[i].name,
              program.functions[i].var_names};
    FlatExpr body = std::move(program.functions[i].body);
    lf.purify(body);
    program.functions[i].body = std::move(body);
  }
}

void normalize_scrutinees(FlatProgram& program) {
  std::map<SymId, int> counters;
  std::set<SymId> taken = function_names(program);
  for (size_t i = 0; i < program.functions.size(); ++i) {
    Lifter lf{program, counters, taken, program.functions[i].name,
              program.functions[i].var_names};
    FlatExpr body = std::move(program.functions[i].body);
    lf.scrutinees(body);
    program.functions[i].body = std::move(body);
  }
}

namespace {

struct Completer {
  const TypeTable& types;
  VarId next;

  void walk(FlatExpr& e) {
    for (auto& k : e.kids) walk(k);
    if (e.kind != FlatKind::Case) return;
    if (e.pats.empty()) return;  // validate_flat rejects; nothing to do here
    if (e.pats[0].is_lit) {
      // sort branches by literal value
      std::vector<size_t> order(e.pats.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](size_t a, size_t b) { return e.pats[a].lit < e.pats[b].lit; });
      std::vector<Pattern> pats;
      std::vector<FlatExpr> kids;
      kids.push_back(std::move(e.kids[0]));
      for (size_t i : order) {
        pats.push_back(std::move(e.pats[i]));
        kids.push_back(std::move(e.kids[i + 1]));
      }
      e.pats = std::move(pats);
      e.kids = std::move(kids);
      return;
    }
    auto info = types.lookup_ctor(e.pats[0].ctor);
    if (!info) throw CompileError({{}, "unknown constructor in case: " + sym_qualified(e.pats[0].ctor)});
    const auto& all = types.constructors_of(info->type_name);
    std::map<SymId, size_t> have;
    for (size_t i = 0; i < e.pats.size(); ++i) {
      auto ci = types.lookup_ctor(e.pats[i].ctor);
      if (!ci || ci->type_name != info->type_name)
        throw CompileError({{}, "case branches mix types"});
      have[e.pats[i].ctor] = i;
    }
    std::vector<Pattern> pats;
    std::vector<FlatExpr> kids;
    kids.push_back(std::move(e.kids[0]));
    for (const auto& c : all) {
      auto it = have.find(c.name);
      if (it != have.end()) {
        pats.push_back(std::move(e.pats[it->second]));
        kids.push_back(std::move(e.kids[it->second + 1]));
      } else {
        Pattern p;
        p.ctor = c.name;
        for (int j = 0; j < c.arity; ++j) p.vars.push_back(next++);
        pats.push_back(std::move(p));
        kids.push_back(FlatExpr::mk_exempt());
      }
    }
    e.pats = std::move(pats);
    e.kids = std::move(kids);
  }
};

}  // namespace

void complete_and_order_cases(FlatProgram& program) {
  for (auto& fn : program.functions) {
    Completer c{program.types, flat_max_var(fn) + 1};
    c.walk(fn.body);
  }
}

void normalize(FlatProgram& program) {
  lift_impure_args(program);
  normalize_scrutinees(program);
  complete_and_order_cases(program);
}

// --- precondition checker ------------------------------------------------------

namespace {

struct Checker {
  const FlatProgram& prog;
  std::vector<PrecondViolation>& out;
  SymId current = 0;

  void fail(const std::string& msg) { out.push_back({current, msg}); }

  void check(const FlatExpr& e, bool tail) {
    switch (e.kind) {
      case FlatKind::Var:
      case FlatKind::Lit:
        break;
      case FlatKind::Exempt:
        if (!tail) fail("exempt outside tail position");
        break;
      case FlatKind::ConsApply:
      case FlatKind::FuncApply:
        for (const auto& k : e.kids)
          if (!is_pure(k)) fail("impure argument of " + sym_name(e.sym));
        break;
      case FlatKind::Or:
        for (const auto& k : e.kids)
          if (!is_pure(k)) fail("impure operand of or");
        break;
      case FlatKind::Case: {
        const FlatExpr& s = e.scrutinee();
        switch (s.kind) {
          case FlatKind::Var:
          case FlatKind::Lit:
            break;
          case FlatKind::ConsApply:
          case FlatKind::FuncApply:
            if (!is_pure(s)) fail("case scrutinee application has impure arguments");
            break;
          default:
            fail("case scrutinee must be a variable, literal, or application");
        }
        if (e.pats.empty()) {
          fail("case with no branches");
          break;
        }
        if (!e.pats[0].is_lit) {
          auto info = prog.types.lookup_ctor(e.pats[0].ctor);
          if (!info) {
            fail("unknown constructor in case");
          } else {
            const auto& all = prog.types.constructors_of(info->type_name);
            if (e.pats.size() != all.size()) {
              fail("case over " + sym_name(info->type_name) + " has " +
                   std::to_string(e.pats.size()) + " branches, type has " +
                   std::to_string(all.size()));
            } else {
              for (size_t i = 0; i < all.size(); ++i)
                if (e.pats[i].is_lit || e.pats[i].ctor != all[i].name) {
                  fail("case branches out of tag order");
                  break;
                }
            }
          }
        }
        for (size_t i = 0; i < e.branch_count(); ++i) check(e.branch_body(i), true);
        break;
      }
      case FlatKind::Let:
        for (size_t i = 0; i < e.bind_count(); ++i) {
          const FlatExpr& b = e.bind_expr(i);
          bool ok = is_pure(b) ||
                    (b.kind == FlatKind::Or && is_pure(b.kids[0]) && is_pure(b.kids[1]));
          if (!ok) fail("let binding neither pure nor or");
        }
        check(e.body(), true);
        break;
      case FlatKind::Free:
        check(e.body(), true);
        break;
    }
  }
};

}  // namespace

std::vector<PrecondViolation> check_preconditions(const FlatProgram& program) {
  std::vector<PrecondViolation> out;
  Checker c{program, out};
  for (const auto& fn : program.functions) {
    c.current = fn.name;
    c.check(fn.body, true);
  }
  return out;
}

}  // namespace icc
