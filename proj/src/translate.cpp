#include "icc/translate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "icc/builtins.hpp"

namespace icc {
namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw CompileError({{}, "translate: " + msg});
}

struct Translator {
  const TypeTable& types;
  const FlatFunction& fn;
  VarId next_var;
  std::map<VarId, std::string> names;

  IExpr expr(const FlatExpr& e) {
    switch (e.kind) {
      case FlatKind::Var:
        return IExpr::mk_var(VarRef::local(e.var));
      case FlatKind::Lit:
        return IExpr::mk_int(e.lit);
      case FlatKind::ConsApply: {
        std::vector<IExpr> args;
        for (const auto& k : e.kids) args.push_back(expr(k));
        return IExpr::mk_node({LabelKind::Constructor, e.sym}, std::move(args));
      }
      case FlatKind::FuncApply: {
        std::vector<IExpr> args;
        for (const auto& k : e.kids) args.push_back(expr(k));
        return IExpr::mk_node({LabelKind::Function, e.sym}, std::move(args));
      }
      case FlatKind::Or:
        return IExpr::mk_or(expr(e.kids[0]), expr(e.kids[1]));
      default:
        bad("unnormalized expression reached E (" + sym_name(fn.name) + ")");
    }
  }

  // Collects patch paths: occurrences of `targets` inside the node structure
  // of a binding expression. Paths are 1-based successor indexes; an Or at the
  // top counts as a '?' node with two successors.
  void collect_patches(const FlatExpr& e, const std::set<VarId>& targets, std::vector<int>& path,
                       std::vector<std::pair<std::vector<int>, VarId>>& out) {
    switch (e.kind) {
      case FlatKind::Var:
        if (targets.count(e.var)) {
          if (path.empty()) bad("bare forward alias should have been reordered");
          out.emplace_back(path, e.var);
        }
        break;
      case FlatKind::ConsApply:
      case FlatKind::FuncApply:
      case FlatKind::Or:
        for (size_t i = 0; i < e.kids.size(); ++i) {
          path.push_back(static_cast<int>(i) + 1);
          collect_patches(e.kids[i], targets, path, out);
          path.pop_back();
        }
        break;
      default:
        break;
    }
  }

  void translate_let(const FlatExpr& let, IBlock& b) {
    const size_t n = let.bind_count();
    for (VarId v : let.vars) b.decls.push_back({false, v});

    // Bare-variable bindings referencing later bindings of the same let are
    // aliases: emit them after their targets. Everything else goes in binding
    // order; holes left by forward references get patched below.
    std::set<VarId> let_ids(let.vars.begin(), let.vars.end());
    std::vector<size_t> order;
    std::vector<size_t> pending;
    std::set<VarId> assigned;
    for (size_t j = 0; j < n; ++j) {
      const FlatExpr& e = let.bind_expr(j);
      if (e.kind == FlatKind::Var && let_ids.count(e.var) && !assigned.count(e.var)) {
        pending.push_back(j);
        continue;
      }
      order.push_back(j);
      assigned.insert(let.vars[j]);
      // an alias whose target just materialized can now be emitted
      bool progress = true;
      while (progress) {
        progress = false;
        for (auto it = pending.begin(); it != pending.end(); ++it) {
          VarId tgt = let.bind_expr(*it).var;
          if (assigned.count(tgt)) {
            order.push_back(*it);
            assigned.insert(let.vars[*it]);
            pending.erase(it);
            progress = true;
            break;
          }
        }
      }
    }
    // alias cycles (x = y; y = x): emit in binding order; the VM reads a hole,
    // which fails — the denotation of a circular alias
    for (size_t j : pending) order.push_back(j);

    for (size_t j : order) {
      b.assigns.push_back({VarRef::local(let.vars[j]), expr(let.bind_expr(j))});
    }
    // patches: occurrences of variables of this let that were unassigned when
    // the referring node was built
    std::set<VarId> built;
    for (size_t j : order) {
      std::set<VarId> targets;
      for (VarId v : let_ids)
        if (!built.count(v)) targets.insert(v);
      targets.insert(let.vars[j]);  // self-reference always patches
      std::vector<std::pair<std::vector<int>, VarId>> occ;
      std::vector<int> path;
      const FlatExpr& e = let.bind_expr(j);
      if (e.kind == FlatKind::Var) {
        // alias: no node structure, nothing to patch
      } else {
        collect_patches(e, targets, path, occ);
      }
      for (auto& [p, v] : occ) {
        VarRef lhs = VarRef::local(let.vars[j]);
        lhs.path = p;
        b.assigns.push_back({lhs, IExpr::mk_var(VarRef::local(v))});
      }
      built.insert(let.vars[j]);
    }
  }

  std::string fresh_case_name() {
    // x_e, x_e2, x_e3, ... within one function
    int k = ++case_vars;
    return k == 1 ? "x_e" : "x_e" + std::to_string(k);
  }
  int case_vars = 0;

  IBlock block(const std::vector<VarId>& vars, bool from_root, VarId base, const FlatExpr& e) {
    IBlock b;
    for (VarId v : vars) b.decls.push_back({false, v});
    for (size_t i = 0; i < vars.size(); ++i) {
      VarRef src = from_root ? VarRef::root_arg(static_cast<int>(i) + 1)
                             : VarRef::select(base, static_cast<int>(i) + 1);
      b.assigns.push_back({VarRef::local(vars[i]), IExpr::mk_var(src)});
    }
    const FlatExpr* core = &e;
    while (true) {
      if (core->kind == FlatKind::Let) {
        translate_let(*core, b);
        core = &core->body();
      } else if (core->kind == FlatKind::Free) {
        for (VarId v : core->vars) b.decls.push_back({true, v});
        core = &core->body();
      } else {
        break;
      }
    }
    switch (core->kind) {
      case FlatKind::Exempt:
        b.stm.kind = IStmtKind::Exempt;
        break;
      case FlatKind::Case:
        case_stmt(*core, b);
        break;
      default:
        b.stm.kind = IStmtKind::Return;
        b.stm.expr = expr(*core);
        break;
    }
    return b;
  }

  void case_stmt(const FlatExpr& c, IBlock& b) {
    const FlatExpr& s = c.scrutinee();
    VarId xe;
    if (s.kind == FlatKind::Var) {
      xe = s.var;  // reuse: no fresh variable, no copy assignment
    } else {
      xe = next_var++;
      names.emplace(xe, fresh_case_name());
      b.decls.push_back({false, xe});
      b.assigns.push_back({VarRef::local(xe), expr(s)});
    }
    IStatement& stm = b.stm;
    stm.scrut = VarRef::local(xe);
    if (!c.pats.empty() && c.pats[0].is_lit) {
      stm.kind = IStmtKind::CaseLit;
      for (size_t i = 0; i < c.branch_count(); ++i) {
        stm.lits.push_back(c.pats[i].lit);
        stm.blocks.push_back(block({}, false, 0, c.branch_body(i)));
      }
      IBlock dflt;
      dflt.stm.kind = IStmtKind::Exempt;
      stm.blocks.push_back(std::move(dflt));
      return;
    }
    stm.kind = IStmtKind::Case;
    for (size_t i = 0; i < c.branch_count(); ++i) {
      const Pattern& p = c.pats[i];
      stm.ctors.push_back(p.ctor);
      const FlatExpr& body = c.branch_body(i);
      // peephole: body is exactly one pattern variable -> return xe[k]
      if (body.kind == FlatKind::Var) {
        auto it = std::find(p.vars.begin(), p.vars.end(), body.var);
        if (it != p.vars.end()) {
          IBlock blk;
          blk.stm.kind = IStmtKind::Return;
          blk.stm.expr = IExpr::mk_var(VarRef::select(xe, static_cast<int>(it - p.vars.begin()) + 1));
          stm.blocks.push_back(std::move(blk));
          continue;
        }
      }
      stm.blocks.push_back(block(p.vars, false, xe, body));
    }
  }

  IFunction run() {
    IFunction out;
    out.name = fn.name;
    out.arity = fn.arity;
    names = fn.var_names;
    for (size_t i = 0; i < fn.params.size(); ++i) {
      if (!names.count(fn.params[i]))
        names[fn.params[i]] =
            fn.params.size() == 1 ? "arg" : "arg" + std::to_string(i + 1);
    }
    out.body = block(fn.params, true, 0, fn.body);
    out.var_names = std::move(names);
    return out;
  }
};

}  // namespace

IFunction translate_function(const TypeTable& types, const FlatFunction& fn) {
  Translator t{types, fn, flat_max_var(fn) + 1, {}};
  return t.run();
}

IProgram translate_program(const FlatProgram& program) {
  IProgram out;
  out.types = program.types;
  for (const auto& fn : program.functions)
    out.functions.push_back(translate_function(program.types, fn));
  return out;
}

}  // namespace icc
