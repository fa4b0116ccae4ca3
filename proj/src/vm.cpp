#include "icc/vm.hpp"

#include <deque>
#include <set>
#include <utility>

#include "icc/builtins.hpp"

namespace icc {

namespace {

void expr_vars(const IExpr& e, std::set<VarId>& refs, bool& has_root) {
  if (e.kind == IExprKind::Var) {
    if (e.ref.base == RefBase::Local) refs.insert(e.ref.var);
    else has_root = true;
  }
  for (const IExpr& a : e.args) expr_vars(a, refs, has_root);
}

// Collects, over a block and everything nested in it, the variables it reads
// (patch bases count, plain assignment targets do not), the variables it
// declares, and whether it touches the root node.
void block_vars(const IBlock& b, std::set<VarId>& refs, std::set<VarId>& decls,
                bool& has_root) {
  for (const IDecl& d : b.decls) decls.insert(d.var);
  for (const IAssign& a : b.assigns) {
    if (!a.lhs.path.empty()) {
      if (a.lhs.base == RefBase::Local) refs.insert(a.lhs.var);
      else has_root = true;
    }
    expr_vars(a.rhs, refs, has_root);
  }
  const IStatement& s = b.stm;
  if (s.kind == IStmtKind::Return) {
    expr_vars(s.expr, refs, has_root);
  } else if (s.kind == IStmtKind::Case || s.kind == IStmtKind::CaseLit) {
    if (s.scrut.base == RefBase::Local) refs.insert(s.scrut.var);
    else has_root = true;
    for (const IBlock& blk : s.blocks) block_vars(blk, refs, decls, has_root);
  }
}

}  // namespace

VM::VM(IProgram program) : prog_(std::move(program)), steps_left_(1'000'000) {
  for (const IFunction& f : prog_.functions) {
    if (funcs_.count(f.name)) {
      throw VmError("duplicate function at load: " + sym_qualified(f.name));
    }
    funcs_.emplace(f.name, FuncInfo{&f, 0});
  }
  for (const IFunction& f : prog_.functions) index_function(f);

  if (auto t = prog_.types.resolve_ctor_name("True", kModuleMain)) {
    if (auto f = prog_.types.resolve_ctor_name("False", kModuleMain)) {
      auto ti = prog_.types.lookup_ctor(*t);
      auto fi = prog_.types.lookup_ctor(*f);
      if (ti && fi && ti->type_name == fi->type_name) {
        true_sym_ = *t;
        false_sym_ = *f;
        true_info_ = ti;
        false_info_ = fi;
      }
    }
  }
}

void VM::index_function(const IFunction& fn) {
  std::set<VarId> refs, decls;
  bool has_root = false;
  block_vars(fn.body, refs, decls, has_root);
  VarId max_var = 0;
  for (VarId v : refs) max_var = std::max(max_var, v);
  for (VarId v : decls) max_var = std::max(max_var, v);
  for (const auto& [v, name] : fn.var_names) max_var = std::max(max_var, v);
  funcs_.at(fn.name).max_var = max_var;
  int case_counter = 0;
  index_blocks(fn, fn.body, case_counter);
}

void VM::index_blocks(const IFunction& fn, const IBlock& b, int& case_counter) {
  const IStatement& s = b.stm;
  if (s.kind != IStmtKind::Case && s.kind != IStmtKind::CaseLit) return;
  ++case_counter;
  bool bare_local = s.scrut.base == RefBase::Local && s.scrut.path.empty();
  std::set<VarId> refs, decls;
  bool has_root = false;
  for (const IBlock& blk : s.blocks) block_vars(blk, refs, decls, has_root);
  if (bare_local && !has_root) {
    ResumePoint rp;
    rp.owner = &fn;
    rp.stm = &s;
    rp.scrut_var = s.scrut.var;
    for (VarId v : refs) {
      if (v != rp.scrut_var && !decls.count(v)) rp.captured.push_back(v);
    }
    SymId rsym = intern(kModuleVm, sym_qualified(fn.name) + "#case" +
                                       std::to_string(case_counter));
    resume_sym_[&s] = rsym;
    resumes_.emplace(rsym, std::move(rp));
  }
  for (const IBlock& blk : s.blocks) index_blocks(fn, blk, case_counter);
}

void VM::spend() {
  if (steps_left_ <= 0) throw Budget{};
  --steps_left_;
  ++steps_used_;
}

VM::Slot& VM::slot(Env& env, VarId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= env.size()) {
    throw VmError("variable id out of range: " + std::to_string(v));
  }
  return env[v];
}

std::pair<NodeId, std::optional<VM::Prov>> VM::resolve_ref(const VarRef& ref,
                                                           Env& env,
                                                           NodeId root) {
  NodeId cur = 0;
  std::optional<Prov> prov;
  if (ref.base == RefBase::Root) {
    cur = root;
  } else {
    Slot& s = slot(env, ref.var);
    if (!s.assigned) {
      // Forward reference inside a node under construction: a later patch
      // replaces this placeholder, or it stays a failure.
      return {g_.hole(), std::nullopt};
    }
    cur = s.node;
    prov = s.prov;
  }
  for (int p : ref.path) {
    NodeId parent = g_.deref(cur);
    const auto& succ = g_.at(parent).succ;
    if (p < 1 || static_cast<std::size_t>(p) > succ.size()) {
      throw VmError("successor index out of range");
    }
    cur = succ[p - 1];
    prov = Prov{parent, p - 1};
  }
  return {cur, prov};
}

NodeId VM::build(const IExpr& e, Env& env, NodeId root) {
  switch (e.kind) {
    case IExprKind::Var:
      return resolve_ref(e.ref, env, root).first;
    case IExprKind::Int:
      return g_.make_int(e.lit);
    case IExprKind::Node: {
      std::vector<NodeId> args;
      args.reserve(e.args.size());
      for (const IExpr& a : e.args) args.push_back(build(a, env, root));
      if (e.label.kind == LabelKind::Constructor) {
        auto info = prog_.types.lookup_ctor(e.label.sym);
        if (!info) {
          throw VmError("unknown constructor: " + sym_qualified(e.label.sym));
        }
        if (static_cast<int>(args.size()) > info->arity) {
          throw VmError("over-saturated constructor: " +
                        sym_qualified(e.label.sym));
        }
        while (static_cast<int>(args.size()) < info->arity) {
          args.push_back(g_.hole());
        }
        return g_.make_ctor(e.label.sym, info->tag, std::move(args));
      }
      int arity = -1;
      if (auto it = funcs_.find(e.label.sym); it != funcs_.end()) {
        arity = it->second.fn->arity;
      } else if (is_builtin(e.label.sym)) {
        arity = builtin_arity(e.label.sym);
      }
      if (arity >= 0) {
        if (static_cast<int>(args.size()) > arity) {
          throw VmError("over-saturated call: " + sym_qualified(e.label.sym));
        }
        while (static_cast<int>(args.size()) < arity) args.push_back(g_.hole());
      }
      return g_.make_func(e.label.sym, std::move(args));
    }
    case IExprKind::Or: {
      NodeId l = build(e.args[0], env, root);
      NodeId r = build(e.args[1], env, root);
      return g_.make_choice(g_.fresh_choice_id(), l, r);
    }
  }
  throw VmError("corrupt expression");
}

void VM::step(NodeId n) {
  spend();
  n = g_.deref(n);
  SymId f = g_.at(n).sym;
  if (auto it = funcs_.find(f); it != funcs_.end()) {
    const IFunction& fn = *it->second.fn;
    Env env(static_cast<std::size_t>(it->second.max_var) + 1);
    exec_block(fn, fn.body, env, n);
    return;
  }
  if (auto it = resumes_.find(f); it != resumes_.end()) {
    const ResumePoint& rp = it->second;
    std::vector<NodeId> succ = g_.at(n).succ;
    if (succ.size() != rp.captured.size() + 1) {
      throw VmError("corrupt suspended case application");
    }
    Env env(static_cast<std::size_t>(funcs_.at(rp.owner->name).max_var) + 1);
    slot(env, rp.scrut_var) = Slot{succ[0], true, std::nullopt};
    for (std::size_t i = 0; i < rp.captured.size(); ++i) {
      slot(env, rp.captured[i]) = Slot{succ[i + 1], true, std::nullopt};
    }
    exec_case(*rp.owner, *rp.stm, env, n, succ[0]);
    return;
  }
  if (is_builtin(f)) {
    exec_builtin(n);
    return;
  }
  throw VmError("unknown function symbol: " + sym_qualified(f));
}

void VM::hnf(NodeId n) {
  for (;;) {
    NodeId t = g_.deref(n);
    if (g_.at(t).tag != NodeTag::Func) return;
    step(t);
  }
}

void VM::exec_block(const IFunction& fn, const IBlock& b, Env& env,
                    NodeId root) {
  for (const IDecl& d : b.decls) {
    Slot& s = slot(env, d.var);
    if (d.is_free) {
      s = Slot{g_.make_free(), true, std::nullopt};
    } else {
      s = Slot{};
    }
  }
  for (const IAssign& a : b.assigns) {
    if (a.lhs.base != RefBase::Local) {
      throw VmError("assignment to the root node in " + sym_qualified(fn.name));
    }
    if (a.lhs.path.empty()) {
      Slot& s = slot(env, a.lhs.var);
      if (a.rhs.kind == IExprKind::Var) {
        auto [nid, prov] = resolve_ref(a.rhs.ref, env, root);
        s = Slot{nid, true, prov};
      } else {
        s = Slot{build(a.rhs, env, root), true, std::nullopt};
      }
    } else {
      Slot& s = slot(env, a.lhs.var);
      if (!s.assigned) {
        throw VmError("patch into an unassigned variable in " +
                      sym_qualified(fn.name));
      }
      NodeId target = s.node;
      for (std::size_t i = 0; i + 1 < a.lhs.path.size(); ++i) {
        NodeId parent = g_.deref(target);
        const auto& succ = g_.at(parent).succ;
        int p = a.lhs.path[i];
        if (p < 1 || static_cast<std::size_t>(p) > succ.size()) {
          throw VmError("patch path out of range in " + sym_qualified(fn.name));
        }
        target = succ[p - 1];
      }
      target = g_.deref(target);
      int idx = a.lhs.path.back() - 1;
      auto& succ = g_.at(target).succ;
      if (idx < 0 || static_cast<std::size_t>(idx) >= succ.size()) {
        throw VmError("patch index out of range in " + sym_qualified(fn.name));
      }
      succ[idx] = build(a.rhs, env, root);
    }
  }
  switch (b.stm.kind) {
    case IStmtKind::Return: {
      if (b.stm.expr.kind == IExprKind::Var) {
        NodeId nid = resolve_ref(b.stm.expr.ref, env, root).first;
        if (g_.deref(nid) == g_.deref(root)) {
          throw VmError("function result refers to itself in " +
                        sym_qualified(fn.name));
        }
        g_.forward_to(root, nid);
      } else {
        NodeId built = build(b.stm.expr, env, root);
        g_.overwrite_with(root, built);
      }
      return;
    }
    case IStmtKind::Exempt:
      g_.set_fail(root);
      return;
    case IStmtKind::Case:
    case IStmtKind::CaseLit:
      exec_case(fn, b.stm, env, root, std::nullopt);
      return;
  }
}

const std::vector<ConstructorDecl>& VM::case_ctors(const IStatement& stm) const {
  auto info = prog_.types.lookup_ctor(stm.ctors[0]);
  if (!info) {
    throw VmError("case over an unknown constructor: " +
                  sym_qualified(stm.ctors[0]));
  }
  return prog_.types.constructors_of(info->type_name);
}

void VM::exec_case(const IFunction& fn, const IStatement& stm, Env& env,
                   NodeId root, std::optional<NodeId> scrut_override) {
  NodeId cur = 0;
  std::optional<Prov> prov;
  if (scrut_override) {
    cur = *scrut_override;
  } else {
    auto [c, p] = resolve_ref(stm.scrut, env, root);
    cur = c;
    prov = p;
  }
  for (;;) {
    NodeId s = g_.deref(cur);
    const Node& sn = g_.at(s);
    switch (sn.tag) {
      case NodeTag::Func:
        hnf(s);
        continue;
      case NodeTag::Fail:
        g_.set_fail(root);
        return;
      case NodeTag::Choice: {
        bool anchored =
            prov &&
            g_.deref(g_.at(g_.deref(prov->parent)).succ[prov->index]) == s;
        if (anchored) {
          spend();
          g_.pull_tab(prov->parent, prov->index);
          return;  // the caller re-enters; the choice is now one level up
        }
        auto it = resume_sym_.find(&stm);
        if (it == resume_sym_.end()) {
          throw VmError("case cannot suspend over a choice in " +
                        sym_qualified(fn.name));
        }
        const ResumePoint& rp = resumes_.at(it->second);
        std::vector<NodeId> caps;
        caps.reserve(rp.captured.size());
        for (VarId v : rp.captured) {
          Slot& cs = slot(env, v);
          if (!cs.assigned) {
            throw VmError("suspended case captures an unassigned variable in " +
                          sym_qualified(fn.name));
          }
          caps.push_back(cs.node);
        }
        std::vector<NodeId> left{sn.succ[0]}, right{sn.succ[1]};
        long long id = sn.lit;
        left.insert(left.end(), caps.begin(), caps.end());
        right.insert(right.end(), caps.begin(), caps.end());
        NodeId fl = g_.make_func(it->second, std::move(left));
        NodeId fr = g_.make_func(it->second, std::move(right));
        g_.set_choice(root, id, fl, fr);
        return;
      }
      case NodeTag::Free: {
        if (stm.kind == IStmtKind::CaseLit) {
          throw VmError("cannot narrow an integer variable in " +
                        sym_qualified(fn.name));
        }
        g_.instantiate_free(s, case_ctors(stm));
        continue;
      }
      case NodeTag::Int: {
        if (stm.kind != IStmtKind::CaseLit) {
          throw VmError("case expected a constructor, got an integer, in " +
                        sym_qualified(fn.name));
        }
        std::size_t idx = stm.lits.size();  // default branch
        for (std::size_t i = 0; i < stm.lits.size(); ++i) {
          if (stm.lits[i] == sn.lit) {
            idx = i;
            break;
          }
        }
        exec_block(fn, stm.blocks[idx], env, root);
        return;
      }
      case NodeTag::Ctor: {
        if (stm.kind != IStmtKind::Case) {
          throw VmError("case expected an integer, got a constructor, in " +
                        sym_qualified(fn.name));
        }
        int idx = sn.ctor_tag;
        if (idx < 0 || static_cast<std::size_t>(idx) >= stm.ctors.size() ||
            stm.ctors[idx] != sn.sym) {
          throw VmError("scrutinee " + sym_qualified(sn.sym) +
                        " does not belong to the case type in " +
                        sym_qualified(fn.name));
        }
        exec_block(fn, stm.blocks[idx], env, root);
        return;
      }
      case NodeTag::Fwd:
        throw VmError("internal: dereference left a forward node");
    }
  }
}

void VM::set_bool(NodeId n, bool v) {
  if (!true_info_ || !false_info_) {
    throw VmError("program defines no Bool type for a builtin result");
  }
  const auto& info = v ? *true_info_ : *false_info_;
  g_.set_ctor(n, v ? true_sym_ : false_sym_, info.tag, {});
}

const std::vector<ConstructorDecl>& VM::bool_ctors() {
  if (!true_info_) {
    throw VmError("program defines no Bool type for a builtin result");
  }
  return prog_.types.constructors_of(true_info_->type_name);
}

void VM::exec_builtin(NodeId n) {
  n = g_.deref(n);
  Builtin b = builtin_of(g_.at(n).sym);
  if (g_.at(n).succ.size() < 2) {
    g_.set_fail(n);  // under-applied: no value
    return;
  }
  if (b == Builtin::Eq) {
    exec_eq(n);
    return;
  }
  if (b == Builtin::And) {
    exec_and(n);
    return;
  }
  long long vals[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    for (;;) {
      hnf(g_.at(n).succ[i]);
      NodeId a = g_.deref(g_.at(n).succ[i]);
      const Node& an = g_.at(a);
      if (an.tag == NodeTag::Fail) {
        g_.set_fail(n);
        return;
      }
      if (an.tag == NodeTag::Choice) {
        spend();
        g_.pull_tab(n, i);
        return;
      }
      if (an.tag == NodeTag::Free) {
        throw VmError("cannot narrow an integer variable in " +
                      sym_qualified(g_.at(n).sym));
      }
      if (an.tag == NodeTag::Int) {
        vals[i] = an.lit;
        break;
      }
      throw VmError(sym_qualified(g_.at(n).sym) + " expects integer operands");
    }
  }
  switch (b) {
    case Builtin::Add:
      g_.set_int(n, vals[0] + vals[1]);
      return;
    case Builtin::Sub:
      g_.set_int(n, vals[0] - vals[1]);
      return;
    case Builtin::Lt:
      set_bool(n, vals[0] < vals[1]);
      return;
    case Builtin::Ge:
      set_bool(n, vals[0] >= vals[1]);
      return;
    default:
      throw VmError("internal: unhandled builtin");
  }
}

void VM::exec_eq(NodeId n) {
  NodeId ops[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    for (;;) {
      hnf(g_.at(n).succ[i]);
      NodeId a = g_.deref(g_.at(n).succ[i]);
      NodeTag t = g_.at(a).tag;
      if (t == NodeTag::Fail) {
        g_.set_fail(n);
        return;
      }
      if (t == NodeTag::Choice) {
        spend();
        g_.pull_tab(n, i);
        return;
      }
      ops[i] = a;
      break;
    }
  }
  const Node& l = g_.at(ops[0]);
  const Node& r = g_.at(ops[1]);
  if (l.tag == NodeTag::Int && r.tag == NodeTag::Int) {
    set_bool(n, l.lit == r.lit);
    return;
  }
  if (l.tag == NodeTag::Free && r.tag == NodeTag::Free) {
    throw VmError("cannot narrow the equality of two free variables");
  }
  // A free variable against a ground side narrows the variable; equality is
  // then re-examined on the next step.
  if (l.tag == NodeTag::Free || r.tag == NodeTag::Free) {
    NodeId free_node = l.tag == NodeTag::Free ? ops[0] : ops[1];
    const Node& ground = l.tag == NodeTag::Free ? r : l;
    if (ground.tag == NodeTag::Int) {
      // Either the literal itself, or no value at all.
      NodeId lit = g_.make_int(ground.lit);
      NodeId bot = g_.make_fail();
      g_.set_choice(free_node, g_.fresh_choice_id(), lit, bot);
      return;
    }
    auto info = prog_.types.lookup_ctor(ground.sym);
    if (!info) {
      throw VmError("unknown constructor in ==: " + sym_qualified(ground.sym));
    }
    g_.instantiate_free(free_node, prog_.types.constructors_of(info->type_name));
    return;
  }
  if (l.tag == NodeTag::Ctor && r.tag == NodeTag::Ctor) {
    if (l.sym != r.sym) {
      set_bool(n, false);
      return;
    }
    std::size_t k = l.succ.size();
    if (k == 0) {
      set_bool(n, true);
      return;
    }
    std::vector<NodeId> la = l.succ, ra = r.succ;
    SymId eq = builtin_sym(Builtin::Eq);
    SymId conj = builtin_sym(Builtin::And);
    NodeId acc = g_.make_func(eq, {la[k - 1], ra[k - 1]});
    for (std::size_t i = k - 1; i-- > 0;) {
      acc = g_.make_func(conj, {g_.make_func(eq, {la[i], ra[i]}), acc});
    }
    g_.overwrite_with(n, acc);
    return;
  }
  // Mixed integer/constructor comparison never succeeds.
  set_bool(n, false);
}

void VM::exec_and(NodeId n) {
  for (;;) {
    hnf(g_.at(n).succ[0]);
    NodeId a = g_.deref(g_.at(n).succ[0]);
    const Node& an = g_.at(a);
    switch (an.tag) {
      case NodeTag::Fail:
        g_.set_fail(n);
        return;
      case NodeTag::Choice:
        spend();
        g_.pull_tab(n, 0);
        return;
      case NodeTag::Free:
        g_.instantiate_free(a, bool_ctors());
        continue;
      case NodeTag::Ctor:
        if (an.sym == false_sym_) {
          set_bool(n, false);
          return;
        }
        if (an.sym == true_sym_) {
          g_.forward_to(n, g_.at(n).succ[1]);
          return;
        }
        throw VmError("conjunction expects Bool operands");
      case NodeTag::Int:
        throw VmError("conjunction expects Bool operands");
      case NodeTag::Func:
      case NodeTag::Fwd:
        throw VmError("internal: conjunction operand not in head normal form");
    }
  }
}

NodeId VM::make_goal(SymId goal) {
  auto it = funcs_.find(goal);
  if (it == funcs_.end()) {
    throw VmError("unknown goal function: " + sym_qualified(goal));
  }
  if (it->second.fn->arity != 0) {
    throw VmError("goal function must take no arguments: " +
                  sym_qualified(goal));
  }
  return g_.make_func(goal, {});
}

VM::Desc VM::descend(NodeId root) {
  NodeId r = g_.deref(root);
  NodeTag t = g_.at(r).tag;
  if (t == NodeTag::Int || t == NodeTag::Free) return Desc::Done;
  std::unordered_map<NodeId, bool> visited;
  std::vector<std::pair<NodeId, int>> stack;
  visited.emplace(r, true);
  for (int i = 0; i < static_cast<int>(g_.at(r).succ.size()); ++i) {
    stack.emplace_back(r, i);
  }
  while (!stack.empty()) {
    auto [p, i] = stack.back();
    stack.pop_back();
    NodeId ch = g_.deref(g_.at(p).succ[i]);
    switch (g_.at(ch).tag) {
      case NodeTag::Func:
        hnf(ch);
        return Desc::Progress;
      case NodeTag::Choice:
        spend();
        g_.pull_tab(p, i);
        return Desc::Progress;
      case NodeTag::Fail:
        return Desc::Failed;
      case NodeTag::Int:
      case NodeTag::Free:
        break;
      case NodeTag::Ctor:
        if (visited.emplace(ch, true).second) {
          for (int j = 0; j < static_cast<int>(g_.at(ch).succ.size()); ++j) {
            stack.emplace_back(ch, j);
          }
        }
        break;
      case NodeTag::Fwd:
        throw VmError("internal: dereference left a forward node");
    }
  }
  return Desc::Done;
}

RunResult VM::run(SymId goal, const RunOptions& opts) {
  RunResult res;
  steps_left_ = opts.max_steps;
  steps_used_ = 0;

  struct Comp {
    NodeId root = 0;
    std::map<long long, bool> fp;  // choice id -> took the right alternative
  };
  std::deque<Comp> queue;
  queue.push_back(Comp{make_goal(goal), {}});

  try {
    while (!queue.empty() &&
           static_cast<int>(res.values.size()) < opts.max_answers) {
      Comp c = std::move(queue.front());
      queue.pop_front();
      bool value = false, failed = false, forked = false;
      Comp forks[2];
      while (!value && !failed && !forked) {
        NodeId r = g_.deref(c.root);
        const Node& rn = g_.at(r);
        switch (rn.tag) {
          case NodeTag::Func:
            step(r);
            break;
          case NodeTag::Fail:
            failed = true;
            break;
          case NodeTag::Choice: {
            auto it = c.fp.find(rn.lit);
            if (it != c.fp.end()) {
              c.root = rn.succ[it->second ? 1 : 0];
              break;
            }
            forks[0] = Comp{rn.succ[0], c.fp};
            forks[0].fp[rn.lit] = false;
            forks[1] = Comp{rn.succ[1], c.fp};
            forks[1].fp[rn.lit] = true;
            forked = true;
            break;
          }
          default: {
            Desc d = descend(c.root);
            if (d == Desc::Done) value = true;
            if (d == Desc::Failed) failed = true;
            break;  // Progress loops back to re-inspect the root
          }
        }
      }
      if (forked) {
        if (opts.dfs) {
          queue.push_front(std::move(forks[1]));
          queue.push_front(std::move(forks[0]));
        } else {
          queue.push_back(std::move(forks[0]));
          queue.push_back(std::move(forks[1]));
        }
      } else if (value) {
        ValueTree t = extract_value(g_, c.root);
        normalize_free_vars(t);
        res.values.push_back(render_value(t));
        res.trees.push_back(std::move(t));
      }
    }
  } catch (const Budget&) {
    res.incomplete = true;
  }
  res.steps_used = steps_used_;
  return res;
}

}  // namespace icc
