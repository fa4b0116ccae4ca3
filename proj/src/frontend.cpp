#include "icc/frontend.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "icc/builtins.hpp"

namespace icc {

void FuncEnv::add(SymId name, int arity) { sigs_[name] = arity; }

std::optional<std::pair<SymId, int>> FuncEnv::resolve(const std::string& name,
                                                      const std::string& module) const {
  for (const char* m : {module.c_str(), kModuleMain, kModulePrelude}) {
    auto it = sigs_.find(intern(m, name));
    if (it != sigs_.end()) return std::make_pair(it->first, it->second);
  }
  for (Builtin b : {Builtin::Add, Builtin::Sub, Builtin::Eq, Builtin::Lt, Builtin::Ge}) {
    SymId s = builtin_sym(b);
    if (sym_name(s) == name) return std::make_pair(s, 2);
  }
  return std::nullopt;
}

struct FunctionCompiler::PosEntry {
  VarId var = 0;
  std::vector<int> path;
};

struct FunctionCompiler::Row {
  const SRule* rule = nullptr;
  int index = 0;                            // textual position
  std::map<VarId, const SPattern*> cells;   // open position -> pattern
};

struct FunctionCompiler::Impl {
  FunctionCompiler& fc;
  std::vector<VarId>* anon_free = nullptr;  // collector active while compiling a rule rhs

  [[noreturn]] void fail(SourceLoc loc, const std::string& msg) const {
    throw CompileError({loc, msg});
  }

  VarId fresh() { return fc.next_var_++; }

  void note_name(VarId v, const std::string& n) {
    if (!n.empty() && !fc.var_names_.count(v)) fc.var_names_[v] = n;
  }

  static bool demands(const SPattern& p) {
    return p.kind == SPattern::Kind::Ctor || p.kind == SPattern::Kind::Lit;
  }

  // --- expression compilation --------------------------------------------------

  using Env = std::map<std::string, VarId>;

  FlatExpr compile_expr(const SExpr& e, const Env& env) {
    switch (e.kind) {
      case SExpr::Kind::Lit:
        return FlatExpr::mk_lit(e.lit);
      case SExpr::Kind::Anon: {
        VarId v = fresh();
        anon_free->push_back(v);
        return FlatExpr::mk_var(v);
      }
      case SExpr::Kind::Ident: {
        auto it = env.find(e.name);
        if (it != env.end()) return FlatExpr::mk_var(it->second);
        if (auto c = fc.types_.resolve_ctor_name(e.name, fc.module_)) {
          int arity = fc.types_.lookup_ctor(*c)->arity;
          if (arity != 0)
            fail(e.loc, "constructor '" + e.name + "' expects " + std::to_string(arity) +
                            " arguments");
          return FlatExpr::mk_cons(*c);
        }
        if (auto f = fc.env_.resolve(e.name, fc.module_)) {
          if (f->second != 0)
            fail(e.loc, "function '" + e.name + "' expects " + std::to_string(f->second) +
                            " arguments (partial application is not supported)");
          return FlatExpr::mk_call(f->first);
        }
        fail(e.loc, "unknown identifier '" + e.name + "'");
      }
      case SExpr::Kind::Apply: {
        if (env.count(e.name))
          fail(e.loc, "cannot apply variable '" + e.name + "' (higher-order is not supported)");
        std::vector<FlatExpr> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(compile_expr(a, env));
        if (auto c = fc.types_.resolve_ctor_name(e.name, fc.module_)) {
          int arity = fc.types_.lookup_ctor(*c)->arity;
          if (arity != static_cast<int>(args.size()))
            fail(e.loc, "constructor '" + e.name + "' expects " + std::to_string(arity) +
                            " arguments, got " + std::to_string(args.size()));
          return FlatExpr::mk_cons(*c, std::move(args));
        }
        if (auto f = fc.env_.resolve(e.name, fc.module_)) {
          if (f->second != static_cast<int>(args.size()))
            fail(e.loc, "function '" + e.name + "' expects " + std::to_string(f->second) +
                            " arguments, got " + std::to_string(args.size()) +
                            " (partial application is not supported)");
          return FlatExpr::mk_call(f->first, std::move(args));
        }
        fail(e.loc, "unknown identifier '" + e.name + "'");
      }
      case SExpr::Kind::Let: {
        Env inner = env;
        std::vector<VarId> ids;
        size_t n = e.names.size();
        for (size_t i = 0; i < n; ++i) {
          const std::string& nm = e.names[i];
          if (std::count(e.names.begin(), e.names.end(), nm) > 1)
            fail(e.loc, "duplicate let binding '" + nm + "'");
          VarId v = fresh();
          ids.push_back(v);
          inner[nm] = v;
          note_name(v, nm);
        }
        std::vector<FlatExpr> binds;
        for (size_t i = 0; i < n; ++i) binds.push_back(compile_expr(e.args[i], inner));
        FlatExpr body = compile_expr(e.args[n], inner);
        return FlatExpr::mk_let(std::move(ids), std::move(binds), std::move(body));
      }
      case SExpr::Kind::FreeIn: {
        Env inner = env;
        std::vector<VarId> ids;
        for (const auto& nm : e.names) {
          if (std::count(e.names.begin(), e.names.end(), nm) > 1)
            fail(e.loc, "duplicate free variable '" + nm + "'");
          VarId v = fresh();
          ids.push_back(v);
          inner[nm] = v;
          note_name(v, nm);
        }
        return FlatExpr::mk_free(std::move(ids), compile_expr(e.args[0], inner));
      }
    }
    fail(e.loc, "malformed expression");
  }

  FlatExpr compile_rule_rhs(const SRule& rule, Env env) {
    std::vector<VarId> free_ids;
    for (const auto& nm : rule.where_free) {
      if (env.count(nm)) fail(rule.loc, "'" + nm + "' is already bound");
      VarId v = fresh();
      env[nm] = v;
      note_name(v, nm);
      free_ids.push_back(v);
    }
    std::vector<VarId> anons;
    anon_free = &anons;
    FlatExpr result;
    if (rule.alts.size() == 1 && !rule.alts[0].has_guard) {
      result = compile_expr(rule.alts[0].body, env);
    } else {
      // guard chain: try each alternative in order, fall through on False,
      // exempt when every guard fails
      auto true_c = fc.types_.resolve_ctor_name("True", fc.module_);
      auto false_c = fc.types_.resolve_ctor_name("False", fc.module_);
      if (!true_c || !false_c) fail(rule.loc, "guards require the Bool type");
      std::vector<std::pair<FlatExpr, FlatExpr>> compiled;
      for (const auto& alt : rule.alts)
        compiled.emplace_back(compile_expr(alt.guard, env), compile_expr(alt.body, env));
      result = FlatExpr::mk_exempt();
      for (auto it = compiled.rbegin(); it != compiled.rend(); ++it) {
        std::vector<Pattern> pats(2);
        pats[0].ctor = *false_c;
        pats[1].ctor = *true_c;
        std::vector<FlatExpr> bodies;
        bodies.push_back(std::move(result));
        bodies.push_back(std::move(it->second));
        result = FlatExpr::mk_case(std::move(it->first), std::move(pats), std::move(bodies));
      }
    }
    anon_free = nullptr;
    for (VarId v : anons) free_ids.push_back(v);
    if (!free_ids.empty()) result = FlatExpr::mk_free(std::move(free_ids), std::move(result));
    return result;
  }

  // --- definitional tree construction -------------------------------------------

  DefTree leaf(const Row& row) {
    Env env;
    for (const auto& [v, pat] : row.cells) {
      assert(!demands(*pat));
      if (pat->kind == SPattern::Kind::Var) {
        env[pat->name] = v;
        note_name(v, pat->name);
      }
    }
    DefTree t;
    t.kind = DefTree::Kind::Leaf;
    t.body = compile_rule_rhs(*row.rule, std::move(env));
    return t;
  }

  DefTree build(std::vector<Row> rows, std::vector<PosEntry> positions) {
    assert(!rows.empty());
    const PosEntry* all_pick = nullptr;
    const PosEntry* some_pick = nullptr;
    for (const auto& pe : positions) {
      size_t cnt = 0;
      for (const auto& r : rows)
        if (demands(*r.cells.at(pe.var))) ++cnt;
      if (cnt == rows.size()) {
        all_pick = &pe;
        break;
      }
      if (cnt > 0 && !some_pick) some_pick = &pe;
    }
    if (all_pick) return branch_at(*all_pick, std::move(rows), positions);
    if (some_pick) {
      PosEntry pick = *some_pick;
      std::vector<Row> demanding, others;
      for (auto& r : rows)
        (demands(*r.cells.at(pick.var)) ? demanding : others).push_back(std::move(r));
      int d_first = demanding.front().index;
      int o_first = others.front().index;
      DefTree d_tree = branch_at(pick, std::move(demanding), positions);
      DefTree o_tree = build(std::move(others), positions);
      DefTree node;
      node.kind = DefTree::Kind::Or;
      if (d_first < o_first) {
        node.children.push_back(std::move(d_tree));
        node.children.push_back(std::move(o_tree));
      } else {
        node.children.push_back(std::move(o_tree));
        node.children.push_back(std::move(d_tree));
      }
      return node;
    }
    // nothing demanded: one leaf per rule, overlapping rules Or'd in textual order
    if (rows.size() == 1) return leaf(rows[0]);
    DefTree node;
    node.kind = DefTree::Kind::Or;
    for (const auto& r : rows) node.children.push_back(leaf(r));
    return node;
  }

  DefTree branch_at(const PosEntry& pe, std::vector<Row> rows, const std::vector<PosEntry>& positions) {
    bool any_lit = false, any_ctor = false;
    for (const auto& r : rows) {
      const SPattern& p = *r.cells.at(pe.var);
      (p.kind == SPattern::Kind::Lit ? any_lit : any_ctor) = true;
    }
    if (any_lit && any_ctor)
      fail(rows.front().rule->loc, "patterns mix literals and constructors at one position");

    size_t pos_idx = 0;
    while (positions[pos_idx].var != pe.var) ++pos_idx;

    DefTree t;
    t.scrut_var = pe.var;
    t.position = pe.path;

    if (any_lit) {
      t.kind = DefTree::Kind::LitBranch;
      std::set<long long> keys;
      for (const auto& r : rows) keys.insert(r.cells.at(pe.var)->lit);
      for (long long k : keys) {
        std::vector<Row> subset;
        for (const auto& r : rows) {
          if (r.cells.at(pe.var)->lit != k) continue;
          Row nr = r;
          nr.cells.erase(pe.var);
          subset.push_back(std::move(nr));
        }
        std::vector<PosEntry> nps = positions;
        nps.erase(nps.begin() + pos_idx);
        t.lits.push_back(k);
        t.children.push_back(build(std::move(subset), std::move(nps)));
      }
      return t;
    }

    // constructor branch
    t.kind = DefTree::Kind::Branch;
    auto resolve_pat_ctor = [&](const SPattern& p) -> SymId {
      auto c = fc.types_.resolve_ctor_name(p.name, fc.module_);
      if (!c) fail(p.loc, "unknown constructor '" + p.name + "' in pattern");
      auto info = fc.types_.lookup_ctor(*c);
      if (static_cast<int>(p.args.size()) != info->arity)
        fail(p.loc, "constructor '" + p.name + "' expects " + std::to_string(info->arity) +
                        " arguments in pattern, got " + std::to_string(p.args.size()));
      return *c;
    };
    SymId first_ctor = resolve_pat_ctor(*rows.front().cells.at(pe.var));
    SymId type_name = fc.types_.lookup_ctor(first_ctor)->type_name;
    t.type_name = type_name;
    for (const auto& r : rows) {
      const SPattern& p = *r.cells.at(pe.var);
      SymId c = resolve_pat_ctor(p);
      if (fc.types_.lookup_ctor(c)->type_name != type_name)
        fail(p.loc, "pattern constructor '" + p.name + "' does not belong to type " +
                        sym_name(type_name));
    }
    for (const auto& cdecl : fc.types_.constructors_of(type_name)) {
      std::vector<Row> subset;
      for (const auto& r : rows)
        if (resolve_pat_ctor(*r.cells.at(pe.var)) == cdecl.name) subset.push_back(r);
      t.ctors.push_back(cdecl.name);
      if (subset.empty()) {
        t.child_vars.emplace_back();
        DefTree ex;
        ex.kind = DefTree::Kind::Exempt;
        t.children.push_back(std::move(ex));
        continue;
      }
      std::vector<VarId> ys;
      for (int j = 0; j < cdecl.arity; ++j) ys.push_back(fresh());
      // display names from the first matching rule's subpatterns
      {
        const SPattern& p0 = *subset.front().cells.at(pe.var);
        for (int j = 0; j < cdecl.arity; ++j)
          if (p0.args[j].kind == SPattern::Kind::Var) note_name(ys[j], p0.args[j].name);
      }
      std::vector<PosEntry> nps;
      nps.reserve(positions.size() + cdecl.arity);
      for (size_t i = 0; i < positions.size(); ++i) {
        if (i != pos_idx) {
          nps.push_back(positions[i]);
          continue;
        }
        for (int j = 0; j < cdecl.arity; ++j) {
          PosEntry np;
          np.var = ys[j];
          np.path = pe.path;
          np.path.push_back(j + 1);
          nps.push_back(std::move(np));
        }
      }
      for (auto& r : subset) {
        const SPattern& p = *r.cells.at(pe.var);
        r.cells.erase(pe.var);
        for (int j = 0; j < cdecl.arity; ++j) r.cells[ys[j]] = &p.args[j];
      }
      t.child_vars.push_back(std::move(ys));
      t.children.push_back(build(std::move(subset), std::move(nps)));
    }
    return t;
  }

  // --- tree -> FlatCurry ---------------------------------------------------------

  FlatExpr to_flat(const DefTree& t) {
    switch (t.kind) {
      case DefTree::Kind::Leaf:
        return t.body;
      case DefTree::Kind::Exempt:
        return FlatExpr::mk_exempt();
      case DefTree::Kind::Or: {
        // right fold, textual order
        FlatExpr acc = to_flat(t.children.back());
        for (auto it = t.children.rbegin() + 1; it != t.children.rend(); ++it)
          acc = FlatExpr::mk_or(to_flat(*it), std::move(acc));
        return acc;
      }
      case DefTree::Kind::Branch: {
        std::vector<Pattern> pats;
        std::vector<FlatExpr> bodies;
        for (size_t i = 0; i < t.children.size(); ++i) {
          if (t.children[i].kind == DefTree::Kind::Exempt) continue;  // re-added by completion
          Pattern p;
          p.ctor = t.ctors[i];
          p.vars = t.child_vars[i];
          pats.push_back(std::move(p));
          bodies.push_back(to_flat(t.children[i]));
        }
        return FlatExpr::mk_case(FlatExpr::mk_var(t.scrut_var), std::move(pats), std::move(bodies));
      }
      case DefTree::Kind::LitBranch: {
        std::vector<Pattern> pats;
        std::vector<FlatExpr> bodies;
        for (size_t i = 0; i < t.children.size(); ++i) {
          Pattern p;
          p.is_lit = true;
          p.lit = t.lits[i];
          pats.push_back(std::move(p));
          bodies.push_back(to_flat(t.children[i]));
        }
        return FlatExpr::mk_case(FlatExpr::mk_var(t.scrut_var), std::move(pats), std::move(bodies));
      }
    }
    return FlatExpr::mk_exempt();
  }
};

FunctionCompiler::FunctionCompiler(const TypeTable& types, const FuncEnv& env, std::string module,
                                   SymId name, int arity, std::vector<const SRule*> rules)
    : types_(types), env_(env), module_(std::move(module)), name_(name), arity_(arity),
      rules_(std::move(rules)), next_var_(arity + 1) {}

DefTree FunctionCompiler::build_def_tree() {
  Impl impl{*this};
  // linearity check per rule
  for (const SRule* r : rules_) {
    std::set<std::string> seen;
    std::vector<const SPattern*> stack;
    for (const auto& p : r->params) stack.push_back(&p);
    while (!stack.empty()) {
      const SPattern* p = stack.back();
      stack.pop_back();
      if (p->kind == SPattern::Kind::Var && !seen.insert(p->name).second)
        throw CompileError({p->loc, "repeated variable '" + p->name + "' in patterns"});
      for (const auto& a : p->args) stack.push_back(&a);
    }
  }
  std::vector<Row> rows;
  std::vector<PosEntry> positions;
  for (int i = 0; i < arity_; ++i) positions.push_back({i + 1, {i + 1}});
  int idx = 0;
  for (const SRule* r : rules_) {
    Row row;
    row.rule = r;
    row.index = idx++;
    for (int i = 0; i < arity_; ++i) row.cells[i + 1] = &r->params[i];
    rows.push_back(std::move(row));
  }
  return impl.build(std::move(rows), std::move(positions));
}

FlatFunction FunctionCompiler::tree_to_flat(const DefTree& tree) {
  Impl impl{*this};
  FlatFunction fn;
  fn.name = name_;
  fn.arity = arity_;
  for (int i = 0; i < arity_; ++i) fn.params.push_back(i + 1);
  fn.body = impl.to_flat(tree);
  fn.var_names = var_names_;
  return fn;
}

FlatProgram compile_modules(const std::vector<ModuleSource>& modules) {
  FlatProgram prog;
  for (const auto& m : modules) {
    for (const auto& d : m.program.datas) {
      std::vector<std::pair<SymId, int>> ctors;
      for (const auto& [cname, arity] : d.constructors)
        ctors.emplace_back(intern(m.module, cname), arity);
      prog.types.add_type(intern(m.module, d.type_name), ctors, d.loc);
    }
  }
  struct FnDef {
    SymId sym = 0;
    int arity = 0;
    const std::string* module = nullptr;
    std::vector<const SRule*> rules;
  };
  std::vector<FnDef> defs;
  std::map<SymId, size_t> index;
  for (const auto& m : modules) {
    for (const auto& r : m.program.rules) {
      SymId sym = intern(m.module, r.fname);
      if (prog.types.lookup_ctor(sym))
        throw CompileError({r.loc, "'" + r.fname + "' is already a constructor"});
      auto it = index.find(sym);
      if (it == index.end()) {
        index[sym] = defs.size();
        defs.push_back({sym, static_cast<int>(r.params.size()), &m.module, {&r}});
      } else {
        FnDef& d = defs[it->second];
        if (d.arity != static_cast<int>(r.params.size()))
          throw CompileError({r.loc, "rules for '" + r.fname + "' have differing arities"});
        d.rules.push_back(&r);
      }
    }
  }
  FuncEnv env;
  for (const auto& d : defs) env.add(d.sym, d.arity);
  for (const auto& d : defs) {
    FunctionCompiler fc(prog.types, env, *d.module, d.sym, d.arity, d.rules);
    DefTree tree = fc.build_def_tree();
    prog.functions.push_back(fc.tree_to_flat(tree));
  }
  return prog;
}

}  // namespace icc
