#include "icc/flat.hpp"

#include "icc/builtins.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace icc {

FlatExpr FlatExpr::mk_var(VarId v) {
  FlatExpr e;
  e.kind = FlatKind::Var;
  e.var = v;
  return e;
}

FlatExpr FlatExpr::mk_lit(long long v) {
  FlatExpr e;
  e.kind = FlatKind::Lit;
  e.lit = v;
  return e;
}

FlatExpr FlatExpr::mk_cons(SymId c, std::vector<FlatExpr> args) {
  FlatExpr e;
  e.kind = FlatKind::ConsApply;
  e.sym = c;
  e.kids = std::move(args);
  return e;
}

FlatExpr FlatExpr::mk_call(SymId f, std::vector<FlatExpr> args) {
  FlatExpr e;
  e.kind = FlatKind::FuncApply;
  e.sym = f;
  e.kids = std::move(args);
  return e;
}

FlatExpr FlatExpr::mk_or(FlatExpr l, FlatExpr r) {
  FlatExpr e;
  e.kind = FlatKind::Or;
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

FlatExpr FlatExpr::mk_case(FlatExpr scrut, std::vector<Pattern> pats, std::vector<FlatExpr> bodies) {
  FlatExpr e;
  e.kind = FlatKind::Case;
  e.pats = std::move(pats);
  e.kids.push_back(std::move(scrut));
  for (auto& b : bodies) e.kids.push_back(std::move(b));
  return e;
}

FlatExpr FlatExpr::mk_let(std::vector<VarId> binds, std::vector<FlatExpr> exprs, FlatExpr body) {
  FlatExpr e;
  e.kind = FlatKind::Let;
  e.vars = std::move(binds);
  e.kids = std::move(exprs);
  e.kids.push_back(std::move(body));
  return e;
}

FlatExpr FlatExpr::mk_free(std::vector<VarId> vs, FlatExpr body) {
  FlatExpr e;
  e.kind = FlatKind::Free;
  e.vars = std::move(vs);
  e.kids.push_back(std::move(body));
  return e;
}

FlatExpr FlatExpr::mk_exempt() { return FlatExpr{}; }

const FlatFunction* FlatProgram::find_function(SymId name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

// --- validation --------------------------------------------------------------

namespace {

struct FlatValidator {
  const FlatProgram& prog;
  std::vector<FlatViolation>& out;
  SymId current = 0;

  void fail(const std::string& msg) { out.push_back({current, msg}); }

  void check_expr(const FlatExpr& e, std::set<VarId>& scope) {
    switch (e.kind) {
      case FlatKind::Var:
        if (!scope.count(e.var)) fail("unbound variable v" + std::to_string(e.var));
        break;
      case FlatKind::Lit:
      case FlatKind::Exempt:
        break;
      case FlatKind::ConsApply: {
        auto info = prog.types.lookup_ctor(e.sym);
        if (!info)
          fail("unknown constructor " + sym_qualified(e.sym));
        else if (static_cast<int>(e.kids.size()) != info->arity)
          fail("constructor arity mismatch for " + sym_name(e.sym) + ": got " +
               std::to_string(e.kids.size()) + ", expected " + std::to_string(info->arity));
        for (const auto& k : e.kids) check_expr(k, scope);
        break;
      }
      case FlatKind::FuncApply: {
        const FlatFunction* f = prog.find_function(e.sym);
        int arity = f ? f->arity : is_builtin(e.sym) ? builtin_arity(e.sym) : -1;
        if (arity < 0)
          fail("unknown function " + sym_qualified(e.sym));
        else if (static_cast<int>(e.kids.size()) != arity)
          fail("function arity mismatch for " + sym_name(e.sym) + ": got " +
               std::to_string(e.kids.size()) + ", expected " + std::to_string(arity));
        for (const auto& k : e.kids) check_expr(k, scope);
        break;
      }
      case FlatKind::Or:
        check_expr(e.kids[0], scope);
        check_expr(e.kids[1], scope);
        break;
      case FlatKind::Case: {
        check_expr(e.scrutinee(), scope);
        std::set<SymId> seen_ctors;
        std::set<long long> seen_lits;
        bool any_ctor = false, any_lit = false;
        SymId case_type = 0;
        for (size_t i = 0; i < e.branch_count(); ++i) {
          const Pattern& p = e.pats[i];
          if (p.is_lit) {
            any_lit = true;
            if (!seen_lits.insert(p.lit).second)
              fail("duplicate literal branch " + std::to_string(p.lit));
          } else {
            any_ctor = true;
            if (!seen_ctors.insert(p.ctor).second)
              fail("duplicate case constructor " + sym_name(p.ctor));
            auto info = prog.types.lookup_ctor(p.ctor);
            if (!info) {
              fail("unknown constructor " + sym_qualified(p.ctor) + " in pattern");
            } else {
              if (static_cast<int>(p.vars.size()) != info->arity)
                fail("pattern arity mismatch for " + sym_name(p.ctor));
              if (case_type == 0)
                case_type = info->type_name;
              else if (case_type != info->type_name)
                fail("case branches mix constructors of " + sym_name(case_type) + " and " +
                     sym_name(info->type_name));
            }
            std::set<VarId> pv;
            for (VarId v : p.vars) {
              if (!pv.insert(v).second) fail("duplicate pattern variable v" + std::to_string(v));
              if (scope.count(v)) fail("pattern variable v" + std::to_string(v) + " shadows binding");
            }
          }
          std::set<VarId> inner = scope;
          for (VarId v : p.vars) inner.insert(v);
          check_expr(e.branch_body(i), inner);
        }
        if (any_ctor && any_lit) fail("case mixes literal and constructor patterns");
        if (e.branch_count() == 0) fail("case with no branches");
        break;
      }
      case FlatKind::Let: {
        std::set<VarId> inner = scope;
        for (VarId v : e.vars) {
          if (!inner.insert(v).second) fail("duplicate let binding v" + std::to_string(v));
        }
        for (size_t i = 0; i < e.bind_count(); ++i) check_expr(e.bind_expr(i), inner);
        check_expr(e.body(), inner);
        break;
      }
      case FlatKind::Free: {
        std::set<VarId> inner = scope;
        for (VarId v : e.vars) {
          if (!inner.insert(v).second) fail("duplicate free variable v" + std::to_string(v));
        }
        check_expr(e.body(), inner);
        break;
      }
    }
  }

  void check_function(const FlatFunction& fn) {
    current = fn.name;
    if (static_cast<int>(fn.params.size()) != fn.arity)
      fail("parameter count disagrees with arity");
    std::set<VarId> scope;
    for (VarId v : fn.params) {
      if (!scope.insert(v).second) fail("duplicate parameter v" + std::to_string(v));
    }
    check_expr(fn.body, scope);
  }
};

}  // namespace

std::vector<FlatViolation> validate_flat(const FlatProgram& program) {
  std::vector<FlatViolation> out;
  FlatValidator v{program, out};
  std::set<SymId> names;
  for (const auto& fn : program.functions) {
    if (!names.insert(fn.name).second)
      out.push_back({fn.name, "duplicate function definition"});
    v.check_function(fn);
  }
  return out;
}

// --- pretty printing ---------------------------------------------------------

namespace {

std::string var_str(VarId v) { return "v" + std::to_string(v); }

std::string pat_str(const Pattern& p) {
  if (p.is_lit) return std::to_string(p.lit);
  std::string s = sym_name(p.ctor);
  if (!p.vars.empty()) {
    s += "(";
    for (size_t i = 0; i < p.vars.size(); ++i) {
      if (i) s += ", ";
      s += var_str(p.vars[i]);
    }
    s += ")";
  }
  return s;
}

// Single-line rendering; total over all expression forms.
std::string inline_str(const FlatExpr& e) {
  switch (e.kind) {
    case FlatKind::Var: return var_str(e.var);
    case FlatKind::Lit: return std::to_string(e.lit);
    case FlatKind::ConsApply:
    case FlatKind::FuncApply: {
      std::string s = sym_name(e.sym);
      if (!e.kids.empty()) {
        s += "(";
        for (size_t i = 0; i < e.kids.size(); ++i) {
          if (i) s += ", ";
          s += inline_str(e.kids[i]);
        }
        s += ")";
      }
      return s;
    }
    case FlatKind::Or: return "(" + inline_str(e.kids[0]) + " or " + inline_str(e.kids[1]) + ")";
    case FlatKind::Case: {
      std::string s = "case " + inline_str(e.scrutinee()) + " of {";
      for (size_t i = 0; i < e.branch_count(); ++i) {
        if (i) s += ";";
        s += " " + pat_str(e.pats[i]) + " -> " + inline_str(e.branch_body(i));
      }
      return s + " }";
    }
    case FlatKind::Let: {
      std::string s = "let {";
      for (size_t i = 0; i < e.bind_count(); ++i) {
        if (i) s += ";";
        s += " " + var_str(e.vars[i]) + " = " + inline_str(e.bind_expr(i));
      }
      return s + " } in " + inline_str(e.body());
    }
    case FlatKind::Free: {
      std::string s = "free ";
      for (size_t i = 0; i < e.vars.size(); ++i) {
        if (i) s += ", ";
        s += var_str(e.vars[i]);
      }
      return s + " in " + inline_str(e.body());
    }
    case FlatKind::Exempt: return "exempt";
  }
  return "?";
}

bool is_structured(const FlatExpr& e) {
  return e.kind == FlatKind::Case || e.kind == FlatKind::Let || e.kind == FlatKind::Free;
}

void print_expr(std::ostringstream& os, const FlatExpr& e, int indent);

void print_child(std::ostringstream& os, const FlatExpr& e, int indent) {
  std::string pad(indent, ' ');
  if (is_structured(e)) {
    print_expr(os, e, indent);
  } else {
    os << pad << inline_str(e) << "\n";
  }
}

void print_expr(std::ostringstream& os, const FlatExpr& e, int indent) {
  std::string pad(indent, ' ');
  switch (e.kind) {
    case FlatKind::Case: {
      os << pad << "case " << inline_str(e.scrutinee()) << " of\n";
      for (size_t i = 0; i < e.branch_count(); ++i) {
        const FlatExpr& body = e.branch_body(i);
        if (is_structured(body)) {
          os << pad << "  " << pat_str(e.pats[i]) << " ->\n";
          print_expr(os, body, indent + 4);
        } else {
          os << pad << "  " << pat_str(e.pats[i]) << " -> " << inline_str(body) << "\n";
        }
      }
      break;
    }
    case FlatKind::Let: {
      os << pad << "let\n";
      for (size_t i = 0; i < e.bind_count(); ++i) {
        const FlatExpr& b = e.bind_expr(i);
        if (is_structured(b)) {
          os << pad << "  " << var_str(e.vars[i]) << " =\n";
          print_expr(os, b, indent + 4);
        } else {
          os << pad << "  " << var_str(e.vars[i]) << " = " << inline_str(b) << "\n";
        }
      }
      os << pad << "in\n";
      print_child(os, e.body(), indent + 2);
      break;
    }
    case FlatKind::Free: {
      os << pad << "free";
      for (size_t i = 0; i < e.vars.size(); ++i) os << (i ? ", " : " ") << var_str(e.vars[i]);
      os << " in\n";
      print_child(os, e.body(), indent + 2);
      break;
    }
    default:
      os << pad << inline_str(e) << "\n";
  }
}

}  // namespace

std::string pretty_flat(const FlatFunction& fn) {
  std::ostringstream os;
  os << "function " << sym_name(fn.name) << "(";
  for (size_t i = 0; i < fn.params.size(); ++i) {
    if (i) os << ", ";
    os << var_str(fn.params[i]);
  }
  os << ") =\n";
  print_child(os, fn.body, 2);
  return os.str();
}

std::string pretty_flat(const FlatProgram& program, const std::string& only_module) {
  std::string out;
  bool first = true;
  for (const auto& fn : program.functions) {
    if (!only_module.empty() && sym_module(fn.name) != only_module) continue;
    if (!first) out += "\n";
    out += pretty_flat(fn);
    first = false;
  }
  return out;
}

// --- alpha equivalence -------------------------------------------------------

namespace {

struct AlphaCtx {
  std::map<VarId, VarId> fwd, bwd;

  bool bind(VarId a, VarId b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a] = b;
      bwd[b] = a;
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
  }

  bool same(VarId a, VarId b) const {
    auto f = fwd.find(a);
    return f != fwd.end() && f->second == b;
  }
};

bool alpha_expr(const FlatExpr& a, const FlatExpr& b, AlphaCtx& ctx) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FlatKind::Var: return ctx.same(a.var, b.var);
    case FlatKind::Lit: return a.lit == b.lit;
    case FlatKind::Exempt: return true;
    case FlatKind::ConsApply:
    case FlatKind::FuncApply: {
      if (a.sym != b.sym || a.kids.size() != b.kids.size()) return false;
      for (size_t i = 0; i < a.kids.size(); ++i)
        if (!alpha_expr(a.kids[i], b.kids[i], ctx)) return false;
      return true;
    }
    case FlatKind::Or:
      return alpha_expr(a.kids[0], b.kids[0], ctx) && alpha_expr(a.kids[1], b.kids[1], ctx);
    case FlatKind::Case: {
      if (a.branch_count() != b.branch_count()) return false;
      if (!alpha_expr(a.scrutinee(), b.scrutinee(), ctx)) return false;
      for (size_t i = 0; i < a.branch_count(); ++i) {
        const Pattern& pa = a.pats[i];
        const Pattern& pb = b.pats[i];
        if (pa.is_lit != pb.is_lit) return false;
        if (pa.is_lit) {
          if (pa.lit != pb.lit) return false;
        } else {
          if (pa.ctor != pb.ctor || pa.vars.size() != pb.vars.size()) return false;
          for (size_t j = 0; j < pa.vars.size(); ++j)
            if (!ctx.bind(pa.vars[j], pb.vars[j])) return false;
        }
        if (!alpha_expr(a.branch_body(i), b.branch_body(i), ctx)) return false;
      }
      return true;
    }
    case FlatKind::Let: {
      if (a.vars.size() != b.vars.size()) return false;
      for (size_t i = 0; i < a.vars.size(); ++i)
        if (!ctx.bind(a.vars[i], b.vars[i])) return false;
      for (size_t i = 0; i < a.bind_count(); ++i)
        if (!alpha_expr(a.bind_expr(i), b.bind_expr(i), ctx)) return false;
      return alpha_expr(a.body(), b.body(), ctx);
    }
    case FlatKind::Free: {
      if (a.vars.size() != b.vars.size()) return false;
      for (size_t i = 0; i < a.vars.size(); ++i)
        if (!ctx.bind(a.vars[i], b.vars[i])) return false;
      return alpha_expr(a.body(), b.body(), ctx);
    }
  }
  return false;
}

}  // namespace

bool flat_alpha_equal(const FlatFunction& a, const FlatFunction& b) {
  if (a.name != b.name || a.arity != b.arity) return false;
  if (a.params.size() != b.params.size()) return false;
  AlphaCtx ctx;
  for (size_t i = 0; i < a.params.size(); ++i)
    if (!ctx.bind(a.params[i], b.params[i])) return false;
  return alpha_expr(a.body, b.body, ctx);
}

namespace {

void max_var_expr(const FlatExpr& e, VarId& m) {
  if (e.kind == FlatKind::Var) m = std::max(m, e.var);
  for (VarId v : e.vars) m = std::max(m, v);
  for (const auto& p : e.pats)
    for (VarId v : p.vars) m = std::max(m, v);
  for (const auto& k : e.kids) max_var_expr(k, m);
}

}  // namespace

VarId flat_max_var(const FlatFunction& fn) {
  VarId m = 0;
  for (VarId v : fn.params) m = std::max(m, v);
  max_var_expr(fn.body, m);
  return m;
}

}  // namespace icc
