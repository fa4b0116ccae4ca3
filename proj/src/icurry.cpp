#include "icc/icurry.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "icc/builtins.hpp"

namespace icc {

IExpr IExpr::mk_var(VarRef r) {
  IExpr e;
  e.kind = IExprKind::Var;
  e.ref = std::move(r);
  return e;
}

IExpr IExpr::mk_int(long long v) {
  IExpr e;
  e.kind = IExprKind::Int;
  e.lit = v;
  return e;
}

IExpr IExpr::mk_node(ILabel label, std::vector<IExpr> args) {
  IExpr e;
  e.kind = IExprKind::Node;
  e.label = label;
  e.args = std::move(args);
  return e;
}

IExpr IExpr::mk_or(IExpr l, IExpr r) {
  IExpr e;
  e.kind = IExprKind::Or;
  e.args.push_back(std::move(l));
  e.args.push_back(std::move(r));
  return e;
}

const IFunction* IProgram::find_function(SymId name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

// --- validation --------------------------------------------------------------

namespace {

struct IValidator {
  const IProgram& prog;
  std::vector<ICurryViolation>& out;
  SymId current = 0;

  void fail(const std::string& msg) { out.push_back({current, msg}); }

  struct Scope {
    std::set<VarId> declared;
    std::set<VarId> assigned;
  };

  void check_ref(const VarRef& r, const Scope& sc, bool need_assigned) {
    for (int i : r.path)
      if (i < 1) fail("select index must be >= 1");
    if (r.base == RefBase::Root) return;
    if (!sc.declared.count(r.var)) {
      fail("use of undeclared variable v" + std::to_string(r.var));
      return;
    }
    if (need_assigned && !sc.assigned.count(r.var))
      fail("use of v" + std::to_string(r.var) + " before assignment");
  }

  // `placeholder_ok`: inside NODE arguments a declared-but-unassigned local is
  // a legal forward reference (filled by a later assignment or patch).
  void check_expr(const IExpr& e, const Scope& sc, bool placeholder_ok) {
    switch (e.kind) {
      case IExprKind::Var:
        check_ref(e.ref, sc, !(placeholder_ok && e.ref.path.empty()));
        break;
      case IExprKind::Int:
        break;
      case IExprKind::Node: {
        int arity = -1;
        if (e.label.kind == LabelKind::Constructor) {
          auto info = prog.types.lookup_ctor(e.label.sym);
          if (!info)
            fail("unknown constructor label " + sym_qualified(e.label.sym));
          else
            arity = info->arity;
        } else {
          if (const IFunction* f = prog.find_function(e.label.sym))
            arity = f->arity;
          else if (is_builtin(e.label.sym))
            arity = builtin_arity(e.label.sym);
          else
            fail("unknown function label " + sym_qualified(e.label.sym));
        }
        if (arity >= 0 && static_cast<int>(e.args.size()) > arity)
          fail("node for " + sym_name(e.label.sym) + " over-saturated: " +
               std::to_string(e.args.size()) + " args, arity " + std::to_string(arity));
        for (const auto& a : e.args) check_expr(a, sc, true);
        break;
      }
      case IExprKind::Or:
        check_expr(e.args[0], sc, placeholder_ok);
        check_expr(e.args[1], sc, placeholder_ok);
        break;
    }
  }

  void check_block(const IBlock& b, Scope sc) {
    for (const auto& d : b.decls) {
      if (!sc.declared.insert(d.var).second)
        fail("redeclaration of v" + std::to_string(d.var));
      if (d.is_free) sc.assigned.insert(d.var);  // free vars are born bound to a fresh node
    }
    for (const auto& a : b.assigns) {
      if (a.lhs.base == RefBase::Root) {
        fail("assignment to ROOT");
        continue;
      }
      if (a.lhs.path.empty()) {
        if (!sc.declared.count(a.lhs.var))
          fail("assignment to undeclared v" + std::to_string(a.lhs.var));
        check_expr(a.rhs, sc, false);
        if (!sc.assigned.insert(a.lhs.var).second)
          fail("second assignment to v" + std::to_string(a.lhs.var));
      } else {
        // patch: base must already hold a node, rhs must be materialized
        check_ref(a.lhs, sc, true);
        check_expr(a.rhs, sc, false);
      }
    }
    // Forward placeholders must be satisfied within this block: every declared
    // non-free var referenced inside node args needs an assignment eventually.
    switch (b.stm.kind) {
      case IStmtKind::Return:
        check_expr(b.stm.expr, sc, false);
        break;
      case IStmtKind::Exempt:
        break;
      case IStmtKind::Case: {
        check_ref(b.stm.scrut, sc, true);
        if (b.stm.ctors.empty()) {
          fail("case with no branches");
          break;
        }
        if (b.stm.ctors.size() != b.stm.blocks.size()) {
          fail("case branch count mismatch");
          break;
        }
        auto info = prog.types.lookup_ctor(b.stm.ctors[0]);
        if (!info) {
          fail("unknown constructor " + sym_qualified(b.stm.ctors[0]) + " in case");
          break;
        }
        const auto& all = prog.types.constructors_of(info->type_name);
        if (b.stm.ctors.size() != all.size()) {
          fail("case over " + sym_name(info->type_name) + " not complete: " +
               std::to_string(b.stm.ctors.size()) + " of " + std::to_string(all.size()) +
               " branches");
        } else {
          for (size_t i = 0; i < all.size(); ++i)
            if (b.stm.ctors[i] != all[i].name)
              fail("case branch " + std::to_string(i) + " out of tag order: expected " +
                   sym_name(all[i].name) + ", got " + sym_name(b.stm.ctors[i]));
        }
        for (const auto& blk : b.stm.blocks) check_block(blk, sc);
        break;
      }
      case IStmtKind::CaseLit: {
        check_ref(b.stm.scrut, sc, true);
        if (b.stm.blocks.size() != b.stm.lits.size() + 1) {
          fail("literal case needs one block per literal plus a default");
          break;
        }
        std::set<long long> seen;
        for (long long v : b.stm.lits)
          if (!seen.insert(v).second) fail("duplicate literal branch " + std::to_string(v));
        for (const auto& blk : b.stm.blocks) check_block(blk, sc);
        break;
      }
    }
  }

  void check_function(const IFunction& fn) {
    current = fn.name;
    if (fn.arity < 0) fail("negative arity");
    check_block(fn.body, {});
  }
};

}  // namespace

std::vector<ICurryViolation> validate_icurry(const IProgram& program) {
  std::vector<ICurryViolation> out;
  IValidator v{program, out};
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

struct NameMap {
  std::map<VarId, std::string> names;

  explicit NameMap(const IFunction& fn) {
    std::set<std::string> used;
    // walk declarations in order so hints get deduplicated deterministically
    collect(fn.body, fn, used);
  }

  void collect(const IBlock& b, const IFunction& fn, std::set<std::string>& used) {
    for (const auto& d : b.decls) assign_name(d.var, fn, used);
    switch (b.stm.kind) {
      case IStmtKind::Case:
      case IStmtKind::CaseLit:
        for (const auto& blk : b.stm.blocks) collect(blk, fn, used);
        break;
      default:
        break;
    }
  }

  void assign_name(VarId v, const IFunction& fn, std::set<std::string>& used) {
    if (names.count(v)) return;
    std::string want;
    auto it = fn.var_names.find(v);
    if (it != fn.var_names.end()) want = it->second;
    if (want.empty()) want = "v" + std::to_string(v);
    if (used.count(want)) want += "_" + std::to_string(v);
    used.insert(want);
    names[v] = want;
  }

  std::string operator()(VarId v) const {
    auto it = names.find(v);
    return it == names.end() ? "v" + std::to_string(v) : it->second;
  }
};

std::string ref_str(const VarRef& r, const NameMap& nm) {
  std::string s = r.base == RefBase::Root ? "ROOT" : nm(r.var);
  for (int i : r.path) s += "[" + std::to_string(i) + "]";
  return s;
}

std::string expr_str(const IExpr& e, const NameMap& nm, bool parenthesize_or = false) {
  switch (e.kind) {
    case IExprKind::Var:
      return ref_str(e.ref, nm);
    case IExprKind::Int:
      return "NODE(" + std::to_string(e.lit) + ")";
    case IExprKind::Node: {
      std::string s = "NODE(" + sym_name(e.label.sym);
      for (const auto& a : e.args) s += ", " + expr_str(a, nm, true);
      return s + ")";
    }
    case IExprKind::Or: {
      std::string s = expr_str(e.args[0], nm, true) + " or " + expr_str(e.args[1], nm, true);
      return parenthesize_or ? "(" + s + ")" : s;
    }
  }
  return "?";
}

bool inline_block(const IBlock& b) {
  return b.decls.empty() && b.assigns.empty() &&
         (b.stm.kind == IStmtKind::Return || b.stm.kind == IStmtKind::Exempt);
}

void print_block(std::ostringstream& os, const IBlock& b, const NameMap& nm, int indent);

void print_stmt(std::ostringstream& os, const IStatement& s, const NameMap& nm, int indent) {
  std::string pad(indent, ' ');
  switch (s.kind) {
    case IStmtKind::Return:
      os << pad << "return " << expr_str(s.expr, nm) << "\n";
      break;
    case IStmtKind::Exempt:
      os << pad << "exempt\n";
      break;
    case IStmtKind::Case:
    case IStmtKind::CaseLit: {
      const bool lit = s.kind == IStmtKind::CaseLit;
      os << pad << "case " << (lit ? "VALUE(" : "LABEL(") << ref_str(s.scrut, nm) << ") of\n";
      size_t n = s.blocks.size();
      for (size_t i = 0; i < n; ++i) {
        std::string head;
        if (lit)
          head = i + 1 == n ? "default" : std::to_string(s.lits[i]);
        else
          head = sym_name(s.ctors[i]);
        const IBlock& blk = s.blocks[i];
        if (inline_block(blk)) {
          os << pad << "  " << head << " -> ";
          if (blk.stm.kind == IStmtKind::Return)
            os << "return " << expr_str(blk.stm.expr, nm) << "\n";
          else
            os << "exempt\n";
        } else {
          os << pad << "  " << head << " ->\n";
          print_block(os, blk, nm, indent + 4);
        }
      }
      break;
    }
  }
}

void print_block(std::ostringstream& os, const IBlock& b, const NameMap& nm, int indent) {
  std::string pad(indent, ' ');
  for (const auto& d : b.decls)
    os << pad << (d.is_free ? "free " : "declare ") << nm(d.var) << "\n";
  for (const auto& a : b.assigns)
    os << pad << ref_str(a.lhs, nm) << " = " << expr_str(a.rhs, nm) << "\n";
  print_stmt(os, b.stm, nm, indent);
}

}  // namespace

std::string pretty_icurry(const IFunction& fn) {
  std::ostringstream os;
  NameMap nm(fn);
  os << "function " << sym_name(fn.name) << "/" << fn.arity << "\n";
  print_block(os, fn.body, nm, 2);
  return os.str();
}

std::string pretty_icurry(const IProgram& program, const std::string& only_module) {
  std::string out;
  bool first = true;
  for (const auto& fn : program.functions) {
    if (!only_module.empty() && sym_module(fn.name) != only_module) continue;
    if (!first) out += "\n";
    out += pretty_icurry(fn);
    first = false;
  }
  return out;
}

// --- alpha equivalence -------------------------------------------------------

namespace {

struct IAlpha {
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

  bool ref(const VarRef& a, const VarRef& b) {
    if (a.base != b.base || a.path != b.path) return false;
    if (a.base == RefBase::Root) return true;
    auto f = fwd.find(a.var);
    return f != fwd.end() && f->second == b.var;
  }

  bool expr(const IExpr& a, const IExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case IExprKind::Var: return ref(a.ref, b.ref);
      case IExprKind::Int: return a.lit == b.lit;
      case IExprKind::Node:
        if (!(a.label == b.label) || a.args.size() != b.args.size()) return false;
        break;
      case IExprKind::Or:
        break;
    }
    for (size_t i = 0; i < a.args.size(); ++i)
      if (!expr(a.args[i], b.args[i])) return false;
    return true;
  }

  bool block(const IBlock& a, const IBlock& b) {
    if (a.decls.size() != b.decls.size() || a.assigns.size() != b.assigns.size()) return false;
    for (size_t i = 0; i < a.decls.size(); ++i) {
      if (a.decls[i].is_free != b.decls[i].is_free) return false;
      if (!bind(a.decls[i].var, b.decls[i].var)) return false;
    }
    for (size_t i = 0; i < a.assigns.size(); ++i) {
      if (!ref(a.assigns[i].lhs, b.assigns[i].lhs)) return false;
      if (!expr(a.assigns[i].rhs, b.assigns[i].rhs)) return false;
    }
    const IStatement& sa = a.stm;
    const IStatement& sb = b.stm;
    if (sa.kind != sb.kind) return false;
    switch (sa.kind) {
      case IStmtKind::Return: return expr(sa.expr, sb.expr);
      case IStmtKind::Exempt: return true;
      case IStmtKind::Case:
        if (sa.ctors != sb.ctors) return false;
        break;
      case IStmtKind::CaseLit:
        if (sa.lits != sb.lits) return false;
        break;
    }
    if (!ref(sa.scrut, sb.scrut)) return false;
    if (sa.blocks.size() != sb.blocks.size()) return false;
    for (size_t i = 0; i < sa.blocks.size(); ++i)
      if (!block(sa.blocks[i], sb.blocks[i])) return false;
    return true;
  }
};

}  // namespace

bool icurry_alpha_equal(const IFunction& a, const IFunction& b) {
  if (a.name != b.name || a.arity != b.arity) return false;
  IAlpha ctx;
  return ctx.block(a.body, b.body);
}

}  // namespace icc
