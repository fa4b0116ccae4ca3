#pragma once

#include <map>
#include <string>
#include <vector>

#include "icc/types.hpp"

namespace icc {

// FlatCurry expressions. One struct with a kind discriminator; children live
// in `kids` with a per-kind layout (see accessors below).
using VarId = int;

enum class FlatKind { Var, Lit, ConsApply, FuncApply, Case, Or, Let, Free, Exempt };

// Shallow branch pattern: a constructor applied to distinct variables, or an
// integer literal.
struct Pattern {
  bool is_lit = false;
  SymId ctor = 0;
  std::vector<VarId> vars;
  long long lit = 0;
  bool operator==(const Pattern&) const = default;
};

struct FlatExpr {
  FlatKind kind = FlatKind::Exempt;
  VarId var = 0;                  // Var
  long long lit = 0;              // Lit
  SymId sym = 0;                  // ConsApply / FuncApply
  std::vector<VarId> vars;        // Let: binding ids; Free: variable ids
  std::vector<Pattern> pats;      // Case: branch patterns (parallel to kids[1..])
  std::vector<FlatExpr> kids;     // ConsApply/FuncApply: args
                                  // Case: [scrutinee, body_1, ..., body_n]
                                  // Or: [left, right]
                                  // Let: [bind_1, ..., bind_n, body]
                                  // Free: [body]
  bool operator==(const FlatExpr&) const = default;

  static FlatExpr mk_var(VarId v);
  static FlatExpr mk_lit(long long v);
  static FlatExpr mk_cons(SymId c, std::vector<FlatExpr> args = {});
  static FlatExpr mk_call(SymId f, std::vector<FlatExpr> args = {});
  static FlatExpr mk_or(FlatExpr l, FlatExpr r);
  static FlatExpr mk_case(FlatExpr scrut, std::vector<Pattern> pats, std::vector<FlatExpr> bodies);
  static FlatExpr mk_let(std::vector<VarId> binds, std::vector<FlatExpr> exprs, FlatExpr body);
  static FlatExpr mk_free(std::vector<VarId> vs, FlatExpr body);
  static FlatExpr mk_exempt();

  const FlatExpr& scrutinee() const { return kids[0]; }
  FlatExpr& scrutinee() { return kids[0]; }
  size_t branch_count() const { return pats.size(); }
  const FlatExpr& branch_body(size_t i) const { return kids[i + 1]; }
  FlatExpr& branch_body(size_t i) { return kids[i + 1]; }
  size_t bind_count() const { return vars.size(); }
  const FlatExpr& bind_expr(size_t i) const { return kids[i]; }
  FlatExpr& bind_expr(size_t i) { return kids[i]; }
  const FlatExpr& body() const { return kids.back(); }
  FlatExpr& body() { return kids.back(); }
};

struct FlatFunction {
  SymId name = 0;
  int arity = 0;
  std::vector<VarId> params;          // distinct; conventionally 1..arity
  FlatExpr body;
  std::map<VarId, std::string> var_names;  // optional source-name hints
  bool operator==(const FlatFunction&) const = default;
};

struct FlatProgram {
  TypeTable types;
  std::vector<FlatFunction> functions;

  const FlatFunction* find_function(SymId name) const;
};

// --- validate_flat -----------------------------------------------------------

struct FlatViolation {
  SymId function = 0;
  std::string message;
};

// Scope and arity checks: every variable bound exactly once and in scope at
// use sites, application arities match the table, case patterns are
// shallow/linear with no duplicate constructors, all branch constructors
// belong to one type.
std::vector<FlatViolation> validate_flat(const FlatProgram& program);

// --- pretty printer ----------------------------------------------------------

std::string pretty_flat(const FlatFunction& fn);
std::string pretty_flat(const FlatProgram& program, const std::string& only_module = "");

// Structural equality up to variable renaming (bijection between var ids).
bool flat_alpha_equal(const FlatFunction& a, const FlatFunction& b);

// Largest variable id mentioned anywhere in the function (0 if none).
VarId flat_max_var(const FlatFunction& fn);

}  // namespace icc
