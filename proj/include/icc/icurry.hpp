#pragma once

#include <map>
#include <string>
#include <vector>

#include "icc/types.hpp"

namespace icc {

using VarId = int;

// Variable references. Select chains are flattened into a base plus a path of
// 1-based successor indices, e.g. ROOT[1], x[2][1].
enum class RefBase { Local, Root };

struct VarRef {
  RefBase base = RefBase::Local;
  VarId var = 0;                 // meaningful for Local
  std::vector<int> path;         // successor indices, each >= 1
  bool operator==(const VarRef&) const = default;

  static VarRef local(VarId v) { return {RefBase::Local, v, {}}; }
  static VarRef select(VarId v, int i) { return {RefBase::Local, v, {i}}; }
  static VarRef root() { return {RefBase::Root, 0, {}}; }
  static VarRef root_arg(int i) { return {RefBase::Root, 0, {i}}; }
};

enum class LabelKind { Constructor, Function };

struct ILabel {
  LabelKind kind = LabelKind::Constructor;
  SymId sym = 0;
  bool operator==(const ILabel&) const = default;
};

enum class IExprKind { Var, Int, Node, Or };

struct IExpr {
  IExprKind kind = IExprKind::Int;
  VarRef ref;                    // Var
  long long lit = 0;             // Int
  ILabel label;                  // Node
  std::vector<IExpr> args;       // Node: successors; Or: [left, right]
  bool operator==(const IExpr&) const = default;

  static IExpr mk_var(VarRef r);
  static IExpr mk_int(long long v);
  static IExpr mk_node(ILabel label, std::vector<IExpr> args = {});
  static IExpr mk_or(IExpr l, IExpr r);
};

enum class IStmtKind { Return, Exempt, Case, CaseLit };

struct IBlock;

struct IStatement {
  IStmtKind kind = IStmtKind::Exempt;
  IExpr expr;                        // Return
  VarRef scrut;                      // Case / CaseLit: printed as LABEL(v) / VALUE(v)
  std::vector<SymId> ctors;          // Case: branch constructors, tag order, complete
  std::vector<long long> lits;       // CaseLit: branch literals
  std::vector<IBlock> blocks;        // Case: per ctor; CaseLit: per literal + default last
  bool operator==(const IStatement&) const = default;
};

struct IDecl {
  bool is_free = false;
  VarId var = 0;
  bool operator==(const IDecl&) const = default;
};

struct IAssign {
  VarRef lhs;  // Local without path: plain assignment; with path: a patch x[i] = ...
  IExpr rhs;
  bool operator==(const IAssign&) const = default;
};

struct IBlock {
  std::vector<IDecl> decls;
  std::vector<IAssign> assigns;
  IStatement stm;
  bool operator==(const IBlock&) const = default;
};

struct IFunction {
  SymId name = 0;
  int arity = 0;
  IBlock body;
  std::map<VarId, std::string> var_names;  // pretty-name hints
  bool operator==(const IFunction&) const = default;
};

struct IProgram {
  TypeTable types;
  std::vector<IFunction> functions;

  const IFunction* find_function(SymId name) const;
};

// --- validate_icurry ---------------------------------------------------------

struct ICurryViolation {
  SymId function = 0;
  std::string message;
};

// Checks: declaration before use, no use of a local before its plain
// assignment within straight-line code, select indices >= 1, case branches
// cover the owning type's constructors exactly once in tag order, node arities
// do not exceed the label's arity, non-saturated node arguments only when a
// later patch fills them.
std::vector<ICurryViolation> validate_icurry(const IProgram& program);

// --- pretty printer / text parser --------------------------------------------

std::string pretty_icurry(const IFunction& fn);
std::string pretty_icurry(const IProgram& program, const std::string& only_module = "");

// Parses the pretty_icurry text format back (test aid for round-trips).
// Symbols resolve against `types` plus the function-name set implied by the text
// itself and `extra_functions`. Throws CompileError on malformed input.
IProgram parse_icurry_text(const std::string& text, const TypeTable& types,
                           const std::vector<std::pair<std::string, int>>& extra_functions = {});

bool icurry_alpha_equal(const IFunction& a, const IFunction& b);

}  // namespace icc
