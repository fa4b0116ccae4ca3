#pragma once

#include <string>
#include <vector>

#include "icc/flat.hpp"

namespace icc {

// Surface AST for MiniCurry. Names are unresolved strings; resolution happens
// during flattening when the full data/function environment is known.

struct SExpr {
  enum class Kind { Lit, Ident, Anon, Apply, Let, FreeIn };
  Kind kind = Kind::Lit;
  long long lit = 0;
  std::string name;                 // Ident; Apply: head name (function/ctor/operator)
  std::vector<std::string> names;   // Let: binding names; FreeIn: free names
  std::vector<SExpr> args;          // Apply: arguments
                                    // Let: binding exprs then body; FreeIn: [body]
  SourceLoc loc;
};

struct SPattern {
  enum class Kind { Var, Anon, Lit, Ctor };
  Kind kind = Kind::Var;
  std::string name;                 // Var name or Ctor name
  long long lit = 0;
  std::vector<SPattern> args;       // Ctor sub-patterns
  SourceLoc loc;
};

struct SGuarded {
  SExpr guard;   // meaningful when `has_guard`
  SExpr body;
  bool has_guard = false;
};

struct SRule {
  std::string fname;
  std::vector<SPattern> params;
  std::vector<SGuarded> alts;            // one unguarded alt, or 1+ guarded alts
  std::vector<std::string> where_free;
  SourceLoc loc;
};

struct SData {
  std::string type_name;
  std::vector<std::string> type_params;                  // accepted, erased
  std::vector<std::pair<std::string, int>> constructors; // (name, arity)
  SourceLoc loc;
};

struct SurfaceProgram {
  std::vector<SData> datas;
  std::vector<SRule> rules;
};

// Parses one module's source text. Throws CompileError with line/column on
// the first syntax error. Layout: a top-level item starts in column one;
// indented lines continue the previous item. `--` starts a comment.
SurfaceProgram parse_surface(const std::string& text);

// Parses `text` as a goal expression (a rule body, so `where ... free` works).
// Returns a rule named `main_goal` with no parameters.
SRule parse_goal(const std::string& text);

}  // namespace icc
