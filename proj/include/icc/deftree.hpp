#pragma once

#include <vector>

#include "icc/flat.hpp"

namespace icc {

// Definitional tree for one function's rules.
//
// Branch: an inductive position all remaining rules demand; one child per
// constructor of the scrutinized type in tag order (Exempt where no rule
// matches). LitBranch: the same for integer literal patterns (keys ascending).
// Or: overlapping alternatives, textual rule order. Leaf: a compiled
// right-hand side.
struct DefTree {
  enum class Kind { Branch, LitBranch, Leaf, Or, Exempt };
  Kind kind = Kind::Exempt;

  // Branch / LitBranch
  VarId scrut_var = 0;
  std::vector<int> position;                    // 1-based path from the argument tuple
  SymId type_name = 0;                          // Branch only
  std::vector<SymId> ctors;                     // Branch: tag order
  std::vector<std::vector<VarId>> child_vars;   // Branch: fresh vars per child
  std::vector<long long> lits;                  // LitBranch: ascending
  std::vector<DefTree> children;                // Branch/LitBranch/Or

  // Leaf
  FlatExpr body;
};

}  // namespace icc
