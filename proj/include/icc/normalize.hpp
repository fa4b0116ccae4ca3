#pragma once

#include <string>
#include <vector>

#include "icc/flat.hpp"

namespace icc {

// Normalization pipeline establishing the translation preconditions:
//   1. lift_impure_args: arguments of applications, operands of Or, and let
//      bindings that are Case/Let/Free become calls to fresh auxiliary
//      functions (name scheme <base>_aux<k>, parameters = free variables of
//      the lifted expression in first-occurrence order).
//   2. normalize_scrutinees: case scrutinees that are Or/Let/Free/Case are
//      lifted the same way; variables, literals, constructor and function
//      applications stay.
//   3. complete_and_order_cases: constructor cases gain exempt branches for
//      missing constructors and are sorted into tag order; literal cases are
//      sorted by value.
// All passes are deterministic; auxiliary functions are appended in creation
// order.

void lift_impure_args(FlatProgram& program);
void normalize_scrutinees(FlatProgram& program);
void complete_and_order_cases(FlatProgram& program);

// Convenience: the full pipeline in order.
void normalize(FlatProgram& program);

struct PrecondViolation {
  SymId function = 0;
  std::string message;
};

// Checks the translation preconditions on a (supposedly) normalized program:
// pure application arguments and Or operands, pure-or-Or let bindings, case
// scrutinees that are variables/literals/constructor/function applications,
// complete tag-ordered constructor branches, exempt only in tail position.
std::vector<PrecondViolation> check_preconditions(const FlatProgram& program);

}  // namespace icc
