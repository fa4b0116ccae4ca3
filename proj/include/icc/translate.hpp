#pragma once

#include "icc/flat.hpp"
#include "icc/icurry.hpp"

namespace icc {

// FlatCurry -> ICurry translation. Input must satisfy the translation
// preconditions (see normalize.hpp / check_preconditions); violations surface
// as CompileError.
//
// Shape: a function becomes one block that declares its parameters, fetches
// them from ROOT, chains declarations/assignments through let/free wrappers,
// and ends in return/exempt/case. Let bindings become node assignments in
// binding order followed by patches x_j[p] = x_i for occurrences of
// not-yet-assigned variables of the same let (i >= j). A case on a variable
// reuses that variable; any other scrutinee is assigned to a fresh case
// variable first. A branch body that is exactly one of its pattern variables
// shortens to `return v[i]`.
IFunction translate_function(const TypeTable& types, const FlatFunction& fn);
IProgram translate_program(const FlatProgram& program);

}  // namespace icc
