#pragma once

#include "icc/symbols.hpp"

namespace icc {

// Native operations the runtime interprets directly. They live in the Prelude
// namespace so surface operators resolve to them when no rule shadows them.
enum class Builtin { None, Add, Sub, Eq, Lt, Ge, And };

SymId builtin_sym(Builtin b);
Builtin builtin_of(SymId sym);
inline bool is_builtin(SymId sym) { return builtin_of(sym) != Builtin::None; }
int builtin_arity(SymId sym);  // 2 for all current builtins

}  // namespace icc
