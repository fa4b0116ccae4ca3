#include "icc/builtins.hpp"

namespace icc {

SymId builtin_sym(Builtin b) {
  switch (b) {
    case Builtin::Add: return intern(kModulePrelude, "+");
    case Builtin::Sub: return intern(kModulePrelude, "-");
    case Builtin::Eq: return intern(kModulePrelude, "==");
    case Builtin::Lt: return intern(kModulePrelude, "<");
    case Builtin::Ge: return intern(kModulePrelude, ">=");
    case Builtin::And: return intern(kModuleVm, "$and");
    case Builtin::None: break;
  }
  return 0;
}

Builtin builtin_of(SymId sym) {
  if (sym == 0) return Builtin::None;
  for (Builtin b : {Builtin::Add, Builtin::Sub, Builtin::Eq, Builtin::Lt, Builtin::Ge, Builtin::And})
    if (builtin_sym(b) == sym) return b;
  return Builtin::None;
}

int builtin_arity(SymId sym) { return is_builtin(sym) ? 2 : -1; }

}  // namespace icc
