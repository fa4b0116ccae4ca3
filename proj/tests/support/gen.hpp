#pragma once

#include "icc/flat.hpp"

namespace icc::genp {

// Seeded random FlatCurry programs for differential testing. Generated
// programs are closed, well-scoped, and terminating by construction: the call
// graph is acyclic (a function only calls lower-numbered ones), let bindings
// only reference vars already in scope, and there are no free variables.
// Cases may be incomplete and literal cases may miss, so failure paths get
// exercised too.
struct GenOptions {
  unsigned seed = 1;
  int n_functions = 6;
  int max_depth = 4;
};

FlatProgram gen_program(const GenOptions& opts);

}  // namespace icc::genp
