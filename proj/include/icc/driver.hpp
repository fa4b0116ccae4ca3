#pragma once

#include <string>

#include "icc/flat.hpp"
#include "icc/icurry.hpp"

namespace icc {

struct PipelineOptions {
  bool with_prelude = true;
  std::string goal;  // optional goal expression, compiled as `main_goal`
};

struct Pipeline {
  FlatProgram flat;        // frontend output
  FlatProgram normalized;  // after the normalization passes
  IProgram icurry;
};

// Source -> FlatCurry -> normalized FlatCurry -> ICurry, with each stage's
// invariants checked before the next one runs. Throws CompileError with the
// first problem found.
Pipeline run_pipeline(const std::string& user_source,
                      const PipelineOptions& opts = {});

// Name of the synthesized goal function when PipelineOptions::goal is set.
SymId goal_symbol();

}  // namespace icc
