#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icc/driver.hpp"
#include "icc/vm.hpp"

namespace icc::tu {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) {
  return read_file(std::string(CORPUS_DIR) + "/" + name);
}

inline std::string golden(const std::string& name) {
  return read_file(std::string(GOLDEN_DIR) + "/" + name);
}

// Full pipeline on inline source, optionally with a goal expression.
inline Pipeline pipe(const std::string& src, const std::string& goal = "",
                     bool with_prelude = true) {
  PipelineOptions o;
  o.with_prelude = with_prelude;
  o.goal = goal;
  return run_pipeline(src, o);
}

// Compile + run a goal; returns rendered answers in discovery order.
inline RunResult run_goal(const std::string& src, const std::string& goal,
                          RunOptions opts = {.max_answers = 64, .max_steps = 2'000'000, .dfs = false},
                          bool with_prelude = true) {
  Pipeline p = pipe(src, goal, with_prelude);
  VM vm(p.icurry);
  return vm.run(goal_symbol(), opts);
}

inline std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline std::set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

}  // namespace icc::tu
