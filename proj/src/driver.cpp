#include "icc/driver.hpp"

#include <utility>

#include "icc/frontend.hpp"
#include "icc/normalize.hpp"
#include "icc/prelude.hpp"
#include "icc/surface.hpp"
#include "icc/translate.hpp"

namespace icc {

SymId goal_symbol() { return intern(kModuleMain, "main_goal"); }

Pipeline run_pipeline(const std::string& user_source,
                      const PipelineOptions& opts) {
  std::vector<ModuleSource> modules;
  if (opts.with_prelude) {
    modules.push_back({kModulePrelude, parse_surface(prelude_source())});
  }
  modules.push_back({kModuleMain, parse_surface(user_source)});
  if (!opts.goal.empty()) {
    modules.back().program.rules.push_back(parse_goal(opts.goal));
  }

  Pipeline pipe;
  pipe.flat = compile_modules(modules);
  if (auto bad = validate_flat(pipe.flat); !bad.empty()) {
    throw CompileError(
        {{}, "internal: frontend produced invalid FlatCurry for " +
                 sym_qualified(bad.front().function) + ": " +
                 bad.front().message});
  }

  pipe.normalized = pipe.flat;
  normalize(pipe.normalized);
  if (auto bad = check_preconditions(pipe.normalized); !bad.empty()) {
    throw CompileError(
        {{}, "internal: normalization missed a precondition in " +
                 sym_qualified(bad.front().function) + ": " +
                 bad.front().message});
  }

  pipe.icurry = translate_program(pipe.normalized);
  if (auto bad = validate_icurry(pipe.icurry); !bad.empty()) {
    throw CompileError({{}, "internal: translation produced invalid code in " +
                                sym_qualified(bad.front().function) + ": " +
                                bad.front().message});
  }
  return pipe;
}

}  // namespace icc
