// icc: compile MiniCurry sources to FlatCurry/ICurry/JSON, or evaluate them.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "icc/driver.hpp"
#include "icc/flat.hpp"
#include "icc/icurry.hpp"
#include "icc/json_io.hpp"
#include "icc/vm.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

struct CommonArgs {
  std::string file;
  std::string goal;
  std::string out;
  bool no_prelude = false;
  bool full = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool goal_required) {
  cmd->add_option("file", args.file, "MiniCurry source file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* g = cmd->add_option("-g,--goal", args.goal,
                            "goal expression, compiled as main_goal");
  if (goal_required) g->required();
  cmd->add_option("-o,--output", args.out, "write output here instead of stdout");
  cmd->add_flag("--no-prelude", args.no_prelude, "do not load the prelude");
}

icc::Pipeline compile(const CommonArgs& args) {
  icc::PipelineOptions opts;
  opts.with_prelude = !args.no_prelude;
  opts.goal = args.goal;
  return icc::run_pipeline(slurp(args.file), opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MiniCurry compiler and graph-rewriting evaluator"};
  app.require_subcommand(1);

  CommonArgs flat_args, icurry_args, json_args, eval_args;

  auto* flat_cmd = app.add_subcommand("flat", "print FlatCurry");
  add_common(flat_cmd, flat_args, false);
  flat_cmd->add_flag("--full", flat_args.full, "include prelude functions");

  auto* icurry_cmd = app.add_subcommand("icurry", "print ICurry");
  add_common(icurry_cmd, icurry_args, false);
  icurry_cmd->add_flag("--full", icurry_args.full, "include prelude functions");

  auto* json_cmd = app.add_subcommand("json", "emit the ICurry JSON document");
  add_common(json_cmd, json_args, false);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a goal");
  add_common(eval_cmd, eval_args, true);
  int max_answers = 10;
  long long max_steps = 1'000'000;
  std::string strategy = "bfs";
  eval_cmd->add_option("-n,--max-answers", max_answers,
                       "stop after this many values");
  eval_cmd->add_option("--max-steps", max_steps, "rewrite step budget");
  eval_cmd->add_option("--strategy", strategy, "bfs or dfs")
      ->check(CLI::IsMember({"bfs", "dfs"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (flat_cmd->parsed()) {
      auto pipe = compile(flat_args);
      std::string only = flat_args.full ? "" : icc::kModuleMain;
      write_out(flat_args.out, pretty_flat(pipe.flat, only));
    } else if (icurry_cmd->parsed()) {
      auto pipe = compile(icurry_args);
      std::string only = icurry_args.full ? "" : icc::kModuleMain;
      write_out(icurry_args.out, pretty_icurry(pipe.icurry, only));
    } else if (json_cmd->parsed()) {
      auto pipe = compile(json_args);
      write_out(json_args.out, icc::emit_json(pipe.icurry));
    } else if (eval_cmd->parsed()) {
      auto pipe = compile(eval_args);
      icc::VM vm(std::move(pipe.icurry));
      icc::RunOptions opts;
      opts.max_answers = max_answers;
      opts.max_steps = max_steps;
      opts.dfs = strategy == "dfs";
      icc::RunResult res = vm.run(icc::goal_symbol(), opts);
      std::string text;
      for (const auto& v : res.values) text += v + "\n";
      write_out(eval_args.out, text);
      if (res.incomplete) {
        std::cerr << "warning: step budget exhausted after " << res.steps_used
                  << " steps; result list may be incomplete\n";
        return kExitIncomplete;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
