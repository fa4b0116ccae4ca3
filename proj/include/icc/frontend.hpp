#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icc/deftree.hpp"
#include "icc/surface.hpp"

namespace icc {

struct ModuleSource {
  std::string module;
  SurfaceProgram program;
};

// Function signature environment used during name resolution.
class FuncEnv {
 public:
  void add(SymId name, int arity);
  // Resolution order: `module`, then Main, then Prelude, then native builtins.
  std::optional<std::pair<SymId, int>> resolve(const std::string& name,
                                               const std::string& module) const;

 private:
  std::map<SymId, int> sigs_;
};

// Compiles one function's rules: definitional tree construction and the
// tree -> FlatCurry conversion. Exposed separately so tests can inspect trees.
class FunctionCompiler {
 public:
  FunctionCompiler(const TypeTable& types, const FuncEnv& env, std::string module,
                   SymId name, int arity, std::vector<const SRule*> rules);

  DefTree build_def_tree();
  FlatFunction tree_to_flat(const DefTree& tree);

 private:
  struct Row;
  struct PosEntry;
  struct Impl;

  const TypeTable& types_;
  const FuncEnv& env_;
  std::string module_;
  SymId name_;
  int arity_;
  std::vector<const SRule*> rules_;
  VarId next_var_ = 1;
  std::map<VarId, std::string> var_names_;

  friend struct Impl;
};

// Flattens whole modules (data declarations first, then every function via
// definitional trees). Throws CompileError on the first resolution/semantic
// error.
FlatProgram compile_modules(const std::vector<ModuleSource>& modules);

}  // namespace icc
