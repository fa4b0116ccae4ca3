#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "icc/graph.hpp"
#include "icc/icurry.hpp"

namespace icc {

// Runtime faults: unknown symbols, type confusion between case kinds, and
// narrowing requests the machine cannot satisfy (integer variables).
class VmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  int max_answers = 10;
  long long max_steps = 1'000'000;
  bool dfs = false;  // default is breadth-first over the choice space
};

struct RunResult {
  std::vector<std::string> values;   // rendered, in discovery order
  std::vector<ValueTree> trees;      // same answers, structured
  bool incomplete = false;           // step budget ran out before exhaustion
  long long steps_used = 0;
};

// Graph rewriting machine over an ICurry program. Loading validates the parts
// the interpreter relies on beyond validate_icurry (known case types, case
// branches free of root references so suspended cases can be resumed).
class VM {
 public:
  explicit VM(IProgram program);

  const IProgram& program() const { return prog_; }
  GraphStore& graph() { return g_; }

  // Builds an application node for a 0-ary goal function.
  NodeId make_goal(SymId goal);

  // Rewrites until the node's target is no longer a function application.
  // Afterwards it dereferences to a constructor, literal, choice, free
  // variable, or failure.
  void hnf(NodeId n);

  // Evaluates `goal` (0-ary) to all constructor normal forms, forking at
  // top-level choices, consistent per computation via choice fingerprints.
  RunResult run(SymId goal, const RunOptions& opts = {});

 private:
  struct Prov {  // where a node was fetched from: parent.succ[index]
    NodeId parent = 0;
    int index = 0;
  };
  struct Slot {
    NodeId node = 0;
    bool assigned = false;
    std::optional<Prov> prov;
  };
  using Env = std::vector<Slot>;

  struct ResumePoint {
    const IFunction* owner = nullptr;
    const IStatement* stm = nullptr;
    VarId scrut_var = 0;              // bare-variable scrutinee
    std::vector<VarId> captured;      // ascending, excludes scrut_var
  };

  struct FuncInfo {
    const IFunction* fn = nullptr;
    VarId max_var = 0;
  };

  struct Budget {};  // thrown when max_steps is exhausted

  void index_function(const IFunction& fn);
  void index_blocks(const IFunction& fn, const IBlock& b, int& case_counter);

  void step(NodeId n);  // n must dereference to a Func node
  void exec_block(const IFunction& fn, const IBlock& b, Env& env, NodeId root);
  void exec_case(const IFunction& fn, const IStatement& stm, Env& env,
                 NodeId root, std::optional<NodeId> scrut_override);
  void exec_builtin(NodeId n);
  void exec_eq(NodeId n);
  void exec_and(NodeId n);
  void set_bool(NodeId n, bool v);
  const std::vector<ConstructorDecl>& bool_ctors();

  enum class Desc { Done, Failed, Progress };
  Desc descend(NodeId root);  // one normalization pass below the root

  NodeId build(const IExpr& e, Env& env, NodeId root);
  std::pair<NodeId, std::optional<Prov>> resolve_ref(const VarRef& ref,
                                                     Env& env, NodeId root);
  Slot& slot(Env& env, VarId v);

  const std::vector<ConstructorDecl>& case_ctors(const IStatement& stm) const;
  void spend();

  IProgram prog_;
  GraphStore g_;
  std::unordered_map<SymId, FuncInfo> funcs_;
  std::unordered_map<SymId, ResumePoint> resumes_;
  std::unordered_map<const IStatement*, SymId> resume_sym_;
  std::optional<TypeTable::CtorInfo> true_info_, false_info_;
  SymId true_sym_ = 0, false_sym_ = 0;
  long long steps_left_ = 0;
  long long steps_used_ = 0;
};

}  // namespace icc
