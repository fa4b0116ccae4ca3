#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "icc/types.hpp"

namespace icc {

using NodeId = std::uint32_t;

enum class NodeTag : std::uint8_t {
  Ctor,    // constructor application; sym + ctor_tag, succ = arguments
  Func,    // function application awaiting evaluation; sym, succ = arguments
  Choice,  // non-deterministic pair; lit = choice id, succ = {left, right}
  Fail,    // failed subcomputation (also the initial value of holes)
  Free,    // uninstantiated logic variable; lit = variable id
  Int,     // integer literal; lit = value
  Fwd,     // forwarding node; succ = {target}
};

struct Node {
  NodeTag tag = NodeTag::Fail;
  SymId sym = 0;               // Ctor / Func label
  int ctor_tag = 0;            // Ctor: position within its type
  long long lit = 0;           // Int value / Choice id / Free variable id
  std::vector<NodeId> succ;
};

// Append-only node arena. Rewriting follows one rule: a redex whose
// replacement is a pre-existing node gets a Fwd (other references must observe
// the shared result); in-place overwrites are reserved for replacements built
// fresh on the spot (failures, builtin results, pulled choices, instantiated
// free variables), where every reference *should* observe the new value.
class GraphStore {
 public:
  NodeId make_ctor(SymId sym, int ctor_tag, std::vector<NodeId> succ = {});
  NodeId make_func(SymId sym, std::vector<NodeId> succ = {});
  NodeId make_int(long long value);
  NodeId make_fail();
  NodeId make_choice(long long id, NodeId left, NodeId right);
  NodeId make_free();  // fresh variable id
  // Placeholder successor for a node under construction; patched later, and
  // behaves as a failure if a patch never arrives.
  NodeId hole() { return make_fail(); }

  Node& at(NodeId n) { return nodes_[n]; }
  const Node& at(NodeId n) const { return nodes_[n]; }

  // Skips forwarding nodes, compressing the chain as it goes.
  NodeId deref(NodeId n);

  // Redirects `from` (and its forwarding chain) to the existing node `to`.
  void forward_to(NodeId from, NodeId to);

  // In-place overwrites; see the class comment for when these are legal.
  void set_fail(NodeId n);
  void set_int(NodeId n, long long value);
  void set_ctor(NodeId n, SymId sym, int ctor_tag, std::vector<NodeId> succ);
  void set_choice(NodeId n, long long id, NodeId left, NodeId right);
  // Copies the value of the freshly built node `built` into `n`.
  void overwrite_with(NodeId n, NodeId built);

  // parent.succ[index] must dereference to a Choice. Allocates exactly two
  // copies of the parent (one per alternative, all other successors shared)
  // and overwrites the parent with a Choice of the same id. Returns `parent`.
  NodeId pull_tab(NodeId parent, int index);

  // Overwrites the Free node `n` with a right-nested Choice chain over the
  // given constructors (tag order), each applied to fresh free variables.
  // A single constructor instantiates directly, without a Choice.
  void instantiate_free(NodeId n, const std::vector<ConstructorDecl>& ctors);

  long long fresh_choice_id() { return next_choice_++; }
  std::size_t size() const { return nodes_.size(); }

 private:
  NodeId add(Node node);

  std::deque<Node> nodes_;
  long long next_choice_ = 1;
  long long next_var_ = 1;
};

// Number of distinct nodes reachable from `root`, not counting Fwd skips.
std::size_t reachable_count(GraphStore& g, NodeId root);

// Structural isomorphism modulo Fwd, with choice and free-variable ids
// matched up to a bijection.
bool graph_isomorphic(GraphStore& ga, NodeId ra, GraphStore& gb, NodeId rb);

// --- value extraction --------------------------------------------------------

struct ValueTree {
  enum class Kind { Con, Int, Free, CycleRef, Truncated, Opaque };
  Kind kind = Kind::Truncated;
  SymId con = 0;                // Con
  long long lit = 0;            // Int value / Free variable id
  int cycle = 0;                // CycleRef: depth of the referenced ancestor
  std::string text;             // Opaque (debug rendering of non-values)
  std::vector<ValueTree> kids;  // Con arguments
  bool operator==(const ValueTree&) const = default;
};

ValueTree extract_value(GraphStore& g, NodeId root, int max_depth = 64);

// Renumbers free variables 0,1,2,... in pre-order first-occurrence order so
// equal values render identically regardless of runtime variable ids.
void normalize_free_vars(ValueTree& t);

// Concrete syntax: list and pair sugar, `_a`-style free variables, `#k`
// cycle back-references, `...` for truncation.
std::string render_value(const ValueTree& t);

// extract + normalize + render.
std::string show_value(GraphStore& g, NodeId root);

}  // namespace icc
