#include "icc/graph.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace icc {

NodeId GraphStore::add(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId GraphStore::make_ctor(SymId sym, int ctor_tag, std::vector<NodeId> succ) {
  Node n;
  n.tag = NodeTag::Ctor;
  n.sym = sym;
  n.ctor_tag = ctor_tag;
  n.succ = std::move(succ);
  return add(std::move(n));
}

NodeId GraphStore::make_func(SymId sym, std::vector<NodeId> succ) {
  Node n;
  n.tag = NodeTag::Func;
  n.sym = sym;
  n.succ = std::move(succ);
  return add(std::move(n));
}

NodeId GraphStore::make_int(long long value) {
  Node n;
  n.tag = NodeTag::Int;
  n.lit = value;
  return add(std::move(n));
}

NodeId GraphStore::make_fail() { return add(Node{}); }

NodeId GraphStore::make_choice(long long id, NodeId left, NodeId right) {
  Node n;
  n.tag = NodeTag::Choice;
  n.lit = id;
  n.succ = {left, right};
  return add(std::move(n));
}

NodeId GraphStore::make_free() {
  Node n;
  n.tag = NodeTag::Free;
  n.lit = next_var_++;
  return add(std::move(n));
}

NodeId GraphStore::deref(NodeId n) {
  if (nodes_[n].tag != NodeTag::Fwd) return n;
  NodeId target = n;
  while (nodes_[target].tag == NodeTag::Fwd) target = nodes_[target].succ[0];
  while (nodes_[n].tag == NodeTag::Fwd) {
    NodeId next = nodes_[n].succ[0];
    nodes_[n].succ[0] = target;
    n = next;
  }
  return target;
}

void GraphStore::forward_to(NodeId from, NodeId to) {
  from = deref(from);
  to = deref(to);
  if (from == to) return;
  Node& n = nodes_[from];
  n.tag = NodeTag::Fwd;
  n.sym = 0;
  n.ctor_tag = 0;
  n.lit = 0;
  n.succ = {to};
}

void GraphStore::set_fail(NodeId n) { nodes_[deref(n)] = Node{}; }

void GraphStore::set_int(NodeId n, long long value) {
  Node fresh;
  fresh.tag = NodeTag::Int;
  fresh.lit = value;
  nodes_[deref(n)] = std::move(fresh);
}

void GraphStore::set_ctor(NodeId n, SymId sym, int ctor_tag,
                          std::vector<NodeId> succ) {
  Node fresh;
  fresh.tag = NodeTag::Ctor;
  fresh.sym = sym;
  fresh.ctor_tag = ctor_tag;
  fresh.succ = std::move(succ);
  nodes_[deref(n)] = std::move(fresh);
}

void GraphStore::set_choice(NodeId n, long long id, NodeId left, NodeId right) {
  Node fresh;
  fresh.tag = NodeTag::Choice;
  fresh.lit = id;
  fresh.succ = {left, right};
  nodes_[deref(n)] = std::move(fresh);
}

void GraphStore::overwrite_with(NodeId n, NodeId built) {
  n = deref(n);
  built = deref(built);
  if (n == built) return;
  nodes_[n] = nodes_[built];
}

NodeId GraphStore::pull_tab(NodeId parent, int index) {
  parent = deref(parent);
  Node snapshot = nodes_[parent];
  if (index < 0 || static_cast<std::size_t>(index) >= snapshot.succ.size()) {
    throw std::logic_error("pull_tab: successor index out of range");
  }
  NodeId choice = deref(snapshot.succ[index]);
  const Node& c = nodes_[choice];
  if (c.tag != NodeTag::Choice) {
    throw std::logic_error("pull_tab: successor is not a choice");
  }
  long long id = c.lit;
  NodeId alt_left = c.succ[0];
  NodeId alt_right = c.succ[1];

  Node left = snapshot;
  left.succ[index] = alt_left;
  Node right = snapshot;
  right.succ[index] = alt_right;
  NodeId l = add(std::move(left));
  NodeId r = add(std::move(right));
  set_choice(parent, id, l, r);
  return parent;
}

void GraphStore::instantiate_free(NodeId n,
                                  const std::vector<ConstructorDecl>& ctors) {
  n = deref(n);
  if (nodes_[n].tag != NodeTag::Free) {
    throw std::logic_error("instantiate_free: node is not a free variable");
  }
  if (ctors.empty()) {
    throw std::logic_error("instantiate_free: type has no constructors");
  }
  auto shell = [&](const ConstructorDecl& c) {
    std::vector<NodeId> args;
    args.reserve(c.arity);
    for (int i = 0; i < c.arity; ++i) args.push_back(make_free());
    return make_ctor(c.name, c.tag, std::move(args));
  };
  if (ctors.size() == 1) {
    NodeId built = shell(ctors[0]);
    nodes_[n] = nodes_[built];
    return;
  }
  NodeId chain = shell(ctors.back());
  for (std::size_t i = ctors.size() - 1; i-- > 1;) {
    chain = make_choice(fresh_choice_id(), shell(ctors[i]), chain);
  }
  set_choice(n, fresh_choice_id(), shell(ctors[0]), chain);
}

std::size_t reachable_count(GraphStore& g, NodeId root) {
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> work{g.deref(root)};
  while (!work.empty()) {
    NodeId n = work.back();
    work.pop_back();
    if (!seen.insert(n).second) continue;
    for (NodeId s : g.at(n).succ) work.push_back(g.deref(s));
  }
  return seen.size();
}

bool graph_isomorphic(GraphStore& ga, NodeId ra, GraphStore& gb, NodeId rb) {
  std::unordered_map<NodeId, NodeId> ab, ba;
  std::unordered_map<long long, long long> choice_ab, choice_ba;
  std::unordered_map<long long, long long> var_ab, var_ba;
  auto bind_id = [](std::unordered_map<long long, long long>& fwd,
                    std::unordered_map<long long, long long>& bwd,
                    long long x, long long y) {
    auto [itf, newf] = fwd.emplace(x, y);
    if (!newf && itf->second != y) return false;
    auto [itb, newb] = bwd.emplace(y, x);
    return newb || itb->second == x;
  };

  std::vector<std::pair<NodeId, NodeId>> work{{ga.deref(ra), gb.deref(rb)}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    a = ga.deref(a);
    b = gb.deref(b);
    auto [ita, newa] = ab.emplace(a, b);
    if (!newa) {
      if (ita->second != b) return false;
      continue;
    }
    auto [itb, newb] = ba.emplace(b, a);
    if (!newb && itb->second != a) return false;

    const Node& na = ga.at(a);
    const Node& nb = gb.at(b);
    if (na.tag != nb.tag) return false;
    switch (na.tag) {
      case NodeTag::Ctor:
      case NodeTag::Func:
        if (na.sym != nb.sym) return false;
        break;
      case NodeTag::Int:
        if (na.lit != nb.lit) return false;
        break;
      case NodeTag::Choice:
        if (!bind_id(choice_ab, choice_ba, na.lit, nb.lit)) return false;
        break;
      case NodeTag::Free:
        if (!bind_id(var_ab, var_ba, na.lit, nb.lit)) return false;
        break;
      case NodeTag::Fail:
        break;
      case NodeTag::Fwd:
        throw std::logic_error("graph_isomorphic: deref left a Fwd node");
    }
    if (na.succ.size() != nb.succ.size()) return false;
    for (std::size_t i = 0; i < na.succ.size(); ++i) {
      work.emplace_back(na.succ[i], nb.succ[i]);
    }
  }
  return true;
}

// --- value extraction --------------------------------------------------------

namespace {

ValueTree extract_rec(GraphStore& g, NodeId n, int depth, int max_depth,
                      std::unordered_map<NodeId, int>& on_path) {
  n = g.deref(n);
  if (auto it = on_path.find(n); it != on_path.end()) {
    ValueTree t;
    t.kind = ValueTree::Kind::CycleRef;
    t.cycle = it->second;
    return t;
  }
  if (depth >= max_depth) {
    ValueTree t;
    t.kind = ValueTree::Kind::Truncated;
    return t;
  }
  const Node& node = g.at(n);
  ValueTree t;
  switch (node.tag) {
    case NodeTag::Int:
      t.kind = ValueTree::Kind::Int;
      t.lit = node.lit;
      break;
    case NodeTag::Free:
      t.kind = ValueTree::Kind::Free;
      t.lit = node.lit;
      break;
    case NodeTag::Ctor: {
      t.kind = ValueTree::Kind::Con;
      t.con = node.sym;
      on_path.emplace(n, depth);
      for (NodeId s : node.succ) {
        t.kids.push_back(extract_rec(g, s, depth + 1, max_depth, on_path));
      }
      on_path.erase(n);
      break;
    }
    case NodeTag::Fail:
      t.kind = ValueTree::Kind::Opaque;
      t.text = "<fail>";
      break;
    case NodeTag::Func:
      t.kind = ValueTree::Kind::Opaque;
      t.text = "<fn " + sym_qualified(node.sym) + ">";
      break;
    case NodeTag::Choice:
      t.kind = ValueTree::Kind::Opaque;
      t.text = "<choice " + std::to_string(node.lit) + ">";
      break;
    case NodeTag::Fwd:
      throw std::logic_error("extract_value: deref left a Fwd node");
  }
  return t;
}

void normalize_rec(ValueTree& t, std::unordered_map<long long, long long>& ids) {
  if (t.kind == ValueTree::Kind::Free) {
    auto [it, fresh] = ids.emplace(t.lit, static_cast<long long>(ids.size()));
    t.lit = it->second;
    (void)fresh;
  }
  for (auto& k : t.kids) normalize_rec(k, ids);
}

bool is_con(const ValueTree& t, const char* name) {
  return t.kind == ValueTree::Kind::Con && sym_name(t.con) == name;
}

std::string render_free(long long id) {
  if (id >= 0 && id < 26) return std::string("_") + static_cast<char>('a' + id);
  return "_v" + std::to_string(id);
}

}  // namespace

ValueTree extract_value(GraphStore& g, NodeId root, int max_depth) {
  std::unordered_map<NodeId, int> on_path;
  return extract_rec(g, root, 0, max_depth, on_path);
}

void normalize_free_vars(ValueTree& t) {
  std::unordered_map<long long, long long> ids;
  normalize_rec(t, ids);
}

std::string render_value(const ValueTree& t) {
  switch (t.kind) {
    case ValueTree::Kind::Int:
      return std::to_string(t.lit);
    case ValueTree::Kind::Free:
      return render_free(t.lit);
    case ValueTree::Kind::CycleRef:
      return "#" + std::to_string(t.cycle);
    case ValueTree::Kind::Truncated:
      return "...";
    case ValueTree::Kind::Opaque:
      return t.text;
    case ValueTree::Kind::Con:
      break;
  }
  const std::string name = sym_name(t.con);
  if (name == "[]" && t.kids.empty()) return "[]";
  if (name == ":" && t.kids.size() == 2) {
    // Collect the spine; proper lists render bracketed, anything else dotted.
    std::vector<const ValueTree*> elems;
    const ValueTree* tail = &t;
    while (is_con(*tail, ":") && tail->kids.size() == 2) {
      elems.push_back(&tail->kids[0]);
      tail = &tail->kids[1];
    }
    std::string out;
    if (is_con(*tail, "[]")) {
      out = "[";
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) out += ", ";
        out += render_value(*elems[i]);
      }
      out += "]";
    } else {
      out = "(";
      for (const ValueTree* e : elems) out += render_value(*e) + " : ";
      out += render_value(*tail) + ")";
    }
    return out;
  }
  if (name == "Pair" && t.kids.size() == 2) {
    return "(" + render_value(t.kids[0]) + ", " + render_value(t.kids[1]) + ")";
  }
  if (t.kids.empty()) return name;
  std::string out = "(" + name;
  for (const auto& k : t.kids) out += " " + render_value(k);
  return out + ")";
}

std::string show_value(GraphStore& g, NodeId root) {
  ValueTree t = extract_value(g, root);
  normalize_free_vars(t);
  return render_value(t);
}

}  // namespace icc
