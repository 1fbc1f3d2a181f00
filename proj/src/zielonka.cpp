#include "muller/zielonka.hpp"

#include <algorithm>
#include <map>

namespace muller {

namespace {

/// Maximal subsets of `universe` whose membership in the winning family is
/// `target`, in canonical label order. Enumerates the submask lattice, so
/// intended for explicit desk-scale alphabets.
std::vector<ColourSet> maximal_subsets(const MullerCondition& condition, ColourSet universe,
                                       bool target) {
  std::vector<ColourSet> cands;
  std::uint64_t u = universe.bits();
  std::uint64_t sub = u;
  while (true) {
    ColourSet s(sub);
    if (s != universe && condition.contains(s) == target) cands.push_back(s);
    if (sub == 0) break;
    sub = (sub - 1) & u;
  }
  // candidates not strictly contained in another candidate
  std::sort(cands.begin(), cands.end(),
            [](ColourSet a, ColourSet b) { return a.count() > b.count(); });
  std::vector<ColourSet> maximal;
  for (ColourSet s : cands) {
    bool dominated = false;
    for (ColourSet m : maximal)
      if (s.strict_subset_of(m)) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(s);
  }
  std::sort(maximal.begin(), maximal.end(), label_less);
  return maximal;
}

NodeId build_tree_rec(const MullerCondition& condition, ColourSet label, ZielonkaTree& tree) {
  bool winning = condition.contains(label);
  NodeId id = static_cast<NodeId>(tree.nodes.size());
  tree.nodes.push_back({label, winning ? Owner::Eve : Owner::Adam, {}});
  for (ColourSet child : maximal_subsets(condition, label, !winning)) {
    NodeId c = build_tree_rec(condition, child, tree);  // may reallocate nodes
    tree.nodes[id].children.push_back(c);
  }
  return id;
}

int r_of(const ZielonkaTree& tree, NodeId n);

}  // namespace

ZielonkaTree build_zielonka_tree(const MullerCondition& condition) {
  if (condition.alphabet().size() > 24)
    throw Unsupported("Zielonka tree construction enumerates subsets; alphabet too large");
  ZielonkaTree tree;
  tree.root = build_tree_rec(condition, condition.alphabet().all(), tree);
  return tree;
}

ZielonkaDag build_zielonka_dag(const ZielonkaTree& tree) {
  ZielonkaDag dag;
  std::map<std::uint64_t, NodeId> by_label;
  // Tree nodes with equal labels have identical subtrees, so a single pass
  // mapping labels to DAG nodes is enough.
  std::function<NodeId(NodeId)> visit = [&](NodeId t) -> NodeId {
    const auto& node = tree.nodes[t];
    auto it = by_label.find(node.label.bits());
    if (it != by_label.end()) return it->second;
    NodeId id = static_cast<NodeId>(dag.nodes.size());
    dag.nodes.push_back({node.label, node.owner, {}});
    by_label.emplace(node.label.bits(), id);
    for (NodeId c : node.children) {
      NodeId mapped = visit(c);  // may reallocate nodes
      dag.nodes[id].children.push_back(mapped);
    }
    return id;
  };
  dag.root = visit(tree.root);
  return dag;
}

int memory_number_m(const ZielonkaTree& tree) {
  std::function<int(NodeId)> rec = [&](NodeId n) -> int {
    const auto& node = tree.nodes[n];
    if (node.children.empty()) return 1;
    int acc = 0;
    for (NodeId c : node.children)
      acc = node.owner == Owner::Adam ? std::max(acc, rec(c)) : acc + rec(c);
    return acc;
  };
  return rec(tree.root);
}

int memory_number_mU(const ZielonkaTree& tree, const MullerCondition& condition) {
  std::function<int(NodeId)> rec = [&](NodeId n) -> int {
    const auto& node = tree.nodes[n];
    if (node.children.empty()) return 1;
    if (is_upward_closed_within(condition, node.label)) return 1;
    int acc = 0;
    for (NodeId c : node.children)
      acc = node.owner == Owner::Adam ? std::max(acc, rec(c)) : acc + rec(c);
    return acc;
  };
  return rec(tree.root);
}

namespace {

int r_of(const ZielonkaTree& tree, NodeId n) {
  const auto& node = tree.nodes[n];
  if (node.children.empty()) return 1;
  if (node.owner == Owner::Adam) {
    int acc = 1;
    for (NodeId c : node.children) acc = std::max(acc, r_of(tree, c));
    return acc;
  }
  int sum = 0;
  bool leaf_child = false;
  for (NodeId c : node.children) {
    if (tree.is_leaf(c))
      leaf_child = true;
    else
      sum += r_of(tree, c);
  }
  return sum + (leaf_child ? 1 : 0);
}

}  // namespace

int memory_number_r(const ZielonkaTree& tree) { return r_of(tree, tree.root); }

bool admits_memoryless_randomised(const ZielonkaTree& tree) {
  for (const auto& node : tree.nodes) {
    if (node.owner != Owner::Eve || node.children.size() <= 1) continue;
    for (NodeId c : node.children)
      if (!tree.is_leaf(c)) return false;
  }
  return true;
}

std::vector<NodeId> CroppedDag::children(NodeId n) const {
  const auto& node = source->nodes[n];
  if (node.owner == Owner::Eve) return node.children;
  if (choice[n] < 0) return {};
  return {static_cast<NodeId>(choice[n])};
}

namespace {

CroppedDag finish_cropping(const ZielonkaDag& dag, NodeId root,
                           const std::vector<std::int32_t>& choice) {
  CroppedDag out;
  out.source = &dag;
  out.root = root;
  out.choice.assign(dag.nodes.size(), -1);
  out.in_dag.assign(dag.nodes.size(), false);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (out.in_dag[n]) continue;
    out.in_dag[n] = true;
    const auto& node = dag.nodes[n];
    if (node.owner == Owner::Adam) {
      out.choice[n] = choice[n];
      if (choice[n] >= 0) stack.push_back(static_cast<NodeId>(choice[n]));
    } else {
      for (NodeId c : node.children) stack.push_back(c);
    }
  }
  return out;
}

/// Backtracking enumeration over child choices at reachable Adam nodes only,
/// so unreachable choices do not multiply the output.
void enumerate_rec(const ZielonkaDag& dag, NodeId root, std::vector<std::int32_t>& choice,
                   const std::function<void(const CroppedDag&)>& yield) {
  // find the first reachable Adam node with children but no choice yet
  std::vector<bool> seen(dag.nodes.size(), false);
  std::vector<NodeId> stack{root};
  std::int32_t pending = -1;
  while (!stack.empty() && pending < 0) {
    NodeId n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = true;
    const auto& node = dag.nodes[n];
    if (node.owner == Owner::Adam) {
      if (!node.children.empty() && choice[n] < 0) {
        pending = static_cast<std::int32_t>(n);
        break;
      }
      if (choice[n] >= 0) stack.push_back(static_cast<NodeId>(choice[n]));
    } else {
      // visit children in reverse so lower-ordered nodes are found first
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
        stack.push_back(*it);
    }
  }
  if (pending < 0) {
    yield(finish_cropping(dag, root, choice));
    return;
  }
  for (NodeId c : dag.nodes[pending].children) {
    choice[pending] = static_cast<std::int32_t>(c);
    enumerate_rec(dag, root, choice, yield);
  }
  choice[pending] = -1;
}

}  // namespace

void enumerate_cropped_dags(const ZielonkaDag& dag,
                            const std::function<void(const CroppedDag&)>& yield) {
  std::vector<NodeId> roots;
  if (dag.nodes[dag.root].owner == Owner::Eve)
    roots.push_back(dag.root);
  else
    roots = dag.nodes[dag.root].children;
  std::vector<std::int32_t> choice(dag.nodes.size(), -1);
  for (NodeId r : roots) enumerate_rec(dag, r, choice, yield);
}

std::vector<CroppedDag> enumerate_cropped_dags(const ZielonkaDag& dag) {
  std::vector<CroppedDag> out;
  enumerate_cropped_dags(dag, [&](const CroppedDag& c) { out.push_back(c); });
  return out;
}

int cropped_number_r(const CroppedDag& cropped) {
  std::map<NodeId, int> memo;
  std::function<int(NodeId)> rec = [&](NodeId n) -> int {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    auto kids = cropped.children(n);
    int result;
    if (kids.empty()) {
      result = 1;
    } else if (cropped.node(n).owner == Owner::Adam) {
      result = 1;
      for (NodeId c : kids) result = std::max(result, rec(c));
    } else {
      int sum = 0;
      bool leaf_child = false;
      for (NodeId c : kids) {
        if (cropped.is_leaf(c))
          leaf_child = true;
        else
          sum += rec(c);
      }
      result = sum + (leaf_child ? 1 : 0);
    }
    memo[n] = result;
    return result;
  };
  return rec(cropped.root);
}

CroppedDag optimal_cropped_dag(const ZielonkaDag& dag, const ZielonkaTree& tree) {
  // Bottom-up greedy: raising the r-value of any node never lowers an
  // ancestor's, so per-node maximal choices are jointly optimal.
  std::vector<int> best(dag.nodes.size(), 0);
  std::vector<std::int32_t> choice(dag.nodes.size(), -1);
  std::function<int(NodeId)> rec = [&](NodeId n) -> int {
    if (best[n] > 0) return best[n];
    const auto& node = dag.nodes[n];
    int result;
    if (node.children.empty()) {
      result = 1;
    } else if (node.owner == Owner::Adam) {
      int val = -1;
      for (NodeId c : node.children) {
        int v = dag.is_leaf(c) ? 1 : rec(c);
        if (v > val) {
          val = v;
          choice[n] = static_cast<std::int32_t>(c);
        }
      }
      result = std::max(1, val);
    } else {
      int sum = 0;
      bool leaf_child = false;
      for (NodeId c : node.children) {
        if (dag.is_leaf(c))
          leaf_child = true;
        else
          sum += rec(c);
      }
      result = sum + (leaf_child ? 1 : 0);
    }
    best[n] = result;
    return result;
  };

  NodeId root = dag.root;
  if (dag.nodes[root].owner == Owner::Adam) {
    if (dag.nodes[root].children.empty())
      throw Error("the empty family has no cropped DAG");
    int val = -1;
    for (NodeId c : dag.nodes[root].children) {
      int v = rec(c);
      if (v > val) {
        val = v;
        root = c;
      }
    }
  } else {
    rec(root);
  }
  CroppedDag out = finish_cropping(dag, root, choice);
  if (cropped_number_r(out) != memory_number_r(tree))
    throw Error("internal: optimal cropped DAG does not attain the tree r-number");
  return out;
}

std::vector<Branch> branches(const CroppedDag& cropped) {
  std::vector<Branch> out;
  Branch path;
  std::function<void(NodeId)> dfs = [&](NodeId n) {
    path.push_back(n);
    auto kids = cropped.children(n);
    if (kids.empty())
      out.push_back(path);
    else
      for (NodeId c : kids) dfs(c);
    path.pop_back();
  };
  dfs(cropped.root);
  return out;
}

std::vector<std::vector<std::size_t>> branch_classes(const CroppedDag& cropped) {
  auto all = branches(cropped);
  std::vector<std::vector<std::size_t>> classes;
  std::map<Branch, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Branch key = all[i];
    NodeId last = key.back();
    if (cropped.node(last).owner == Owner::Adam && cropped.is_leaf(last)) key.pop_back();
    auto [it, inserted] = index.emplace(std::move(key), classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

}  // namespace muller
