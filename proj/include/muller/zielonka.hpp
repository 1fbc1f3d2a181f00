#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "muller/colour.hpp"

namespace muller {

using NodeId = std::uint32_t;

/// Zielonka tree of a Muller condition. A node is Eve's iff its label is a
/// winning set; children are the maximal subsets of the label lying in the
/// opposite family, sorted in canonical label order.
struct ZielonkaTree {
  struct Node {
    ColourSet label;
    Owner owner;  // Eve or Adam
    std::vector<NodeId> children;
  };
  std::vector<Node> nodes;
  NodeId root = 0;

  bool is_leaf(NodeId n) const { return nodes[n].children.empty(); }
};

/// Zielonka DAG: the tree with equal labels merged. Since the subtree under a
/// label is determined by the label, merging is well defined.
struct ZielonkaDag {
  struct Node {
    ColourSet label;
    Owner owner;
    std::vector<NodeId> children;
  };
  std::vector<Node> nodes;
  NodeId root = 0;

  bool is_leaf(NodeId n) const { return nodes[n].children.empty(); }
};

/// A cropped DAG of a Zielonka DAG: Eve nodes keep all their children, each
/// Adam node keeps exactly one, and the root is the DAG root when it is
/// Eve's, otherwise one of its children. Nodes are identified with the nodes
/// of the source DAG they come from.
struct CroppedDag {
  const ZielonkaDag* source = nullptr;
  NodeId root = 0;
  std::vector<bool> in_dag;          // per source node: reachable in the cropping
  std::vector<std::int32_t> choice;  // per source Adam node: kept child, -1 if none/leaf

  std::vector<NodeId> children(NodeId n) const;
  bool is_leaf(NodeId n) const { return children(n).empty(); }
  const ZielonkaDag::Node& node(NodeId n) const { return source->nodes[n]; }
};

/// A root-to-leaf path of a cropped DAG.
using Branch = std::vector<NodeId>;

ZielonkaTree build_zielonka_tree(const MullerCondition& condition);
ZielonkaDag build_zielonka_dag(const ZielonkaTree& tree);

/// Pure-strategy memory bound: 1 on leaves, max over children at Adam
/// nodes, sum over children at Eve nodes.
int memory_number_m(const ZielonkaTree& tree);

/// As memory_number_m, but 1 at any node whose restricted condition is
/// upward-closed.
int memory_number_mU(const ZielonkaTree& tree, const MullerCondition& condition);

/// Randomised-strategy memory bound: 1 on leaves; at Adam nodes the max over
/// children; at Eve nodes the sum over non-leaf children, plus one if at
/// least one child is a leaf.
int memory_number_r(const ZielonkaTree& tree);

/// True iff every Eve node has one child or only leaf children; equivalent
/// to memory_number_r(tree) == 1.
bool admits_memoryless_randomised(const ZielonkaTree& tree);

/// All cropped DAGs of a Zielonka DAG in a deterministic order. Child
/// choices are enumerated only at Adam nodes reachable from the chosen root.
/// A DAG whose root is an Adam leaf (the empty family) has none.
std::vector<CroppedDag> enumerate_cropped_dags(const ZielonkaDag& dag);
void enumerate_cropped_dags(const ZielonkaDag& dag,
                            const std::function<void(const CroppedDag&)>& yield);

/// The r-number of a cropped DAG, computed by the same recursion as
/// memory_number_r over the cropped children.
int cropped_number_r(const CroppedDag& cropped);

/// A cropped DAG maximizing cropped_number_r. Its r-number equals
/// memory_number_r of the tree the DAG was built from.
CroppedDag optimal_cropped_dag(const ZielonkaDag& dag, const ZielonkaTree& tree);

/// All root-to-leaf paths, in DFS order over canonically sorted children.
std::vector<Branch> branches(const CroppedDag& cropped);

/// Partition of branches(cropped) into the memory classes of the lower-bound
/// argument: two branches are equivalent iff they are equal after removing a
/// final Adam-owned leaf. The number of classes equals cropped_number_r.
std::vector<std::vector<std::size_t>> branch_classes(const CroppedDag& cropped);

}  // namespace muller
