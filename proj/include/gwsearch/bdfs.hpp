#pragma once

#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gwsearch/gwtree.hpp"

namespace gwsearch {

/// Adj(v, j): the j-th child of v (1-based) or nullopt.
template <typename Oracle>
concept AdjacencyOracle = requires(const Oracle& adj, NodeId v, unsigned j) {
  { adj(v, j) } -> std::convertible_to<std::optional<NodeId>>;
};

struct SearchRecord {
  NodeId node;
  bool unexplored;

  friend bool operator==(const SearchRecord&, const SearchRecord&) = default;
};

struct BudgetedSearchOutput {
  std::vector<SearchRecord> records;
  std::size_t generated = 0;  // records.size()
  std::size_t explored = 0;   // records with unexplored == false
};

/// Budgeted depth-first search from `start`.
///
/// Nodes are generated in child order using two explicit stacks (vertices
/// and child indices). Every generated node is passed to `sink(node,
/// unexplored)`; the start vertex itself is never emitted. Once `budget`
/// nodes have been generated, the current node and every remaining sibling
/// met while backtracking to `start` are emitted with unexplored = true and
/// not descended into.
///
/// A null Adj(v, j) advances j without pushing, counting or emitting.
template <AdjacencyOracle Oracle, typename Sink>
void bdfs_visit(const Oracle& adj, NodeId start, unsigned max_degree,
                std::size_t budget, Sink&& sink) {
  if (budget < 1) throw DomainError("budget must be at least 1");
  std::vector<NodeId> stack_v;
  std::vector<unsigned> stack_j;
  unsigned j = 0;
  NodeId v = start;
  std::size_t count = 0;
  std::size_t depth = 0;
  do {
    bool unexplored = false;
    while (j < max_degree && !unexplored) {
      ++j;
      const std::optional<NodeId> child = adj(v, j);
      if (!child) continue;
      stack_v.push_back(v);
      stack_j.push_back(j);
      v = *child;
      ++depth;
      ++count;
      if (count >= budget) unexplored = true;  // budget is exhausted
      sink(v, unexplored);
      if (count < budget) j = 0;  // continue down the tree
    }
    if (depth > 0) {  // backtrack
      v = stack_v.back();
      stack_v.pop_back();
      j = stack_j.back();
      stack_j.pop_back();
      --depth;
    }
  } while (!(depth == 0 && j == max_degree));
}

template <AdjacencyOracle Oracle>
BudgetedSearchOutput bdfs(const Oracle& adj, NodeId start, unsigned max_degree,
                          std::size_t budget) {
  BudgetedSearchOutput out;
  bdfs_visit(adj, start, max_degree, budget, [&](NodeId v, bool unexplored) {
    out.records.push_back({v, unexplored});
    if (!unexplored) ++out.explored;
  });
  out.generated = out.records.size();
  return out;
}

/// Adjacency oracle backed by a PreorderTree.
inline auto tree_oracle(const PreorderTree& tree) {
  return [&tree](NodeId v, unsigned j) { return tree.adj(v, j); };
}

inline BudgetedSearchOutput bdfs(const PreorderTree& tree, NodeId start,
                                 std::size_t budget) {
  if (start >= tree.size()) throw std::out_of_range("start vertex out of range");
  return bdfs(tree_oracle(tree), start, tree.max_degree(), budget);
}

/// Unexplored node ids, in output order.
std::vector<NodeId> unexplored_of(const BudgetedSearchOutput& output);

/// Trace format: one `node_id flag` line per record, flag ∈ {0,1}.
void write_records(std::ostream& out, const BudgetedSearchOutput& output);

}  // namespace gwsearch
