#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gwsearch/offspring.hpp"
#include "gwsearch/rng.hpp"

namespace gwsearch {

using NodeId = std::uint32_t;

/// A degree sequence that is not the preorder encoding of a finite tree.
class InvariantViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A sampler gave up. Carries how many attempts were spent.
class SamplingFailed : public DomainError {
 public:
  SamplingFailed(const std::string& what, std::uint64_t attempts)
      : DomainError(what), attempts_(attempts) {}
  std::uint64_t attempts() const noexcept { return attempts_; }

 private:
  std::uint64_t attempts_;
};

/// Ordered rooted tree stored as its preorder child-count sequence.
///
/// Node ids are preorder ranks with the root at 0. Subtrees are contiguous
/// id ranges: the subtree of v is [v, v + subtree_size(v)).
class PreorderTree {
 public:
  /// Validates Σ degrees = n − 1 and Łukasiewicz positivity. max_degree
  /// defaults to the largest degree present; a larger value (the offspring
  /// law's Δ) may be supplied.
  explicit PreorderTree(std::vector<std::uint32_t> degrees,
                        std::optional<unsigned> max_degree = std::nullopt);

  std::size_t size() const noexcept { return degrees_.size(); }
  unsigned max_degree() const noexcept { return max_degree_; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::uint32_t degree(NodeId v) const;

  std::size_t subtree_size(NodeId v) const;

  /// Adjacency oracle: the j-th child (1-based) of v, or nullopt when v has
  /// fewer than j children. Requires v < n and 1 ≤ j ≤ max_degree().
  /// Costs O(j): child_{k+1} = child_k + subtree_size(child_k).
  std::optional<NodeId> adj(NodeId v, unsigned j) const;

 private:
  std::vector<std::uint32_t> degrees_;
  std::vector<std::uint32_t> extent_;
  unsigned max_degree_ = 0;
};

/// Q(t) = 1 + Σ_{i<t} (degree_i − 1), t = 0..n.
struct QPath {
  std::vector<std::int64_t> values;
};

/// Builds the Łukasiewicz path and re-checks Q(0) = 1, Q(t) > 0 for t < n,
/// and Q(n) = 0.
QPath q_path(const PreorderTree& tree);

/// The generation was stopped because the tree grew past the node cap.
struct Overflow {
  std::size_t nodes;  // nodes drawn before stopping (= cap)
};

using UnconditionalSample = std::variant<PreorderTree, Overflow>;

/// Draws child counts in preorder while tracking the pending count Q.
/// Returns the tree when Q reaches 0, or Overflow once more than `cap`
/// nodes would be needed.
UnconditionalSample sample_unconditional(const OffspringDistribution& dist,
                                         Rng& rng, std::size_t cap);
UnconditionalSample sample_unconditional(const OffspringDistribution& dist,
                                         std::uint64_t seed, std::size_t cap);

/// min(N, cap) for an unconditional tree, without storing it.
std::size_t sample_size_capped(const OffspringDistribution& dist, Rng& rng,
                               std::size_t cap);

struct SampledTree {
  PreorderTree tree;
  std::uint64_t attempts;
};

/// Repeats unconditional sampling until a tree with at least n_min nodes
/// appears. Each attempt is capped at `cap` nodes (default 100·n_min);
/// attempts that overflow the cap are discarded.
SampledTree sample_at_least(const OffspringDistribution& dist,
                            std::size_t n_min, std::uint64_t seed,
                            std::uint64_t max_attempts,
                            std::optional<std::size_t> cap = std::nullopt);

/// Exact-size conditioned tree: draw n i.i.d. child counts until they sum
/// to n − 1, then rotate into the unique cyclic shift whose prefix sums of
/// (ξ − 1) stay ≥ 0 before the end. Requires n ≡ 1 mod span.
SampledTree sample_exact(const OffspringDistribution& dist, std::size_t n,
                         std::uint64_t seed, std::uint64_t max_attempts);

/// Cycle lemma. Given counts with Σ = size − 1, returns the offset r such
/// that counts[r], counts[r+1], ... (cyclically) is a valid preorder degree
/// sequence.
std::size_t cycle_lemma_offset(std::span<const std::uint32_t> counts);

/// True when the degree sequence encodes a finite tree with exactly
/// degrees.size() nodes.
bool is_lukasiewicz(std::span<const std::uint32_t> degrees);

/// Tree file: line 1 `n`, line 2 the space-separated preorder degrees.
PreorderTree read_tree(std::istream& in);
void write_tree(std::ostream& out, const PreorderTree& tree);

}  // namespace gwsearch
