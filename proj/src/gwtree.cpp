#include "gwsearch/gwtree.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gwsearch {

bool is_lukasiewicz(std::span<const std::uint32_t> degrees) {
  if (degrees.empty()) return false;
  std::int64_t pending = 1;
  for (std::size_t t = 0; t < degrees.size(); ++t) {
    if (pending <= 0) return false;
    pending += static_cast<std::int64_t>(degrees[t]) - 1;
  }
  return pending == 0;
}

PreorderTree::PreorderTree(std::vector<std::uint32_t> degrees,
                           std::optional<unsigned> max_degree)
    : degrees_(std::move(degrees)) {
  if (degrees_.size() > std::numeric_limits<NodeId>::max()) {
    throw InvariantViolation("tree too large for 32-bit node ids");
  }
  if (!is_lukasiewicz(degrees_)) {
    throw InvariantViolation(
        "degree sequence is not a preorder encoding of a tree");
  }
  const unsigned largest =
      *std::max_element(degrees_.begin(), degrees_.end());
  max_degree_ = std::max(largest, max_degree.value_or(0));

  // Reverse preorder pass: every node's children are finished before it,
  // and they sit on top of the stack.
  extent_.resize(degrees_.size());
  std::vector<std::uint32_t> stack;
  for (std::size_t v = degrees_.size(); v-- > 0;) {
    std::uint32_t size = 1;
    for (std::uint32_t k = 0; k < degrees_[v]; ++k) {
      size += stack.back();
      stack.pop_back();
    }
    stack.push_back(size);
    extent_[v] = size;
  }
}

std::uint32_t PreorderTree::degree(NodeId v) const {
  if (v >= degrees_.size()) throw std::out_of_range("node id out of range");
  return degrees_[v];
}

std::size_t PreorderTree::subtree_size(NodeId v) const {
  if (v >= extent_.size()) throw std::out_of_range("node id out of range");
  return extent_[v];
}

std::optional<NodeId> PreorderTree::adj(NodeId v, unsigned j) const {
  if (v >= degrees_.size()) throw std::out_of_range("node id out of range");
  if (j < 1 || j > max_degree_) {
    throw std::out_of_range("child index out of range");
  }
  if (j > degrees_[v]) return std::nullopt;
  NodeId child = v + 1;
  for (unsigned k = 1; k < j; ++k) child += extent_[child];
  return child;
}

QPath q_path(const PreorderTree& tree) {
  const auto degrees = tree.degrees();
  QPath path;
  path.values.resize(degrees.size() + 1);
  path.values[0] = 1;
  for (std::size_t t = 0; t < degrees.size(); ++t) {
    path.values[t + 1] =
        path.values[t] + static_cast<std::int64_t>(degrees[t]) - 1;
  }
  for (std::size_t t = 0; t < degrees.size(); ++t) {
    if (path.values[t] <= 0) {
      throw InvariantViolation("Q path hits zero before the last node");
    }
  }
  if (path.values.back() != 0) {
    throw InvariantViolation("Q path does not end at zero");
  }
  return path;
}

UnconditionalSample sample_unconditional(const OffspringDistribution& dist,
                                         Rng& rng, std::size_t cap) {
  if (cap < 1) throw DomainError("node cap must be at least 1");
  std::vector<std::uint32_t> degrees;
  std::int64_t pending = 1;
  while (pending > 0) {
    if (degrees.size() == cap) return Overflow{cap};
    const unsigned k = dist.sample(rng);
    degrees.push_back(k);
    pending += static_cast<std::int64_t>(k) - 1;
  }
  return PreorderTree(std::move(degrees), dist.max_degree());
}

UnconditionalSample sample_unconditional(const OffspringDistribution& dist,
                                         std::uint64_t seed, std::size_t cap) {
  Rng rng(seed);
  return sample_unconditional(dist, rng, cap);
}

std::size_t sample_size_capped(const OffspringDistribution& dist, Rng& rng,
                               std::size_t cap) {
  std::int64_t pending = 1;
  std::size_t nodes = 0;
  while (pending > 0 && nodes < cap) {
    pending += static_cast<std::int64_t>(dist.sample(rng)) - 1;
    ++nodes;
  }
  return nodes;
}

SampledTree sample_at_least(const OffspringDistribution& dist,
                            std::size_t n_min, std::uint64_t seed,
                            std::uint64_t max_attempts,
                            std::optional<std::size_t> cap) {
  if (n_min < 1) throw DomainError("n_min must be at least 1");
  const std::size_t limit = cap.value_or(100 * n_min);
  if (limit < n_min) throw DomainError("node cap is below n_min");
  Rng rng(seed);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    auto sample = sample_unconditional(dist, rng, limit);
    if (auto* tree = std::get_if<PreorderTree>(&sample)) {
      if (tree->size() >= n_min) return {std::move(*tree), attempt};
    }
  }
  throw SamplingFailed("no tree with at least " + std::to_string(n_min) +
                           " nodes after " + std::to_string(max_attempts) +
                           " attempts",
                       max_attempts);
}

std::size_t cycle_lemma_offset(std::span<const std::uint32_t> counts) {
  std::int64_t walk = 0;
  std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
  std::size_t first_low = 0;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    walk += static_cast<std::int64_t>(counts[t]) - 1;
    if (walk < lowest) {
      lowest = walk;
      first_low = t + 1;
    }
  }
  if (walk != -1) {
    throw DomainError("cycle lemma needs counts summing to size - 1");
  }
  return first_low % counts.size();
}

SampledTree sample_exact(const OffspringDistribution& dist, std::size_t n,
                         std::uint64_t seed, std::uint64_t max_attempts) {
  if (n < 1) throw DomainError("tree size must be at least 1");
  if (n % dist.span() != 1 % dist.span()) {
    throw DomainError("size " + std::to_string(n) + " is not 1 mod span " +
                      std::to_string(dist.span()));
  }
  const std::uint64_t target = n - 1;
  Rng rng(seed);
  std::vector<std::uint32_t> counts(n);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    std::uint64_t sum = 0;
    std::size_t i = 0;
    for (; i < n && sum <= target; ++i) {
      counts[i] = dist.sample(rng);
      sum += counts[i];
    }
    if (i < n || sum != target) continue;
    const std::size_t offset = cycle_lemma_offset(counts);
    std::vector<std::uint32_t> degrees(n);
    std::rotate_copy(counts.begin(), counts.begin() + offset, counts.end(),
                     degrees.begin());
    return {PreorderTree(std::move(degrees), dist.max_degree()), attempt};
  }
  throw SamplingFailed("no size-" + std::to_string(n) + " tree after " +
                           std::to_string(max_attempts) + " attempts",
                       max_attempts);
}

PreorderTree read_tree(std::istream& in) {
  std::size_t n = 0;
  if (!(in >> n) || n == 0) throw DomainError("tree file: bad node count");
  std::vector<std::uint32_t> degrees(n);
  for (auto& d : degrees) {
    if (!(in >> d)) throw DomainError("tree file: expected " +
                                      std::to_string(n) + " degrees");
  }
  in >> std::ws;
  if (!in.eof()) throw DomainError("tree file: trailing data after degrees");
  return PreorderTree(std::move(degrees));
}

void write_tree(std::ostream& out, const PreorderTree& tree) {
  out << tree.size() << '\n';
  const auto degrees = tree.degrees();
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (i) out << ' ';
    out << degrees[i];
  }
  out << '\n';
}

}  // namespace gwsearch
