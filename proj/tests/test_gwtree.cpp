#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gwsearch/acceptance.hpp"
#include "gwsearch/analysis.hpp"
#include "gwsearch/gwtree.hpp"

using namespace gwsearch;

namespace {

PreorderTree fixture() {
  std::ifstream in(GWSEARCH_TEST_DATA "/figure1.tree");
  REQUIRE(in);
  return read_tree(in);
}

std::size_t size_of(const UnconditionalSample& s) {
  return std::get<PreorderTree>(s).size();
}

}  // namespace

TEST_CASE("figure-1 fixture file") {
  const auto tree = fixture();
  CHECK(tree.size() == 25);
  CHECK(tree.max_degree() == 6);
  CHECK(std::equal(tree.degrees().begin(), tree.degrees().end(),
                   figure1_degrees().begin(), figure1_degrees().end()));
}

TEST_CASE("q_path") {
  CHECK(q_path(PreorderTree({0})).values == std::vector<std::int64_t>{1, 0});
  CHECK(q_path(PreorderTree({2, 0, 0})).values ==
        std::vector<std::int64_t>{1, 2, 1, 0});
  const auto q = q_path(fixture());
  REQUIRE(q.values.size() == 26);
  CHECK(q.values[25] == 0);
  CHECK(*std::min_element(q.values.begin(), q.values.end() - 1) >= 1);
}

TEST_CASE("corrupt degree sequences are rejected") {
  CHECK_THROWS_AS(PreorderTree({}), InvariantViolation);
  CHECK_THROWS_AS(PreorderTree({1}), InvariantViolation);
  CHECK_THROWS_AS(PreorderTree({0, 0}), InvariantViolation);
  CHECK_THROWS_AS(PreorderTree({2, 0}), InvariantViolation);
  CHECK_THROWS_AS(PreorderTree({0, 2, 0, 0}), InvariantViolation);
}

TEST_CASE("adjacency oracle on the figure-1 tree") {
  const auto tree = fixture();
  CHECK(tree.adj(0, 1) == 1u);
  CHECK(tree.adj(0, 2) == 7u);
  CHECK(tree.adj(0, 3) == 18u);
  CHECK(tree.adj(0, 4) == 22u);
  CHECK(tree.adj(0, 5) == std::nullopt);
  CHECK(tree.adj(11, 1) == 12u);
  CHECK(tree.adj(11, 2) == 13u);
  CHECK(tree.adj(11, 3) == std::nullopt);
  CHECK(tree.adj(7, 6) == 16u);
  for (NodeId leaf : {2u, 14u, 24u}) CHECK(tree.adj(leaf, 1) == std::nullopt);
  CHECK_THROWS_AS(tree.adj(25, 1), std::out_of_range);
  CHECK_THROWS_AS(tree.adj(0, 0), std::out_of_range);
  CHECK_THROWS_AS(tree.adj(0, 7), std::out_of_range);

  // Each node other than the root is returned for exactly one (v, j).
  std::vector<int> hits(tree.size(), 0);
  for (NodeId v = 0; v < tree.size(); ++v) {
    for (unsigned j = 1; j <= tree.max_degree(); ++j) {
      if (auto c = tree.adj(v, j)) ++hits[*c];
    }
  }
  CHECK(hits[0] == 0);
  CHECK(std::all_of(hits.begin() + 1, hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("subtree sizes") {
  const auto tree = fixture();
  CHECK(tree.subtree_size(0) == 25);
  CHECK(tree.subtree_size(11) == 4);
  CHECK(tree.subtree_size(7) == 11);
  CHECK(tree.subtree_size(24) == 1);
  CHECK_THROWS_AS(tree.subtree_size(25), std::out_of_range);
  // Children's extents partition extent[v] - 1.
  for (NodeId v = 0; v < tree.size(); ++v) {
    std::size_t total = 1;
    for (unsigned j = 1; j <= tree.degree(v); ++j) {
      total += tree.subtree_size(*tree.adj(v, j));
    }
    CHECK(total == tree.subtree_size(v));
  }
}

TEST_CASE("unconditional sampling") {
  const auto leaf_only = make_custom({1.0});
  CHECK(std::get<PreorderTree>(sample_unconditional(leaf_only, 3u, 10)).degrees()[0] == 0);

  const auto fb = make_builtin("full_binary");
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto s = sample_unconditional(fb, rng, 100000);
    if (auto* t = std::get_if<PreorderTree>(&s)) CHECK(t->size() % 2 == 1);
  }

  // Deterministic given the seed.
  const auto cat = make_builtin("catalan");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto a = sample_unconditional(cat, seed, 1000000);
    auto b = sample_unconditional(cat, seed, 1000000);
    REQUIRE(a.index() == b.index());
    if (a.index() == 0) {
      const auto& ta = std::get<PreorderTree>(a);
      const auto& tb = std::get<PreorderTree>(b);
      CHECK(std::equal(ta.degrees().begin(), ta.degrees().end(),
                       tb.degrees().begin(), tb.degrees().end()));
    }
  }

  // Overflow reports the cap.
  bool saw_overflow = false;
  for (std::uint64_t seed = 0; seed < 200 && !saw_overflow; ++seed) {
    auto s = sample_unconditional(cat, seed, 5);
    if (auto* o = std::get_if<Overflow>(&s)) {
      CHECK(o->nodes == 5);
      saw_overflow = true;
    } else {
      CHECK(std::get<PreorderTree>(s).size() <= 5);
    }
  }
  CHECK(saw_overflow);
  CHECK_THROWS_AS(sample_unconditional(cat, 1u, 0), DomainError);
}

TEST_CASE("catalan: P{N = 1} = p0") {
  const auto cat = make_builtin("catalan");
  Rng rng(2024);
  constexpr int kSamples = 1000000;
  int leaves = 0;
  for (int i = 0; i < kSamples; ++i) {
    if (sample_size_capped(cat, rng, 2) == 1) ++leaves;
  }
  const double se = std::sqrt(0.25 * 0.75 / kSamples);
  CHECK(std::fabs(leaves / double(kSamples) - 0.25) <= 3 * se);
}

TEST_CASE("empirical size law matches the exact DP for t <= 9") {
  for (const char* spec : {"catalan", "paper:3", "full_binary"}) {
    const auto dist = parse_distribution(spec);
    const auto law = size_pmf_exact(dist, 9);
    Rng rng(99);
    constexpr int kSamples = 1000000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < kSamples; ++i) {
      auto s = sample_unconditional(dist, rng, 9);
      if (auto* t = std::get_if<PreorderTree>(&s)) ++counts[t->size()];
    }
    for (std::size_t t = 1; t <= 9; ++t) {
      const double p = law.pmf[t];
      const double se = std::sqrt(p * (1 - p) / kSamples);
      const double freq = counts[t] / double(kSamples);
      INFO(spec << " t=" << t << " freq=" << freq << " p=" << p);
      if (p == 0.0) {
        CHECK(counts[t] == 0);
      } else {
        CHECK(std::fabs(freq - p) <= 4 * se);
      }
    }
  }
}

TEST_CASE("sample_at_least") {
  const auto cat = make_builtin("catalan");
  const auto first = sample_at_least(cat, 1, 5, 10, 10000000);
  CHECK(first.attempts == 1);

  // Find a seed whose first tree is small, then ask for >= 10 with one attempt.
  std::uint64_t seed = 0;
  for (;; ++seed) {
    auto s = sample_unconditional(cat, seed, 1000);
    if (auto* t = std::get_if<PreorderTree>(&s); t && t->size() < 10) break;
  }
  try {
    sample_at_least(cat, 10, seed, 1);
    FAIL("expected SamplingFailed");
  } catch (const SamplingFailed& e) {
    CHECK(e.attempts() == 1);
  }

  const auto big = sample_at_least(cat, 5000, 17, 1000000);
  CHECK(big.tree.size() >= 5000);
  CHECK(big.tree.size() <= 500000);
  CHECK_THROWS_AS(sample_at_least(cat, 0, 1, 1), DomainError);
}

TEST_CASE("sample_at_least attempt count follows 1 / P{N >= n_min}") {
  const auto dist = make_builtin("paper", 10u);
  constexpr std::size_t kMin = 1000;
  constexpr std::size_t kCap = 10000000;
  const auto law = size_pmf_exact(dist, kMin - 1);
  const double p_success = law.tail - tail_asymptotic(dist, kCap);
  const double expected = 1.0 / p_success;
  // Asymptotic form √(π n σ² / 2) is within a few percent already here.
  CHECK(std::fabs(expected / std::sqrt(M_PI * kMin * dist.variance() / 2) - 1) < 0.1);

  constexpr int kRuns = 300;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < kRuns; ++i) {
    const auto a = static_cast<double>(
        sample_at_least(dist, kMin, 1000 + i, 1000000, kCap).attempts);
    sum += a;
    sumsq += a * a;
  }
  const double mean = sum / kRuns;
  const double sd = std::sqrt((sumsq - kRuns * mean * mean) / (kRuns - 1));
  INFO("mean attempts " << mean << " expected " << expected);
  CHECK(std::fabs(mean - expected) <= 4 * sd / std::sqrt(double(kRuns)));
}

TEST_CASE("sample_exact basics") {
  for (const char* spec : {"catalan", "paper:10", "full_binary"}) {
    const auto t = sample_exact(parse_distribution(spec), 1, 3, 10);
    CHECK(t.tree.size() == 1);
  }
  const auto fb = make_builtin("full_binary");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = sample_exact(fb, 3, seed, 1000);
    CHECK(std::vector<std::uint32_t>(t.tree.degrees().begin(), t.tree.degrees().end()) ==
          std::vector<std::uint32_t>{2, 0, 0});
  }
  CHECK_THROWS_AS(sample_exact(fb, 4, 1, 1000), DomainError);
  CHECK_THROWS_AS(sample_exact(make_custom({1.0}), 3, 1, 5), SamplingFailed);

  const auto p10 = make_builtin("paper", 10u);
  for (std::size_t n : {2u, 17u, 1000u, 20001u}) {
    CHECK(sample_exact(p10, n, n, 1000000).tree.size() == n);
  }
}

TEST_CASE("sample_exact on catalan n = 5 matches the conditioned law") {
  const auto cat = make_builtin("catalan");
  const auto shapes = enumerate_trees({true, true, true}, 5);
  REQUIRE(shapes.size() == 9);
  std::map<std::vector<std::uint32_t>, double> target;
  double total = 0.0;
  for (const auto& s : shapes) {
    double w = 1.0;
    for (auto d : s) w *= cat.p(d);
    target[s] = w;
    total += w;
  }
  // P{N = 5} = 21/512 for catalan.
  CHECK(total == doctest::Approx(21.0 / 512).epsilon(1e-14));

  constexpr int kSamples = 100000;
  std::map<std::vector<std::uint32_t>, int> counts;
  for (int i = 0; i < kSamples; ++i) {
    const auto t = sample_exact(cat, 5, 7000 + i, 100000).tree;
    ++counts[std::vector<std::uint32_t>(t.degrees().begin(), t.degrees().end())];
  }
  CHECK(counts.size() == 9);
  for (const auto& [shape, w] : target) {
    const double p = w / total;
    const double se = std::sqrt(p * (1 - p) / kSamples);
    CHECK(std::fabs(counts[shape] / double(kSamples) - p) <= 3 * se);
  }
}

TEST_CASE("cycle lemma: exactly one valid rotation") {
  Rng rng(4242);
  int checked = 0;
  for (const char* spec : {"catalan", "paper:3", "paper:10", "full_binary", "geometric"}) {
    const auto dist = parse_distribution(spec);
    for (int rep = 0; rep < 2000; ++rep) {
      const std::size_t n = 1 + rng.next_u64() % 50;
      std::vector<std::uint32_t> counts(n);
      std::uint64_t sum = 0;
      for (auto& c : counts) sum += (c = dist.sample(rng));
      if (sum != n - 1) continue;
      ++checked;
      std::vector<std::size_t> valid;
      std::vector<std::uint32_t> rotated(n);
      for (std::size_t r = 0; r < n; ++r) {
        std::rotate_copy(counts.begin(), counts.begin() + r, counts.end(), rotated.begin());
        if (is_lukasiewicz(rotated)) valid.push_back(r);
      }
      REQUIRE(valid.size() == 1);
      CHECK(valid[0] == cycle_lemma_offset(counts));
    }
  }
  CHECK(checked > 500);
  const std::vector<std::uint32_t> bad{1, 1};
  CHECK_THROWS_AS(cycle_lemma_offset(bad), DomainError);
}

TEST_CASE("tree file round trip and malformed input") {
  const auto tree = fixture();
  std::stringstream buf;
  write_tree(buf, tree);
  CHECK(buf.str().substr(0, 3) == "25\n");
  const auto back = read_tree(buf);
  CHECK(std::equal(back.degrees().begin(), back.degrees().end(),
                   tree.degrees().begin(), tree.degrees().end()));

  std::istringstream one("1\n0\n");
  CHECK(read_tree(one).size() == 1);
  for (const char* bad : {"", "0\n", "3\n2 0\n", "3\n2 0 0 0\n", "2\n1 0 x", "3\n0 2 0\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_tree(in), DomainError);
  }
}
