#include "doctest.h"

#include <sstream>

#include "gwsearch/acceptance.hpp"
#include "gwsearch/scheduler.hpp"

using namespace gwsearch;

TEST_CASE("job list policies") {
  JobList lifo(Policy::Lifo);
  JobList fifo(Policy::Fifo);
  for (NodeId v : {3u, 5u, 9u}) {
    lifo.push(v);
    fifo.push(v);
  }
  CHECK(lifo.pop() == 9);
  CHECK(fifo.pop() == 3);
  CHECK(lifo.size() == 2);

  JobList rnd(Policy::Random, 4);
  std::vector<NodeId> got;
  for (NodeId v = 0; v < 20; ++v) rnd.push(v);
  while (!rnd.empty()) got.push_back(rnd.pop());
  std::sort(got.begin(), got.end());
  for (NodeId v = 0; v < 20; ++v) CHECK(got[v] == v);

  CHECK(parse_policy("fifo") == Policy::Fifo);
  CHECK(parse_policy("LIFO") == Policy::Lifo);
  CHECK_THROWS_AS(parse_policy("stack"), DomainError);
}

TEST_CASE("run_single on the figure-1 tree") {
  const auto tree = figure1_tree();

  const auto s13 = run_single(tree, 13);
  CHECK(s13.restarts == 5);
  CHECK(s13.calls == 6);
  CHECK(s13.evaluations == 24);
  CHECK(s13.list_sizes == std::vector<std::size_t>{0, 4, 3, 2, 1, 0});
  CHECK(s13.starts == std::vector<NodeId>{0, 22, 18, 16, 15, 13});

  const auto s8 = run_single(tree, 8);
  CHECK(s8.restarts == 8);
  CHECK(s8.calls == 9);

  const auto s1 = run_single(tree, 1);
  CHECK(s1.restarts == 24);
  CHECK(s1.evaluations == 24);

  for (std::size_t b : {25, 100}) {
    const auto s = run_single(tree, b);
    CHECK(s.restarts == 0);
    CHECK(s.calls == 1);
    CHECK(s.list_sizes == std::vector<std::size_t>{0});
  }
  CHECK_THROWS_AS(run_single(tree, 0), DomainError);
}

TEST_CASE("series export and CSV") {
  const auto tree = figure1_tree();
  const auto rows = series_export(run_single(tree, 13));
  REQUIRE(rows.size() == 6);
  CHECK(rows.back().list_size == 0);
  std::ostringstream csv;
  write_trace_csv(csv, rows);
  CHECK(csv.str() ==
        "call,list_size,budget\n1,0,13\n2,4,13\n3,3,13\n4,2,13\n5,1,13\n6,0,13\n");

  const auto one = series_export(run_single(tree, 30));
  REQUIRE(one.size() == 1);
  CHECK(one[0].list_size == 0);

  RunOptions quiet;
  quiet.record_series = false;
  const auto s = run_single(tree, 13, quiet);
  CHECK(s.restarts == 5);
  CHECK(series_export(s).empty());
}

TEST_CASE("restart totals are independent of policy and worker count") {
  Rng rng(77);
  for (const char* spec : {"catalan", "paper:10", "ternary_uniform", "geometric"}) {
    const auto dist = parse_distribution(spec);
    for (int rep = 0; rep < 5; ++rep) {
      const auto tree =
          sample_exact(dist, 100 + rng.next_u64() % 4000, rng.next_u64(), 1000000).tree;
      for (std::size_t b : {std::size_t{1}, std::size_t{3}, std::size_t{40},
                            std::size_t{500}, tree.size() + 1}) {
        const auto lifo = run_single(tree, b);
        const auto fifo = run_single(tree, b, {Policy::Fifo, 0, true});
        const auto rnd = run_single(tree, b, {Policy::Random, rng.next_u64(), true});
        CHECK(lifo.evaluations == tree.size() - 1);
        CHECK(fifo.evaluations == tree.size() - 1);
        CHECK(lifo.restarts == fifo.restarts);
        CHECK(lifo.restarts == rnd.restarts);
        CHECK(lifo.list_sizes.front() == 0);
        CHECK(lifo.list_sizes.back() == 0);
        for (unsigned w : {1u, 3u, 16u}) {
          const auto sim = simulate_parallel(tree, b, w, 2);
          CHECK(sim.restarts == lifo.restarts);
          CHECK(sim.evaluations == tree.size() - 1);
          CHECK(sim.jobs == lifo.calls);
        }
      }
      CHECK(run_single(tree, 1).restarts == tree.size() - 1);
      CHECK(run_single(tree, tree.size() + 1).restarts == 0);
    }
  }
}

TEST_CASE("adaptive budget") {
  const auto tree = figure1_tree();

  AdaptiveBudget never;
  never.initial = 13;
  const auto a = run_adaptive(tree, never);
  const auto s = run_single(tree, 13);
  CHECK(a.restarts == s.restarts);
  CHECK(a.list_sizes == s.list_sizes);
  CHECK(a.budgets == s.budgets);

  AdaptiveBudget drop{25, 1, std::numeric_limits<std::size_t>::max(), 5.0};
  const auto one_call = run_adaptive(tree, drop);
  CHECK(one_call.budgets == std::vector<std::size_t>{25});

  // List at 0 before call 2 drops b=8 to max(2, floor(8/5)) = 2.
  AdaptiveBudget low{8, 100, 1000, 5.0};
  const auto shrink = run_adaptive(tree, low);
  REQUIRE(shrink.budgets.size() >= 2);
  CHECK(shrink.budgets[0] == 8);
  CHECK(shrink.budgets[1] == 2);
  CHECK(std::all_of(shrink.budgets.begin() + 1, shrink.budgets.end(),
                    [](std::size_t b) { return b == 2; }));
  CHECK(shrink.evaluations == 24);

  // Always above the high mark: budget never decreases.
  Rng rng(5);
  const auto big = sample_exact(make_builtin("catalan"), 3001, 9, 1000000).tree;
  AdaptiveBudget grow{1, 0, 0, 2.0};
  grow.high_mark = 1;  // low_mark 0 < high_mark 1
  const auto g = run_adaptive(big, grow);
  for (std::size_t i = 1; i < g.budgets.size(); ++i) {
    if (g.list_sizes[i] > 1) CHECK(g.budgets[i] > g.budgets[i - 1]);
    if (g.list_sizes[i] <= 1) CHECK(g.budgets[i] == g.budgets[i - 1]);
  }
  CHECK(g.evaluations == big.size() - 1);

  CHECK_THROWS_AS(run_adaptive(tree, {8, 5, 5, 2.0}), DomainError);
  CHECK_THROWS_AS(run_adaptive(tree, {8, 0, 5, 1.0}), DomainError);
}

TEST_CASE("simulation on the figure-1 tree") {
  const auto tree = figure1_tree();
  for (std::size_t b : {1, 8, 13, 25, 1000}) {
    const auto r = simulate_parallel(tree, b, 1, 0);
    CHECK(r.makespan == 24);
    CHECK(r.idle_time == 0);
    CHECK(r.speedup == 1.0);
  }
  const auto r2 = simulate_parallel(tree, 13, 1, 2);
  CHECK(r2.makespan == 36);
  CHECK(r2.restart_overhead == 12);
  CHECK(r2.jobs == 6);

  for (std::uint64_t r : {0u, 3u}) {
    const auto two = simulate_parallel(tree, 100, 2, r);
    CHECK(two.jobs == 1);
    CHECK(two.makespan == 24 + r);
    CHECK(two.idle_time == two.makespan);
  }

  // b = 13, W = 2, r = 0: the root job runs [0, 17) and returns
  // 13, 15, 16, 18, 22, whose jobs evaluate 1, 0, 1, 3, 2 nodes. Worker 0
  // runs 22 then 16 then 15, worker 1 runs 18 then 13, ending at 21.
  const auto par = simulate_parallel(tree, 13, 2, 0);
  CHECK(par.jobs == 6);
  CHECK(par.evaluations == 24);
  CHECK(par.makespan == 17 + 4);
  CHECK(par.idle_time == 2 * par.makespan - 24);

  CHECK_THROWS_AS(simulate_parallel(tree, 13, 0, 0), DomainError);
}

TEST_CASE("W = 1 simulation replays the single-worker call sequence") {
  Rng rng(8);
  const auto dist = make_builtin("paper", 3u);
  for (int rep = 0; rep < 10; ++rep) {
    const auto tree = sample_exact(dist, 50 + rng.next_u64() % 3000, rng.next_u64(), 1000000).tree;
    const std::size_t b = 1 + rng.next_u64() % 100;
    for (Policy p : {Policy::Lifo, Policy::Fifo}) {
      const auto sim = simulate_parallel(tree, b, 1, 0, p);
      const auto run = run_single(tree, b, {p, 0, true});
      CHECK(sim.job_starts == run.starts);
      CHECK(sim.idle_time == 0);
      CHECK(sim.makespan == tree.size() - 1);
    }
    const unsigned w = 2 + rng.next_u64() % 30;
    const std::uint64_t r = rng.next_u64() % 10;
    const auto par = simulate_parallel(tree, b, w, r);
    CHECK(par.makespan * w >= tree.size() - 1 + r * par.jobs);
    CHECK(par.restart_overhead == r * par.jobs);
  }
}
