#include "gwsearch/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <queue>
#include <utility>

#include "gwsearch/bdfs.hpp"

namespace gwsearch {

Policy parse_policy(std::string_view text) {
  if (text == "lifo" || text == "LIFO") return Policy::Lifo;
  if (text == "fifo" || text == "FIFO") return Policy::Fifo;
  if (text == "random" || text == "RANDOM") return Policy::Random;
  throw DomainError("unknown policy '" + std::string(text) + "'");
}

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::Lifo: return "LIFO";
    case Policy::Fifo: return "FIFO";
    case Policy::Random: return "RANDOM";
  }
  return "?";
}

NodeId JobList::pop() {
  NodeId v = 0;
  switch (policy_) {
    case Policy::Lifo:
      v = entries_.back();
      entries_.pop_back();
      break;
    case Policy::Fifo:
      v = entries_.front();
      entries_.pop_front();
      break;
    case Policy::Random: {
      const auto i = rng_.next_u64() % entries_.size();
      std::swap(entries_[i], entries_.back());
      v = entries_.back();
      entries_.pop_back();
      break;
    }
  }
  return v;
}

namespace {

template <typename NextBudget>
SearchStats drive(const PreorderTree& tree, std::size_t initial_budget,
                  const RunOptions& options, NextBudget next_budget) {
  if (initial_budget < 1) throw DomainError("budget must be at least 1");
  SearchStats stats;
  JobList list(options.policy, options.policy_seed);
  list.push(0);
  const auto oracle = tree_oracle(tree);
  std::size_t budget = initial_budget;
  while (!list.empty()) {
    const NodeId start = list.pop();
    if (stats.calls > 0) budget = next_budget(budget, list.size());
    if (options.record_series) {
      stats.list_sizes.push_back(list.size());
      stats.budgets.push_back(budget);
      stats.starts.push_back(start);
    }
    ++stats.calls;
    bdfs_visit(oracle, start, tree.max_degree(), budget,
               [&](NodeId v, bool unexplored) {
                 ++stats.evaluations;
                 if (unexplored) {
                   ++stats.restarts;
                   list.push(v);
                 }
               });
  }
  return stats;
}

}  // namespace

SearchStats run_single(const PreorderTree& tree, std::size_t budget,
                       const RunOptions& options) {
  return drive(tree, budget, options,
               [](std::size_t b, std::size_t) { return b; });
}

SearchStats run_adaptive(const PreorderTree& tree, const AdaptiveBudget& rule,
                         const RunOptions& options) {
  if (!(rule.scale_factor > 1.0)) {
    throw DomainError("scale factor must exceed 1");
  }
  if (rule.low_mark >= rule.high_mark) {
    throw DomainError("low mark must be below high mark");
  }
  return drive(tree, rule.initial, options,
               [&rule](std::size_t b, std::size_t list_size) {
                 if (list_size < rule.low_mark) {
                   const auto scaled = static_cast<std::size_t>(
                       std::floor(static_cast<double>(b) / rule.scale_factor));
                   return std::max<std::size_t>(2, scaled);
                 }
                 if (list_size > rule.high_mark) {
                   return static_cast<std::size_t>(
                       std::floor(static_cast<double>(b) * rule.scale_factor));
                 }
                 return b;
               });
}

std::vector<TraceRow> series_export(const SearchStats& stats) {
  std::vector<TraceRow> rows;
  rows.reserve(stats.list_sizes.size());
  for (std::size_t i = 0; i < stats.list_sizes.size(); ++i) {
    rows.push_back({i + 1, stats.list_sizes[i], stats.budgets[i]});
  }
  return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "call,list_size,budget\n";
  for (const auto& row : rows) {
    out << row.call << ',' << row.list_size << ',' << row.budget << '\n';
  }
}

SimReport simulate_parallel(const PreorderTree& tree, std::size_t budget,
                            unsigned workers, std::uint64_t restart_cost,
                            Policy policy) {
  if (workers < 1) throw DomainError("need at least one worker");
  if (budget < 1) throw DomainError("budget must be at least 1");

  struct Running {
    std::uint64_t finish = 0;
    std::vector<NodeId> returned;
  };

  SimReport report;
  JobList list(policy);
  list.push(0);
  const auto oracle = tree_oracle(tree);
  std::vector<Running> running(workers);
  std::vector<bool> busy(workers, false);
  using Event = std::pair<std::uint64_t, unsigned>;  // (finish time, worker)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::uint64_t now = 0;
  std::uint64_t busy_time = 0;

  for (;;) {
    for (unsigned w = 0; w < workers && !list.empty(); ++w) {
      if (busy[w]) continue;
      const NodeId start = list.pop();
      auto& job = running[w];
      job.returned.clear();
      std::uint64_t generated = 0;
      bdfs_visit(oracle, start, tree.max_degree(), budget,
                 [&](NodeId v, bool unexplored) {
                   ++generated;
                   if (unexplored) job.returned.push_back(v);
                 });
      const std::uint64_t duration = restart_cost + generated;
      job.finish = now + duration;
      busy[w] = true;
      busy_time += duration;
      ++report.jobs;
      report.evaluations += generated;
      report.restarts += job.returned.size();
      report.job_starts.push_back(start);
      events.emplace(job.finish, w);
    }
    if (events.empty()) break;
    now = events.top().first;
    // priority_queue on (time, worker) pops simultaneous finishes in
    // ascending worker order.
    while (!events.empty() && events.top().first == now) {
      const unsigned w = events.top().second;
      events.pop();
      for (NodeId v : running[w].returned) list.push(v);
      busy[w] = false;
    }
  }

  report.makespan = now;
  report.restart_overhead = restart_cost * report.jobs;
  report.idle_time = workers * report.makespan - busy_time;
  report.speedup = report.makespan == 0
                       ? 1.0
                       : static_cast<double>(tree.size() - 1) /
                             static_cast<double>(report.makespan);
  return report;
}

}  // namespace gwsearch
