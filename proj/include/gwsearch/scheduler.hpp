#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "gwsearch/gwtree.hpp"
#include "gwsearch/rng.hpp"

namespace gwsearch {

enum class Policy { Lifo, Fifo, Random };

Policy parse_policy(std::string_view text);
std::string_view to_string(Policy policy);

/// Master's list of pending subtree roots.
class JobList {
 public:
  explicit JobList(Policy policy = Policy::Lifo, std::uint64_t seed = 0)
      : policy_(policy), rng_(seed) {}

  void push(NodeId v) { entries_.push_back(v); }
  NodeId pop();
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  Policy policy() const noexcept { return policy_; }

 private:
  Policy policy_;
  Rng rng_;
  std::deque<NodeId> entries_;
};

struct RunOptions {
  Policy policy = Policy::Lifo;
  std::uint64_t policy_seed = 0;  // only used by Policy::Random
  /// Keep per-call series (list sizes, budgets, start vertices). Turn off
  /// for very large trees where only the totals matter.
  bool record_series = true;
};

struct SearchStats {
  std::uint64_t restarts = 0;     // R_n: unexplored records over the run
  std::uint64_t calls = 0;        // budgeted search invocations
  std::uint64_t evaluations = 0;  // nodes generated over the run
  /// Per call, in call order: job-list size right after popping the start
  /// vertex, the budget used, and the start vertex.
  std::vector<std::size_t> list_sizes;
  std::vector<std::size_t> budgets;
  std::vector<NodeId> starts;
};

/// One worker repeatedly pops a start vertex, runs the budgeted search and
/// pushes the returned unexplored nodes, until the job list is empty. The
/// root is seeded, not counted as a restart.
SearchStats run_single(const PreorderTree& tree, std::size_t budget,
                       const RunOptions& options = {});

struct AdaptiveBudget {
  std::size_t initial = 0;
  std::size_t low_mark = 0;
  std::size_t high_mark = std::numeric_limits<std::size_t>::max();
  double scale_factor = 10.0;
};

/// Like run_single, but between calls the budget is divided by
/// scale_factor (floor, at least 2) when the list holds fewer than
/// low_mark jobs and multiplied by it when it holds more than high_mark.
/// The first call always uses the initial budget.
SearchStats run_adaptive(const PreorderTree& tree, const AdaptiveBudget& rule,
                         const RunOptions& options = {});

struct TraceRow {
  std::size_t call;  // 1-based
  std::size_t list_size;
  std::size_t budget;
};

std::vector<TraceRow> series_export(const SearchStats& stats);

/// CSV with header `call,list_size,budget`.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

struct SimReport {
  std::uint64_t makespan = 0;
  std::uint64_t idle_time = 0;
  std::uint64_t restart_overhead = 0;  // r · jobs
  double speedup = 0.0;                // (n − 1) / makespan
  std::uint64_t jobs = 0;
  std::uint64_t restarts = 0;
  std::uint64_t evaluations = 0;
  std::vector<NodeId> job_starts;  // in the order jobs were started
};

/// Discrete-event model of W workers sharing one job list. A node
/// evaluation costs one time unit and starting a job costs r units. A job
/// runs atomically; its unexplored nodes reach the list when it finishes.
/// Free workers take jobs in ascending index order, and simultaneous
/// completions are processed in ascending worker index.
SimReport simulate_parallel(const PreorderTree& tree, std::size_t budget,
                            unsigned workers, std::uint64_t restart_cost,
                            Policy policy = Policy::Lifo);

}  // namespace gwsearch
