#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gwsearch/acceptance.hpp"
#include "gwsearch/analysis.hpp"
#include "gwsearch/bdfs.hpp"
#include "gwsearch/gwtree.hpp"
#include "gwsearch/offspring.hpp"
#include "gwsearch/scheduler.hpp"

namespace gwsearch::cli {

namespace {

// Budgets above this use a Monte Carlo μ_b in sweep reports; the exact DP
// is quadratic in b.
constexpr std::size_t kSweepExactMuLimit = 20000;
constexpr std::uint64_t kSweepMuSamples = 100000;

class FileOut {
 public:
  explicit FileOut(const std::string& path) : file_(path) {
    if (!file_) throw DomainError("cannot open '" + path + "' for writing");
    file_.precision(6);
  }
  std::ostream& stream() { return file_; }

 private:
  std::ofstream file_;
};

PreorderTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open tree file '" + path + "'");
  return read_tree(in);
}

struct Common {
  std::string dist = "catalan";
  bool allow_noncritical = false;
  std::uint64_t seed = 1;
  std::string tree_path;
  std::string out_path;
  std::string policy = "lifo";
};

OffspringDistribution load_dist(const Common& c) {
  return parse_distribution(c.dist, !c.allow_noncritical);
}

int cmd_dist(const Common& c, std::ostream& out) {
  const auto dist = load_dist(c);
  out << std::setprecision(6);
  out << "dist: " << dist.spec() << '\n' << "pmf:";
  for (double p : dist.pmf()) out << ' ' << p;
  out << '\n'
      << "mean: " << dist.mean() << '\n'
      << "variance: " << dist.variance() << '\n'
      << "span: " << dist.span() << '\n'
      << "max_degree: " << dist.max_degree() << '\n';
  return kExitOk;
}

int cmd_gen(const Common& c, std::optional<std::size_t> exact,
            std::optional<std::size_t> at_least, std::uint64_t max_attempts,
            std::ostream& out) {
  if (c.out_path.empty()) throw DomainError("gen needs --out");
  const auto dist = load_dist(c);
  const auto sampled =
      exact ? sample_exact(dist, *exact, c.seed, max_attempts)
            : sample_at_least(dist, *at_least, c.seed, max_attempts);
  {
    FileOut file(c.out_path);
    write_tree(file.stream(), sampled.tree);
  }
  std::ostringstream meta;
  meta << "n=" << sampled.tree.size() << " seed=" << c.seed
       << " attempts=" << sampled.attempts << '\n';
  FileOut sidecar(c.out_path + ".meta");
  sidecar.stream() << meta.str();
  out << meta.str();
  return kExitOk;
}

struct SearchArgs {
  std::size_t budget = 0;
  std::string trace_path;
  std::string records_path;
  std::optional<std::size_t> low_mark;
  std::optional<std::size_t> high_mark;
  double scale_factor = 10.0;
};

int cmd_search(const Common& c, const SearchArgs& a, std::ostream& out) {
  if (c.tree_path.empty()) throw DomainError("search needs --tree");
  const auto tree = load_tree(c.tree_path);
  RunOptions options;
  options.policy = parse_policy(c.policy);
  options.policy_seed = c.seed;

  SearchStats stats;
  if (a.low_mark || a.high_mark) {
    AdaptiveBudget rule;
    rule.initial = a.budget;
    rule.low_mark = a.low_mark.value_or(0);
    rule.high_mark = a.high_mark.value_or(std::numeric_limits<std::size_t>::max());
    rule.scale_factor = a.scale_factor;
    stats = run_adaptive(tree, rule, options);
  } else {
    stats = run_single(tree, a.budget, options);
  }

  std::ostringstream summary;
  summary << "n,b,policy,R,calls,evaluations\n"
          << tree.size() << ',' << a.budget << ',' << to_string(options.policy)
          << ',' << stats.restarts << ',' << stats.calls << ','
          << stats.evaluations << '\n';
  if (c.out_path.empty()) {
    out << summary.str();
  } else {
    FileOut file(c.out_path);
    file.stream() << summary.str();
  }
  if (!a.trace_path.empty()) {
    FileOut file(a.trace_path);
    write_trace_csv(file.stream(), series_export(stats));
  }
  if (!a.records_path.empty()) {
    // Replays the same call sequence and writes every record.
    FileOut file(a.records_path);
    for (std::size_t i = 0; i < stats.starts.size(); ++i) {
      write_records(file.stream(), bdfs(tree, stats.starts[i], stats.budgets[i]));
    }
  }
  return kExitOk;
}

struct SweepArgs {
  std::size_t n_min = 1000000;
  std::vector<std::size_t> budgets;
  std::vector<std::uint64_t> seeds;
  std::uint64_t max_attempts = 100000000;
  unsigned jobs = 1;
};

std::string sweep_one(const OffspringDistribution& dist, const SweepArgs& a,
                      std::uint64_t seed) {
  const auto sampled = sample_at_least(dist, a.n_min, seed, a.max_attempts);
  RunOptions options;
  options.record_series = false;
  std::ostringstream rows;
  for (std::size_t b : a.budgets) {
    const auto stats = run_single(sampled.tree, b, options);
    const MuEstimate mu =
        b <= kSweepExactMuLimit
            ? mu_exact(dist, b)
            : mu_mc(dist, b, kSweepMuSamples, derive_seed(seed, b));
    write_verification_row(
        rows, theorem1_check(stats.restarts, sampled.tree.size(), dist, b, mu));
  }
  return rows.str();
}

int cmd_sweep(const Common& c, SweepArgs a, std::ostream& out) {
  if (a.budgets.empty()) throw DomainError("sweep needs at least one --budget");
  if (a.seeds.empty()) a.seeds.push_back(c.seed);
  if (a.jobs < 1) a.jobs = 1;
  const auto dist = load_dist(c);

  // Runs are independent; each writes its own slot and slots are emitted in
  // (seed, b) order, so output does not depend on --jobs.
  std::vector<std::string> blocks(a.seeds.size());
  std::vector<std::string> errors(a.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < a.seeds.size(); i = next++) {
      try {
        blocks[i] = sweep_one(dist, a, a.seeds[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned threads =
      std::min<unsigned>(a.jobs, static_cast<unsigned>(a.seeds.size()));
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw DomainError(e);
  }

  std::ostringstream csv;
  write_verification_header(csv);
  for (const auto& block : blocks) csv << block;
  if (c.out_path.empty()) {
    out << csv.str();
  } else {
    FileOut file(c.out_path);
    file.stream() << csv.str();
  }
  return kExitOk;
}

int cmd_simulate(const Common& c, std::size_t budget, unsigned workers,
                 std::uint64_t restart_cost, std::ostream& out) {
  if (c.tree_path.empty()) throw DomainError("simulate needs --tree");
  const auto tree = load_tree(c.tree_path);
  const auto report =
      simulate_parallel(tree, budget, workers, restart_cost, parse_policy(c.policy));
  std::ostringstream csv;
  csv.precision(6);
  csv << "n,b,workers,restart_cost,makespan,idle_time,restart_overhead,"
         "speedup,jobs\n"
      << tree.size() << ',' << budget << ',' << workers << ',' << restart_cost
      << ',' << report.makespan << ',' << report.idle_time << ','
      << report.restart_overhead << ',' << report.speedup << ','
      << report.jobs << '\n';
  if (c.out_path.empty()) {
    out << csv.str();
  } else {
    FileOut file(c.out_path);
    file.stream() << csv.str();
  }
  return kExitOk;
}

int cmd_verify(const std::string& level, bool verbose, std::ostream& out) {
  VerifyLevel lvl;
  if (level == "fast") {
    lvl = VerifyLevel::Fast;
  } else if (level == "full") {
    lvl = VerifyLevel::Full;
  } else {
    throw DomainError("unknown verify level '" + level + "'");
  }
  std::ostringstream sink;
  const auto results = run_acceptance(lvl, verbose ? out : sink);
  std::vector<int> failed;
  for (const auto& r : results) {
    out << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << "  "
        << r.title << "  (" << r.detail << ", " << std::fixed
        << std::setprecision(2) << r.seconds << " s)\n";
    out.unsetf(std::ios::floatfield);
    if (!r.passed) failed.push_back(r.id);
  }
  if (failed.empty()) {
    out << "all " << results.size() << " criteria passed\n";
    return kExitOk;
  }
  out << "failed criteria:";
  for (int id : failed) out << ' ' << id;
  out << '\n';
  return kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Budgeted tree search over Galton-Watson trees", "gwsearch"};
  app.require_subcommand(1);

  Common c;
  auto add_dist = [&c](CLI::App* sub) {
    sub->add_option("--dist", c.dist,
                    "offspring law: name[:param] or custom:p0,p1,...");
    sub->add_flag("--allow-noncritical", c.allow_noncritical,
                  "accept laws whose mean is not 1");
  };

  auto* dist = app.add_subcommand("dist", "print an offspring law's constants");
  add_dist(dist);

  auto* gen = app.add_subcommand("gen", "sample a tree and write it to a file");
  add_dist(gen);
  std::optional<std::size_t> exact_n;
  std::optional<std::size_t> n_min;
  std::uint64_t max_attempts = 100000000;
  gen->add_option("--seed", c.seed);
  auto* n_opt = gen->add_option("--n", exact_n, "exact tree size");
  gen->add_option("--n-min", n_min, "minimum tree size")->excludes(n_opt);
  gen->add_option("--max-attempts", max_attempts);
  gen->add_option("--out", c.out_path, "tree file")->required();

  auto* search = app.add_subcommand("search", "run budgeted search to completion");
  SearchArgs search_args;
  search->add_option("--tree,tree", c.tree_path, "tree file")->required();
  search->add_option("--budget", search_args.budget)->required();
  search->add_option("--policy", c.policy, "lifo, fifo or random");
  search->add_option("--seed", c.seed, "seed for the random policy");
  search->add_option("--out", c.out_path, "summary CSV (default: stdout)");
  search->add_option("--trace", search_args.trace_path, "per-call CSV trace");
  search->add_option("--records", search_args.records_path,
                     "all search records as `node flag` lines");
  search->add_option("--low-mark", search_args.low_mark);
  search->add_option("--high-mark", search_args.high_mark);
  search->add_option("--scale-factor", search_args.scale_factor);

  auto* sweep = app.add_subcommand("sweep", "restart counts vs budget over sampled trees");
  add_dist(sweep);
  SweepArgs sweep_args;
  sweep->add_option("--n-min", sweep_args.n_min);
  sweep->add_option("--budget", sweep_args.budgets)->delimiter(',')->required();
  sweep->add_option("--seed", sweep_args.seeds)->delimiter(',');
  sweep->add_option("--max-attempts", sweep_args.max_attempts);
  sweep->add_option("--jobs", sweep_args.jobs, "concurrent runs");
  sweep->add_option("--out", c.out_path, "verification CSV (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "simulate W workers sharing the job list");
  std::size_t sim_budget = 0;
  unsigned workers = 1;
  std::uint64_t restart_cost = 0;
  simulate->add_option("--tree,tree", c.tree_path)->required();
  simulate->add_option("--budget", sim_budget)->required();
  simulate->add_option("--workers", workers);
  simulate->add_option("--restart-cost", restart_cost);
  simulate->add_option("--policy", c.policy);
  simulate->add_option("--out", c.out_path);

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  std::string level = "fast";
  bool verbose = false;
  verify->add_option("--level,level", level, "fast or full");
  verify->add_flag("-v,--verbose", verbose);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomainError;
  }

  try {
    if (*dist) return cmd_dist(c, out);
    if (*gen) {
      if (!exact_n && !n_min) throw DomainError("gen needs --n or --n-min");
      return cmd_gen(c, exact_n, n_min, max_attempts, out);
    }
    if (*search) {
      if (search_args.budget < 1) throw DomainError("budget must be at least 1");
      return cmd_search(c, search_args, out);
    }
    if (*sweep) return cmd_sweep(c, sweep_args, out);
    if (*simulate) return cmd_simulate(c, sim_budget, workers, restart_cost, out);
    if (*verify) return cmd_verify(level, verbose, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitDomainError;
}

}  // namespace gwsearch::cli
