#include "gwsearch/analysis.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include "gwsearch/gwtree.hpp"

namespace gwsearch {

namespace {

constexpr std::size_t kMaxRationalHorizon = 400;

template <typename Scalar>
BasicSizeLaw<Scalar> convolution_law(const std::vector<Scalar>& pmf,
                                     std::size_t horizon) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (pmf[i] != Scalar(0)) support.push_back(i);
  }

  BasicSizeLaw<Scalar> law;
  law.horizon = horizon;
  law.pmf.assign(horizon + 1, Scalar(0));

  // walk[k] = P{ξ_1 + ⋯ + ξ_t = k} for k ≤ horizon − 1.
  std::vector<Scalar> walk{Scalar(1)};
  std::vector<Scalar> next;
  Scalar total(0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const std::size_t len =
        std::min(walk.size() - 1 + (pmf.size() - 1), horizon - 1) + 1;
    next.assign(len, Scalar(0));
    for (std::size_t k = 0; k < walk.size(); ++k) {
      if (walk[k] == Scalar(0)) continue;
      for (std::size_t i : support) {
        if (k + i >= len) break;
        next[k + i] += walk[k] * pmf[i];
      }
    }
    walk.swap(next);
    if (t - 1 < walk.size()) {
      law.pmf[t] = walk[t - 1] / Scalar(static_cast<long long>(t));
      total += law.pmf[t];
    }
  }
  law.tail = Scalar(1) - total;
  return law;
}

// E{min(N, b)} = Σ_{t=1}^{b} P{N ≥ t}; the t = 1 term is exactly 1.
template <typename Scalar>
Scalar expected_truncated_size(const BasicSizeLaw<Scalar>& law) {
  Scalar mu(0);
  Scalar below(0);  // P{N < t}
  for (std::size_t t = 1; t <= law.horizon; ++t) {
    mu += Scalar(1) - below;
    below += law.pmf[t];
  }
  return mu;
}

template <typename Scalar>
BasicSizeLaw<Scalar> enumeration_law(const std::vector<Scalar>& pmf,
                                     std::size_t horizon) {
  if (horizon > kMaxEnumeration) {
    throw ResourceError("tree enumeration is limited to " +
                        std::to_string(kMaxEnumeration) + " nodes");
  }
  std::vector<bool> support(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i) support[i] = pmf[i] != Scalar(0);

  BasicSizeLaw<Scalar> law;
  law.horizon = horizon;
  law.pmf.assign(horizon + 1, Scalar(0));
  Scalar total(0);
  for (std::size_t n = 1; n <= horizon; ++n) {
    for (const auto& tree : enumerate_trees(support, n)) {
      Scalar weight(1);
      for (auto deg : tree) weight *= pmf[deg];
      law.pmf[n] += weight;
    }
    total += law.pmf[n];
  }
  law.tail = Scalar(1) - total;
  return law;
}

void check_dp_size(std::size_t horizon, std::size_t max_degree) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  const double work = static_cast<double>(horizon) *
                      static_cast<double>(horizon) *
                      static_cast<double>(max_degree + 1);
  if (horizon > kMaxDpHorizon || work > kMaxDpWork) {
    throw ResourceError("convolution DP too large: horizon " +
                        std::to_string(horizon) + " with max degree " +
                        std::to_string(max_degree));
  }
}

}  // namespace

SizeLaw size_pmf_exact(const OffspringDistribution& dist, std::size_t horizon) {
  check_dp_size(horizon, dist.max_degree());
  return convolution_law(dist.pmf(), horizon);
}

ExactSizeLaw size_pmf_exact(const std::vector<Rational>& pmf,
                            std::size_t horizon) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (horizon > kMaxRationalHorizon) {
    throw ResourceError("rational DP limited to horizon " +
                        std::to_string(kMaxRationalHorizon));
  }
  return convolution_law(pmf, horizon);
}

std::optional<std::vector<Rational>> exact_pmf(
    const OffspringDistribution& dist) {
  const std::string& name = dist.name();
  if (name == "catalan") {
    return std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(1, 4)};
  }
  if (name == "full_binary") {
    return std::vector<Rational>{Rational(1, 2), Rational(0), Rational(1, 2)};
  }
  if (name == "ternary_uniform") {
    return std::vector<Rational>(3, Rational(1, 3));
  }
  if (name == "uniform" && dist.param()) {
    const unsigned k = *dist.param();
    return std::vector<Rational>(k + 1, Rational(1, k + 1));
  }
  if (name == "paper" && dist.param()) {
    const unsigned delta = *dist.param();
    std::vector<Rational> pmf(delta + 1);
    pmf[0] = 1;
    for (unsigned i = 1; i <= delta; ++i) {
      pmf[i] = Rational(1, static_cast<long long>(i) * delta);
      pmf[0] -= pmf[i];
    }
    return pmf;
  }
  return std::nullopt;
}

std::vector<std::vector<std::uint32_t>> enumerate_trees(
    const std::vector<bool>& support, std::size_t size) {
  // by_size[m] holds every tree with m nodes.
  std::vector<std::vector<std::vector<std::uint32_t>>> by_size(size + 1);
  for (std::size_t m = 1; m <= size; ++m) {
    auto& out = by_size[m];
    if (m == 1) {
      if (!support.empty() && support[0]) out.push_back({0});
      continue;
    }
    for (std::size_t k = 1; k < support.size() && k <= m - 1; ++k) {
      if (!support[k]) continue;
      std::vector<std::uint32_t> prefix{static_cast<std::uint32_t>(k)};
      // Place k subtrees, in order, using `nodes` remaining nodes.
      std::function<void(std::size_t, std::size_t)> place =
          [&](std::size_t subtrees, std::size_t nodes) {
            if (subtrees == 0) {
              if (nodes == 0) out.push_back(prefix);
              return;
            }
            for (std::size_t s = 1; s + (subtrees - 1) <= nodes; ++s) {
              for (const auto& sub : by_size[s]) {
                const auto mark = prefix.size();
                prefix.insert(prefix.end(), sub.begin(), sub.end());
                place(subtrees - 1, nodes - s);
                prefix.resize(mark);
              }
            }
          };
      place(k, m - 1);
    }
  }
  return std::move(by_size[size]);
}

SizeLaw enumerate_small_trees(const OffspringDistribution& dist,
                              std::size_t horizon) {
  return enumeration_law(dist.pmf(), horizon);
}

ExactSizeLaw enumerate_small_trees(const std::vector<Rational>& pmf,
                                   std::size_t horizon) {
  return enumeration_law(pmf, horizon);
}

double mu_analytic(double sigma2, std::size_t budget) {
  if (!(sigma2 > 0.0)) throw DomainError("variance must be positive");
  if (budget < 1) throw DomainError("budget must be at least 1");
  return std::sqrt(8.0 * static_cast<double>(budget) /
                   (std::numbers::pi * sigma2));
}

MuEstimate mu_exact(const OffspringDistribution& dist, std::size_t budget) {
  const auto law = size_pmf_exact(dist, budget);
  return {expected_truncated_size(law), MuMethod::ExactDp, std::nullopt};
}

Rational mu_exact(const std::vector<Rational>& pmf, std::size_t budget) {
  return expected_truncated_size(size_pmf_exact(pmf, budget));
}

MuEstimate mu_mc(const OffspringDistribution& dist, std::size_t budget,
                 std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("need at least one sample");
  if (budget < 1) throw DomainError("budget must be at least 1");
  Rng rng(seed);
  // Welford running mean and sum of squared deviations.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 1; i <= samples; ++i) {
    const double x =
        static_cast<double>(sample_size_capped(dist, rng, budget));
    const double delta = x - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (x - mean);
  }
  const double variance =
      samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean, MuMethod::MonteCarlo,
          std::sqrt(variance / static_cast<double>(samples))};
}

double size_pmf_asymptotic(const OffspringDistribution& dist, std::size_t n) {
  const unsigned d = dist.span();
  if (n % d != 1 % d) return 0.0;
  const double nn = static_cast<double>(n);
  return d / (dist.sigma() * std::sqrt(2.0 * std::numbers::pi) * nn *
              std::sqrt(nn));
}

double tail_asymptotic(const OffspringDistribution& dist, std::size_t n) {
  return std::sqrt(2.0 / (std::numbers::pi * static_cast<double>(n) *
                          dist.variance()));
}

Theorem1Report theorem1_check(std::uint64_t restarts, std::uint64_t n,
                              const OffspringDistribution& dist,
                              std::size_t budget,
                              std::optional<MuEstimate> mu) {
  if (n < 1) throw DomainError("tree size must be positive");
  if (budget < 1) throw DomainError("budget must be at least 1");
  const MuEstimate m = mu ? *mu : mu_exact(dist, budget);
  Theorem1Report report;
  report.dist = dist.spec();
  report.budget = budget;
  report.n = n;
  report.restarts = restarts;
  report.mu = m.value;
  report.mu_method = m.method;
  const double r = static_cast<double>(restarts);
  const double size = static_cast<double>(n);
  report.rho_exact = r * m.value / size;
  report.rho_table = r / (dist.sigma() * size);
  report.estimate = std::sqrt(std::numbers::pi / (8.0 * budget));
  return report;
}

void write_verification_header(std::ostream& out) {
  out << "dist,b,n,R,rho_table,rho_exact,estimate_sqrt_pi_over_8b\n";
}

void write_verification_row(std::ostream& out, const Theorem1Report& report) {
  const auto flags = out.flags();
  const auto precision = out.precision(6);
  out.unsetf(std::ios::floatfield);
  if (report.dist.find(',') != std::string::npos) {
    out << '"' << report.dist << '"';
  } else {
    out << report.dist;
  }
  out << ',' << report.budget << ',' << report.n << ','
      << report.restarts << ',' << report.rho_table << ',' << report.rho_exact
      << ',' << report.estimate << '\n';
  out.precision(precision);
  out.flags(flags);
}

}  // namespace gwsearch
