#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gwsearch/rng.hpp"

namespace gwsearch {

/// Raised for malformed or out-of-contract inputs (bad names, parameters,
/// pmfs, preconditions). The CLI maps it to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Offspring law of a Galton-Watson tree: a finite pmf p_0..p_Δ over child
/// counts, together with its mean, variance, span and maximum degree.
///
/// Instances are immutable once built. The builtin families remember their
/// name and parameter so that exact (rational) oracles can re-derive them.
class OffspringDistribution {
 public:
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double p(std::size_t i) const noexcept {
    return i < pmf_.size() ? pmf_[i] : 0.0;
  }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double sigma() const;
  /// gcd of all i > 0 with p_i > 0.
  unsigned span() const noexcept { return span_; }
  /// Largest i with p_i > 0.
  unsigned max_degree() const noexcept { return max_degree_; }

  /// Builtin family name ("catalan", "paper", ...) or "custom".
  const std::string& name() const noexcept { return name_; }
  /// Family parameter (Δ, k, ...) for parameterized builtins.
  std::optional<unsigned> param() const noexcept { return param_; }
  /// Canonical `name[:param]` string, suitable for round-tripping via
  /// parse_distribution (custom laws print their pmf).
  std::string spec() const;

  /// Draws one child count using inverse-CDF lookup.
  unsigned sample(Rng& rng) const;

  friend OffspringDistribution make_custom(std::vector<double> pmf,
                                           bool assert_critical);
  friend OffspringDistribution make_builtin(std::string_view name,
                                            std::optional<unsigned> param,
                                            bool assert_critical);

 private:
  OffspringDistribution() = default;
  static OffspringDistribution build(std::vector<double> pmf,
                                     bool assert_critical);

  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  unsigned span_ = 1;
  unsigned max_degree_ = 0;
  std::string name_ = "custom";
  std::optional<unsigned> param_;
};

struct Moments {
  double mean;
  double variance;
};

/// mean = Σ i p_i, variance = Σ i² p_i − mean².
Moments moments(const std::vector<double>& pmf);
inline Moments moments(const OffspringDistribution& dist) {
  return {dist.mean(), dist.variance()};
}

/// gcd of the positive support of a pmf (0 when the support is {0}).
unsigned span_of(const std::vector<double>& pmf);

/// Validates a user pmf. Entries must be nonnegative; the pmf is
/// renormalized when |Σp − 1| ≤ 1e−9 and rejected otherwise. p_0 must be
/// positive. With assert_critical, |mean − 1| ≤ 1e−9 is required.
OffspringDistribution make_custom(std::vector<double> pmf,
                                  bool assert_critical = false);

/// Builtin families:
///   catalan          (1/4, 1/2, 1/4)
///   full_binary      (1/2, 0, 1/2)
///   ternary_uniform  (1/3, 1/3, 1/3)
///   uniform:k        uniform on {0..k} (critical only for k = 2)
///   paper:Δ          p_i = 1/(iΔ) for i = 1..Δ, p_0 the remainder (Δ ≥ 2)
///   binomial:k       Binomial(k, 1/k) (k ≥ 2)
///   geometric        p_i = 2^-(i+1), truncated
///   poisson          Poisson(1), truncated
/// Unbounded laws are cut at the smallest Δ whose tail mass is below 1e−12
/// and renormalized.
OffspringDistribution make_builtin(std::string_view name,
                                   std::optional<unsigned> param = std::nullopt,
                                   bool assert_critical = true);

/// Parses a CLI distribution spec `name[:param]` or `custom:p0,p1,...`.
OffspringDistribution parse_distribution(std::string_view spec,
                                         bool assert_critical = true);

}  // namespace gwsearch
