#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gwsearch/offspring.hpp"

namespace gwsearch {

using Rational = boost::multiprecision::cpp_rational;

/// Requested computation is too large for the exact routines.
class ResourceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Law of the total progeny N up to a horizon: pmf[t] = P{N = t} for
/// t = 1..horizon (pmf[0] is unused and zero), tail = P{N > horizon}.
template <typename Scalar>
struct BasicSizeLaw {
  std::size_t horizon = 0;
  std::vector<Scalar> pmf;
  Scalar tail{};
};

using SizeLaw = BasicSizeLaw<double>;
using ExactSizeLaw = BasicSizeLaw<Rational>;

/// Largest horizon the convolution DP accepts; its cost grows as
/// horizon² · (Δ + 1).
inline constexpr std::size_t kMaxDpHorizon = 200000;
inline constexpr double kMaxDpWork = 1e11;

/// P{N = t} = P{ξ_1 + ⋯ + ξ_t = t − 1} / t, by iterated convolution of the
/// offspring pmf. Partial sums above horizon − 1 are dropped since ξ ≥ 0.
SizeLaw size_pmf_exact(const OffspringDistribution& dist, std::size_t horizon);
ExactSizeLaw size_pmf_exact(const std::vector<Rational>& pmf,
                            std::size_t horizon);

/// Exact rational pmf of a builtin with rational entries (catalan,
/// full_binary, ternary_uniform, uniform:k, paper:Δ); nullopt otherwise.
std::optional<std::vector<Rational>> exact_pmf(const OffspringDistribution& dist);

/// All ordered trees of exactly `size` nodes whose degrees lie in the
/// support of `pmf`, as preorder degree sequences, built structurally
/// (root degree × compositions of the remaining nodes).
std::vector<std::vector<std::uint32_t>> enumerate_trees(
    const std::vector<bool>& support, std::size_t size);

inline constexpr std::size_t kMaxEnumeration = 12;

/// Brute-force progeny law: P{N = n} = Σ over trees of size n of
/// Π p_deg(v). Limited to horizon ≤ 12.
SizeLaw enumerate_small_trees(const OffspringDistribution& dist,
                              std::size_t horizon);
ExactSizeLaw enumerate_small_trees(const std::vector<Rational>& pmf,
                                   std::size_t horizon);

enum class MuMethod { Analytic, ExactDp, MonteCarlo };

struct MuEstimate {
  double value = 0.0;
  MuMethod method = MuMethod::Analytic;
  std::optional<double> std_error;  // Monte Carlo only
};

/// √(8b / (π σ²)), the large-b asymptote of E{min(N, b)}.
double mu_analytic(double sigma2, std::size_t budget);

/// E{min(N, b)} = Σ_{t≤b} t P{N = t} + b P{N > b}.
MuEstimate mu_exact(const OffspringDistribution& dist, std::size_t budget);
Rational mu_exact(const std::vector<Rational>& pmf, std::size_t budget);

/// Sample mean of min(N_i, b) over i.i.d. unconditional trees, each grown
/// to at most b nodes. std_error = sample SD / √samples.
MuEstimate mu_mc(const OffspringDistribution& dist, std::size_t budget,
                 std::uint64_t samples, std::uint64_t seed);

/// d / (σ √(2π) n^{3/2}) for n ≡ 1 mod d, and 0 otherwise.
double size_pmf_asymptotic(const OffspringDistribution& dist, std::size_t n);
/// √(2 / (π n σ²)) ≈ P{N ≥ n}.
double tail_asymptotic(const OffspringDistribution& dist, std::size_t n);

struct Theorem1Report {
  std::string dist;
  std::size_t budget = 0;
  std::uint64_t n = 0;
  std::uint64_t restarts = 0;
  double mu = 0.0;
  MuMethod mu_method = MuMethod::ExactDp;
  double rho_exact = 0.0;  // R μ_b / n, → 1
  double rho_table = 0.0;  // R / (σ n)
  double estimate = 0.0;   // √(π / 8b), the large-b limit of rho_table
};

/// Normalized restart counts for a completed run. μ_b comes from `mu` when
/// given, otherwise from mu_exact.
Theorem1Report theorem1_check(std::uint64_t restarts, std::uint64_t n,
                              const OffspringDistribution& dist,
                              std::size_t budget,
                              std::optional<MuEstimate> mu = std::nullopt);

/// Header `dist,b,n,R,rho_table,rho_exact,estimate_sqrt_pi_over_8b`.
void write_verification_header(std::ostream& out);
void write_verification_row(std::ostream& out, const Theorem1Report& report);

}  // namespace gwsearch
