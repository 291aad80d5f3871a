#include "gwsearch/offspring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gwsearch {

namespace {

constexpr double kNormalizeTolerance = 1e-9;
constexpr double kCriticalTolerance = 1e-9;
constexpr double kTruncationTail = 1e-12;

// Cuts an unbounded pmf generator at the first Δ whose remaining tail mass
// drops below kTruncationTail.
template <typename Term>
std::vector<double> truncated(Term term) {
  std::vector<double> pmf;
  double mass = 0.0;
  for (unsigned i = 0;; ++i) {
    pmf.push_back(term(i));
    mass += pmf.back();
    if (1.0 - mass < kTruncationTail) break;
  }
  return pmf;
}

unsigned parse_unsigned(std::string_view text, std::string_view what) {
  unsigned value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DomainError("invalid " + std::string(what) + " parameter '" +
                      std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text) {
  std::string owned(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(owned, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != owned.size()) {
    throw DomainError("invalid probability '" + owned + "'");
  }
  return value;
}

unsigned require_param(std::optional<unsigned> param, std::string_view name) {
  if (!param) {
    throw DomainError("distribution '" + std::string(name) +
                      "' requires a parameter");
  }
  return *param;
}

}  // namespace

double OffspringDistribution::sigma() const { return std::sqrt(variance_); }

std::string OffspringDistribution::spec() const {
  std::ostringstream out;
  out << name_;
  if (name_ == "custom") {
    out.precision(17);
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
      out << (i == 0 ? ':' : ',') << pmf_[i];
    }
  } else if (param_) {
    out << ':' << *param_;
  }
  return out.str();
}

unsigned OffspringDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  // Mass is concentrated on small degrees for every builtin, so a linear
  // scan beats binary search in practice.
  for (unsigned i = 0; i < max_degree_; ++i) {
    if (u < cdf_[i]) return i;
  }
  return max_degree_;
}

Moments moments(const std::vector<double>& pmf) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const double x = static_cast<double>(i);
    mean += x * pmf[i];
    second += x * x * pmf[i];
  }
  return {mean, second - mean * mean};
}

unsigned span_of(const std::vector<double>& pmf) {
  unsigned g = 0;
  for (std::size_t i = 1; i < pmf.size(); ++i) {
    if (pmf[i] > 0.0) g = std::gcd(g, static_cast<unsigned>(i));
  }
  return g;
}

OffspringDistribution OffspringDistribution::build(std::vector<double> pmf,
                                                   bool assert_critical) {
  if (pmf.empty()) throw DomainError("empty pmf");
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError("pmf entries must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  if (std::fabs(total - 1.0) > kNormalizeTolerance) {
    std::ostringstream msg;
    msg << "pmf sums to " << total << ", not 1";
    throw DomainError(msg.str());
  }
  // Leave rounding-level sums alone so normalizing twice is a no-op.
  const double ulps = 4.0 * std::numeric_limits<double>::epsilon() *
                      static_cast<double>(pmf.size());
  if (std::fabs(total - 1.0) > ulps) {
    for (double& p : pmf) p /= total;
  }
  while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();

  if (pmf[0] <= 0.0) {
    throw DomainError("p_0 must be positive (otherwise the tree is infinite)");
  }
  OffspringDistribution dist;
  const auto [mean, variance] = moments(pmf);
  dist.mean_ = mean;
  dist.variance_ = variance;
  dist.span_ = std::max(1u, span_of(pmf));
  dist.max_degree_ = static_cast<unsigned>(pmf.size() - 1);

  if (assert_critical) {
    if (std::fabs(mean - 1.0) > kCriticalTolerance) {
      std::ostringstream msg;
      msg << "distribution is not critical: mean = " << mean;
      throw DomainError(msg.str());
    }
    if (!(variance > 0.0)) {
      throw DomainError("critical distribution must have positive variance");
    }
  }

  dist.cdf_.resize(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), dist.cdf_.begin());
  dist.cdf_.back() = 1.0;
  dist.pmf_ = std::move(pmf);
  return dist;
}

OffspringDistribution make_custom(std::vector<double> pmf,
                                  bool assert_critical) {
  return OffspringDistribution::build(std::move(pmf), assert_critical);
}

OffspringDistribution make_builtin(std::string_view name,
                                   std::optional<unsigned> param,
                                   bool assert_critical) {
  std::vector<double> pmf;
  bool takes_param = false;
  if (name == "catalan") {
    pmf = {0.25, 0.5, 0.25};
  } else if (name == "full_binary") {
    pmf = {0.5, 0.0, 0.5};
  } else if (name == "ternary_uniform") {
    pmf = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  } else if (name == "uniform") {
    takes_param = true;
    const unsigned k = require_param(param, name);
    if (k < 1) throw DomainError("uniform:k requires k >= 1");
    pmf.assign(k + 1, 1.0 / (k + 1));
  } else if (name == "paper") {
    takes_param = true;
    const unsigned delta = require_param(param, name);
    if (delta < 2) throw DomainError("paper:Δ requires Δ >= 2");
    pmf.assign(delta + 1, 0.0);
    double rest = 1.0;
    for (unsigned i = 1; i <= delta; ++i) {
      pmf[i] = 1.0 / (static_cast<double>(i) * delta);
      rest -= pmf[i];
    }
    pmf[0] = rest;
  } else if (name == "binomial") {
    takes_param = true;
    const unsigned k = require_param(param, name);
    if (k < 2) throw DomainError("binomial:k requires k >= 2");
    const double q = 1.0 / k;
    pmf.assign(k + 1, 0.0);
    for (unsigned i = 0; i <= k; ++i) {
      pmf[i] = std::exp(std::lgamma(k + 1.0) - std::lgamma(i + 1.0) -
                        std::lgamma(k - i + 1.0)) *
               std::pow(q, i) * std::pow(1.0 - q, k - i);
    }
  } else if (name == "geometric") {
    pmf = truncated([](unsigned i) { return std::ldexp(1.0, -int(i) - 1); });
  } else if (name == "poisson") {
    pmf = truncated([](unsigned i) { return std::exp(-1.0 - std::lgamma(i + 1.0)); });
  } else {
    throw DomainError("unknown distribution '" + std::string(name) + "'");
  }
  if (!takes_param && param) {
    throw DomainError("distribution '" + std::string(name) +
                      "' takes no parameter");
  }

  auto dist = OffspringDistribution::build(std::move(pmf), assert_critical);
  dist.name_ = std::string(name);
  if (takes_param) dist.param_ = param;
  return dist;
}

OffspringDistribution parse_distribution(std::string_view spec,
                                         bool assert_critical) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (name.empty()) throw DomainError("empty distribution spec");

  if (name == "custom") {
    if (rest.empty()) throw DomainError("custom distribution needs a pmf");
    std::vector<double> pmf;
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto end = comma == std::string_view::npos ? rest.size() : comma;
      pmf.push_back(parse_double(rest.substr(start, end - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return make_custom(std::move(pmf), assert_critical);
  }

  std::optional<unsigned> param;
  if (colon != std::string_view::npos) param = parse_unsigned(rest, name);
  return make_builtin(name, param, assert_critical);
}

}  // namespace gwsearch
