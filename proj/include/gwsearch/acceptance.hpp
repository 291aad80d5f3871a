#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gwsearch/gwtree.hpp"

namespace gwsearch {

/// The 25-node example tree used throughout the search fixtures.
const std::vector<std::uint32_t>& figure1_degrees();
PreorderTree figure1_tree();

enum class VerifyLevel { Fast, Full };

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria. Fast covers the fixtures, exact oracles,
/// property checks and the simulation; Full adds the Monte Carlo agreement,
/// the b = 10^4 asymptotic check and the large-tree restart-count runs.
/// Progress and per-check detail go to `log`.
std::vector<CriterionResult> run_acceptance(VerifyLevel level,
                                            std::ostream& log);

}  // namespace gwsearch
