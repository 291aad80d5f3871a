// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Pass --fast to skip the Monte Carlo and large-tree criteria.
#include <cstring>
#include <iomanip>
#include <iostream>

#include "gwsearch/acceptance.hpp"

int main(int argc, char** argv) {
  auto level = gwsearch::VerifyLevel::Full;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) level = gwsearch::VerifyLevel::Fast;
  }
  const auto results = gwsearch::run_acceptance(level, std::cout);
  std::cout << '\n';
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << ": "
              << r.title << "  (" << r.detail << ", " << std::fixed
              << std::setprecision(2) << r.seconds << " s)\n";
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: failures present")
            << '\n';
  return failures == 0 ? 0 : 1;
}
