#include "gwsearch/bdfs.hpp"

#include <ostream>

namespace gwsearch {

std::vector<NodeId> unexplored_of(const BudgetedSearchOutput& output) {
  std::vector<NodeId> nodes;
  for (const auto& record : output.records) {
    if (record.unexplored) nodes.push_back(record.node);
  }
  return nodes;
}

void write_records(std::ostream& out, const BudgetedSearchOutput& output) {
  for (const auto& record : output.records) {
    out << record.node << ' ' << (record.unexplored ? 1 : 0) << '\n';
  }
}

}  // namespace gwsearch
