#include "wordorder/deplen.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "wordorder/error.hpp"

namespace wordorder {
namespace {

void check_placement(int m, int head_pos) {
  if (m < 2) throw Error("deplen", "PositionOutOfRange", "sequence length must be at least 2");
  if (head_pos < 1 || head_pos > m) {
    throw Error("deplen", "PositionOutOfRange",
                "head position " + std::to_string(head_pos) + " outside 1.." + std::to_string(m));
  }
}

}  // namespace

std::int64_t dependency_sum(int m, int head_pos) {
  check_placement(m, head_pos);
  std::int64_t d = 0;
  for (int p = 1; p <= m; ++p) d += std::abs(head_pos - p);
  return d;
}

double dependency_cost(int m, int head_pos, const CostTransducer& g) {
  check_placement(m, head_pos);
  g.require(Direction::increasing, static_cast<double>(m));
  double cost = 0.0;
  for (int p = 1; p <= m; ++p) {
    if (p != head_pos) cost += g(static_cast<double>(std::abs(head_pos - p)));
  }
  return cost;
}

std::set<int> center_positions(int m) {
  if (m % 2 == 1) return {(m + 1) / 2};
  return {m / 2, m / 2 + 1};
}

Extremum min_dependency_sum(int m) {
  check_placement(m, 1);
  const std::int64_t mm = m;
  return {(mm * mm - mm % 2) / 4, center_positions(m)};
}

Extremum max_dependency_sum(int m) {
  check_placement(m, 1);
  const std::int64_t mm = m;
  return {mm * (mm - 1) / 2, {1, m}};
}

bool is_quasi_convex(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 3) return true;
  // c[k] <= max(c[j], c[l]) for all j < k < l  <=>  c[k] <= max(min left, min right).
  std::vector<double> min_right(n, std::numeric_limits<double>::infinity());
  for (std::size_t k = n - 1; k-- > 0;) min_right[k] = std::min(min_right[k + 1], values[k + 1]);
  double min_left = values[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (values[k] > std::max(min_left, min_right[k])) return false;
    min_left = std::min(min_left, values[k]);
  }
  return true;
}

DependencyLandscape landscape(int m, const CostTransducer& g) {
  check_placement(m, 1);
  DependencyLandscape out{m, {}, false};
  out.costs.reserve(static_cast<std::size_t>(m));
  for (int p = 1; p <= m; ++p) out.costs.push_back(dependency_cost(m, p, g));
  out.quasi_convex = is_quasi_convex(out.costs);
  return out;
}

}  // namespace wordorder
