#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "wordorder/transducer.hpp"

namespace wordorder {

// A single head with m - 1 atomic dependents, one per remaining position.
// Positions are 1-based.

/// Sum of |head_pos - d| over the m - 1 dependent positions.
/// Throws deplen.PositionOutOfRange unless m >= 2 and 1 <= head_pos <= m.
std::int64_t dependency_sum(int m, int head_pos);

/// Sum of g(|head_pos - d|); g must be strictly increasing.
double dependency_cost(int m, int head_pos, const CostTransducer& g);

struct Extremum {
  std::int64_t value = 0;
  std::set<int> positions;
};

/// (m^2 - m mod 2) / 4 at the central position(s).
Extremum min_dependency_sum(int m);

/// m(m-1)/2 at positions 1 and m.
Extremum max_dependency_sum(int m);

struct DependencyLandscape {
  int m = 0;
  std::vector<double> costs;  // costs[p - 1] for head position p
  bool quasi_convex = false;

  double at(int head_pos) const { return costs.at(static_cast<std::size_t>(head_pos - 1)); }
};

DependencyLandscape landscape(int m, const CostTransducer& g);

/// No c[k] exceeds max(c[j], c[l]) for any j < k < l.
bool is_quasi_convex(const std::vector<double>& values);

/// The central position(s): {(m+1)/2} for odd m, {m/2, m/2+1} for even m.
std::set<int> center_positions(int m);

}  // namespace wordorder
