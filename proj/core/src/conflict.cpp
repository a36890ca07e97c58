#include "wordorder/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "wordorder/deplen.hpp"
#include "wordorder/error.hpp"
#include "wordorder/infotheory.hpp"

namespace wordorder {
namespace {

constexpr double kTol = kTieTolerance;

std::set<int> argmin(const std::vector<double>& values) {
  std::set<int> out;
  const double lo = *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= lo + kTol) out.insert(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<double> normalized(std::vector<double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& x : v) x = range > kClampTolerance ? (x - low) / range : 0.0;
  return v;
}

std::vector<double> column(const ConflictReport& r, double ConflictRow::*field) {
  std::vector<double> out;
  out.reserve(r.rows.size());
  for (const auto& row : r.rows) out.push_back(row.*field);
  return out;
}

void require_rows(const ConflictReport& r) {
  if (r.rows.empty() || static_cast<int>(r.rows.size()) != r.m) {
    throw Error("conflict", "InvalidReport", "report has no rows or rows do not match m");
  }
}

}  // namespace

ConflictReport conflict_report(const JointModel& model, const std::string& head_role,
                               const std::vector<std::string>& dependent_order,
                               const CostTransducer& edge_cost) {
  const auto profile = uncertainty_profile(model, head_role, dependent_order);
  const int m = static_cast<int>(model.arity());
  ConflictReport report{m, {}, model_fingerprint(model)};
  const auto deps = landscape(m, edge_cost);
  for (int p = 1; p <= m; ++p) {
    report.rows.push_back({p, deps.at(p), profile.values[static_cast<std::size_t>(p - 1)]});
  }
  return report;
}

std::set<int> pareto_front(const ConflictReport& report) {
  require_rows(report);
  std::set<int> front;
  for (const auto& a : report.rows) {
    bool dominated = false;
    for (const auto& b : report.rows) {
      const bool no_worse = b.dependency_cost <= a.dependency_cost + kTol &&
                            b.head_uncertainty <= a.head_uncertainty + kTol;
      const bool better = b.dependency_cost < a.dependency_cost - kTol ||
                          b.head_uncertainty < a.head_uncertainty - kTol;
      if (no_worse && better) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.insert(a.head_pos);
  }
  return front;
}

std::set<int> weighted_optimum(const ConflictReport& report, double lambda) {
  require_rows(report);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error("conflict", "InvalidLambda", "lambda must lie in [0, 1]");
  }
  const auto dep = normalized(column(report, &ConflictRow::dependency_cost));
  const auto unc = normalized(column(report, &ConflictRow::head_uncertainty));
  std::vector<double> mix(dep.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = lambda * dep[i] + (1.0 - lambda) * unc[i];
  return argmin(mix);
}

std::set<int> dependency_optimal(const ConflictReport& report) {
  require_rows(report);
  return argmin(column(report, &ConflictRow::dependency_cost));
}

std::set<int> uncertainty_optimal(const ConflictReport& report) {
  require_rows(report);
  return argmin(column(report, &ConflictRow::head_uncertainty));
}

bool conflict_present(const ConflictReport& report) {
  const auto a = dependency_optimal(report);
  const auto b = uncertainty_optimal(report);
  return std::none_of(a.begin(), a.end(), [&](int p) { return b.count(p) > 0; });
}

double head_last_threshold(const ConflictReport& report) {
  require_rows(report);
  const auto dep = normalized(column(report, &ConflictRow::dependency_cost));
  const auto unc = normalized(column(report, &ConflictRow::head_uncertainty));
  const std::size_t last = dep.size() - 1;
  // Row m beats row p at lambda iff B + lambda (A - B) <= 0 with
  // A = dep_m - dep_p and B = unc_m - unc_p.
  double threshold = 1.0;
  for (std::size_t p = 0; p < last; ++p) {
    const double a = dep[last] - dep[p];
    const double b = unc[last] - unc[p];
    if (b > kTol) return 0.0;  // head-last is never uncertainty-optimal here
    if (a - b > kTol) threshold = std::min(threshold, std::max(0.0, -b / (a - b)));
  }
  return threshold;
}

Asymmetry asymmetry_check(const ConflictReport& report) {
  require_rows(report);
  Asymmetry out;
  const auto dep = column(report, &ConflictRow::dependency_cost);
  const double worst_dep = *std::max_element(dep.begin(), dep.end());
  out.extreme_is_worst_for_dlm =
      dep.front() >= worst_dep - kTol && dep.back() >= worst_dep - kTol;

  const auto unc = column(report, &ConflictRow::head_uncertainty);
  const auto [lo, hi] = std::minmax_element(unc.begin(), unc.end());
  if (*hi - *lo <= kTol) {
    out.center_is_worst_for_uncertainty = Verdict::not_applicable;
    return out;
  }
  bool worst = true;
  for (int c : center_positions(report.m)) {
    worst = worst && unc[static_cast<std::size_t>(c - 1)] >= *hi - kTol;
  }
  out.center_is_worst_for_uncertainty = worst ? Verdict::yes : Verdict::no;
  return out;
}

std::vector<PlacementStep> placement_steps(const ConflictReport& report) {
  require_rows(report);
  std::vector<PlacementStep> steps;
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    PlacementStep s;
    s.from = report.rows[i].head_pos;
    s.dependency_delta = report.rows[i + 1].dependency_cost - report.rows[i].dependency_cost;
    s.uncertainty_delta = report.rows[i + 1].head_uncertainty - report.rows[i].head_uncertainty;
    const bool unc_ok = s.uncertainty_delta <= kTol;
    if (unc_ok && s.dependency_delta <= kTol) {
      s.relation = StepRelation::allies;
    } else if (unc_ok && s.dependency_delta > kTol) {
      s.relation = StepRelation::enemies;
    } else {
      s.relation = StepRelation::mixed;
    }
    steps.push_back(s);
  }
  return steps;
}

std::string model_fingerprint(const JointModel& model) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  for (std::size_t r = 0; r < model.arity(); ++r) {
    mix(model.roles()[r].data(), model.roles()[r].size() + 1);
    for (const auto& s : model.alphabets()[r].symbols()) mix(s.data(), s.size() + 1);
  }
  for (const auto& [outcome, p] : model.entries()) {
    mix(outcome.data(), outcome.size() * sizeof(outcome[0]));
    mix(&p, sizeof p);
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "fnv1a-";
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kHex[(h >> shift) & 0xF]);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::no: return "false";
    case Verdict::yes: return "true";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

const char* to_string(StepRelation r) {
  switch (r) {
    case StepRelation::allies: return "allies";
    case StepRelation::enemies: return "enemies";
    case StepRelation::mixed: return "mixed";
  }
  return "?";
}

}  // namespace wordorder
