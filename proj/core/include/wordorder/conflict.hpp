#pragma once

#include <set>
#include <string>
#include <vector>

#include "wordorder/distributions.hpp"
#include "wordorder/transducer.hpp"

namespace wordorder {

// Head placement seen by two objectives at once: dependency cost of a star
// with the head at p, and the head's uncertainty given the p - 1 dependents
// produced before it.

struct ConflictRow {
  int head_pos = 0;
  double dependency_cost = 0.0;
  double head_uncertainty = 0.0;  // bits
};

struct ConflictReport {
  int m = 0;
  std::vector<ConflictRow> rows;  // rows[p - 1]
  std::string model_id;
};

/// The head is `head_role`; the remaining roles are the dependents, produced
/// in `dependent_order`.
ConflictReport conflict_report(const JointModel& model, const std::string& head_role,
                               const std::vector<std::string>& dependent_order,
                               const CostTransducer& edge_cost = CostTransducer::identity());

/// Positions not dominated in (dependency cost, uncertainty), both minimized.
std::set<int> pareto_front(const ConflictReport& report);

/// Argmin of lambda * dep + (1 - lambda) * H after min-max normalizing both
/// columns to [0, 1] (a constant column normalizes to 0). Throws
/// conflict.InvalidLambda outside [0, 1].
std::set<int> weighted_optimum(const ConflictReport& report, double lambda);

std::set<int> dependency_optimal(const ConflictReport& report);
std::set<int> uncertainty_optimal(const ConflictReport& report);

/// True when the two optimal sets are disjoint.
bool conflict_present(const ConflictReport& report);

/// Largest lambda for which head-last (position m) stays weighted-optimal;
/// position m is optimal exactly on [0, threshold].
double head_last_threshold(const ConflictReport& report);

enum class Verdict { no, yes, not_applicable };

struct Asymmetry {
  bool extreme_is_worst_for_dlm = false;
  Verdict center_is_worst_for_uncertainty = Verdict::not_applicable;
};

/// Extreme placements maximize dependency cost; central placements are the
/// worst for uncertainty only when no earlier dependent informs the head.
/// A flat uncertainty column (no dependence) yields not_applicable.
Asymmetry asymmetry_check(const ConflictReport& report);

enum class StepRelation { allies, enemies, mixed };

struct PlacementStep {
  int from = 0;  // head moves from `from` to `from + 1`
  double dependency_delta = 0.0;
  double uncertainty_delta = 0.0;
  StepRelation relation = StepRelation::mixed;
};

/// Classifies each one-position move of the head toward the end: allies when
/// both objectives weakly improve, enemies when uncertainty improves while
/// dependency cost strictly grows.
std::vector<PlacementStep> placement_steps(const ConflictReport& report);

std::string model_fingerprint(const JointModel& model);

const char* to_string(Verdict v);
const char* to_string(StepRelation r);

}  // namespace wordorder
