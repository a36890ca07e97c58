#include "wordorder/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wordorder/error.hpp"

namespace wordorder {
namespace {

[[noreturn]] void fail(const char* kind, const std::string& message) {
  throw Error("infotheory", kind, message);
}

std::vector<std::size_t> indices_of(const JointModel& model, const std::vector<std::string>& roles) {
  std::vector<std::size_t> out;
  out.reserve(roles.size());
  for (const auto& r : roles) {
    if (!model.has_role(r)) fail("UnknownRole", "unknown role '" + r + "'");
    out.push_back(model.role_index(r));
  }
  return out;
}

double entropy_of_indices(const JointModel& model, const std::vector<std::size_t>& indices) {
  if (indices.empty()) return 0.0;
  double h = 0.0;
  for (const auto& [outcome, p] : model.marginal_table(indices)) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

void require_disjoint(const std::string& target, const std::vector<std::string>& context) {
  if (std::find(context.begin(), context.end(), target) != context.end()) {
    fail("RoleOverlap", "role '" + target + "' is both target and context");
  }
}

void require_distinct(const std::vector<std::string>& roles) {
  std::vector<std::string> sorted = roles;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail("RoleOverlap", "a role is listed twice");
  }
}

void require_permutation(const JointModel& model, const std::string& target,
                         const std::vector<std::string>& order) {
  if (!model.has_role(target)) fail("UnknownRole", "unknown target role '" + target + "'");
  std::vector<std::string> expected = default_context_order(model, target);
  std::vector<std::string> given = order;
  std::sort(expected.begin(), expected.end());
  std::sort(given.begin(), given.end());
  if (expected != given) {
    fail("NotAPermutation", "context order must list every non-target role exactly once");
  }
}

}  // namespace

double entropy(const JointModel& model, const std::vector<std::string>& roles) {
  require_distinct(roles);
  return entropy_of_indices(model, indices_of(model, roles));
}

double conditional_entropy(const JointModel& model, const std::string& target,
                           const std::vector<std::string>& context) {
  require_disjoint(target, context);
  require_distinct(context);
  auto ctx = indices_of(model, context);
  auto joint = ctx;
  joint.push_back(indices_of(model, {target}).front());
  return entropy_of_indices(model, joint) - entropy_of_indices(model, ctx);
}

double mutual_information(const JointModel& model, const std::string& target,
                          const std::vector<std::string>& context) {
  require_disjoint(target, context);
  if (context.empty()) {
    indices_of(model, {target});
    return 0.0;
  }
  return entropy(model, {target}) - conditional_entropy(model, target, context);
}

double conditional_mutual_information(const JointModel& model, const std::string& target,
                                      const std::string& added,
                                      const std::vector<std::string>& given) {
  require_disjoint(target, given);
  require_disjoint(added, given);
  if (target == added) fail("RoleOverlap", "target and added role coincide");
  auto extended = given;
  extended.push_back(added);
  const double v =
      conditional_entropy(model, target, given) - conditional_entropy(model, target, extended);
  return (v < 0.0 && v >= -kClampTolerance) ? 0.0 : v;
}

bool is_markov_equality(const JointModel& model, const std::string& target,
                        const std::string& added, const std::vector<std::string>& given) {
  return conditional_mutual_information(model, target, added, given) <= kTieTolerance;
}

std::vector<std::string> default_context_order(const JointModel& model, const std::string& target) {
  std::vector<std::string> out;
  for (const auto& r : model.roles()) {
    if (r != target) out.push_back(r);
  }
  return out;
}

double max_entropy(const JointModel& model, const std::string& target) {
  return std::log2(static_cast<double>(model.alphabets()[model.role_index(target)].size()));
}

EntropyProfile uncertainty_profile(const JointModel& model, const std::string& target,
                                   const std::vector<std::string>& context_order) {
  require_permutation(model, target, context_order);
  EntropyProfile profile{Objective::uncertainty, {}};
  profile.values.reserve(context_order.size() + 1);
  const auto order = indices_of(model, context_order);
  const auto y = model.role_index(target);
  std::vector<std::size_t> prefix;
  for (std::size_t i = 0; i <= order.size(); ++i) {
    auto joint = prefix;
    joint.push_back(y);
    profile.values.push_back(entropy_of_indices(model, joint) - entropy_of_indices(model, prefix));
    if (i < order.size()) prefix.push_back(order[i]);
  }
  return profile;
}

EntropyProfile predictability_profile(const JointModel& model, const std::string& target,
                                      const std::vector<std::string>& context_order) {
  const EntropyProfile u = uncertainty_profile(model, target, context_order);
  EntropyProfile profile{Objective::predictability, std::vector<double>(u.values.size(), 0.0)};
  const double h = u.values.front();
  for (std::size_t i = 1; i < u.values.size(); ++i) profile.values[i] = h - u.values[i];
  return profile;
}

PlacementSet optimal_placement(const EntropyProfile& profile) {
  PlacementSet best;
  if (profile.values.empty()) return best;
  const bool minimize = profile.kind == Objective::uncertainty;
  const auto [lo, hi] = std::minmax_element(profile.values.begin(), profile.values.end());
  const double extreme = minimize ? *lo : *hi;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    if (std::abs(profile.values[i] - extreme) <= kTieTolerance) best.insert(i);
  }
  return best;
}

PlacementSet optimal_target_placement(const JointModel& model, const std::string& target,
                                      const std::vector<std::string>& context_order,
                                      Objective objective) {
  return optimal_placement(objective == Objective::uncertainty
                               ? uncertainty_profile(model, target, context_order)
                               : predictability_profile(model, target, context_order));
}

PlacementSet optimal_placement_with_transducer(const EntropyProfile& profile,
                                               const CostTransducer& g, double domain_max) {
  const bool uncertainty = profile.kind == Objective::uncertainty;
  g.require(uncertainty ? Direction::increasing : Direction::decreasing, domain_max);
  PlacementSet best;
  if (profile.values.empty()) return best;

  std::vector<double> cost(profile.values.size());
  std::size_t arg = 0;
  for (std::size_t i = 0; i < cost.size(); ++i) {
    cost[i] = g(profile.values[i]);
    if (cost[i] < cost[arg]) arg = i;
  }
  // A placement ties with the optimum when its raw value is within the bit
  // tolerance: for increasing g that is cost <= g(v* + tol), for decreasing g
  // (predictability, maximized) it is cost <= g(v* - tol).
  const double raw = profile.values[arg];
  const double shifted = uncertainty ? raw + kTieTolerance : raw - kTieTolerance;
  const double threshold = std::max(g(shifted), cost[arg]);
  for (std::size_t i = 0; i < cost.size(); ++i) {
    if (cost[i] <= threshold) best.insert(i);
  }
  return best;
}

PlacementSet optimal_placement_with_transducer(const JointModel& model, const std::string& target,
                                               const std::vector<std::string>& context_order,
                                               Objective objective, const CostTransducer& g) {
  const auto profile = objective == Objective::uncertainty
                           ? uncertainty_profile(model, target, context_order)
                           : predictability_profile(model, target, context_order);
  return optimal_placement_with_transducer(profile, g, max_entropy(model, target));
}

}  // namespace wordorder
