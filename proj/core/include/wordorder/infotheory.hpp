#pragma once

#include <set>
#include <string>
#include <vector>

#include "wordorder/distributions.hpp"
#include "wordorder/transducer.hpp"

namespace wordorder {

// All quantities are in bits.

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kClampTolerance = 1e-12;

double entropy(const JointModel& model, const std::vector<std::string>& roles);

/// H(target | context) = H(target, context) - H(context).
/// Throws infotheory.RoleOverlap when target is among the context roles.
double conditional_entropy(const JointModel& model, const std::string& target,
                           const std::vector<std::string>& context);

/// I(target; context) = H(target) - H(target | context); exactly 0 for an
/// empty context.
double mutual_information(const JointModel& model, const std::string& target,
                          const std::vector<std::string>& context);

/// I(target; added | given). Values in [-1e-12, 0) are clamped to 0.
double conditional_mutual_information(const JointModel& model, const std::string& target,
                                      const std::string& added,
                                      const std::vector<std::string>& given);

/// True iff the conditional mutual information is at most 1e-9, i.e. adding
/// `added` to `given` leaves the uncertainty about `target` unchanged.
bool is_markov_equality(const JointModel& model, const std::string& target,
                        const std::string& added, const std::vector<std::string>& given);

enum class Objective { uncertainty, predictability };

/// values[i] is indexed by context size i = 0..n.
struct EntropyProfile {
  Objective kind = Objective::uncertainty;
  std::vector<double> values;

  std::size_t context_size() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// values[i] = H(target | first i roles of context_order).
/// Throws infotheory.NotAPermutation unless context_order lists every
/// non-target role exactly once.
EntropyProfile uncertainty_profile(const JointModel& model, const std::string& target,
                                   const std::vector<std::string>& context_order);

/// values[i] = H(target) - uncertainty[i]; values[0] = 0.
EntropyProfile predictability_profile(const JointModel& model, const std::string& target,
                                      const std::vector<std::string>& context_order);

/// Placement = number of context elements produced before the target.
using PlacementSet = std::set<std::size_t>;

/// Full argmin (uncertainty) or argmax (predictability) set over i = 0..n,
/// with ties within 1e-9.
PlacementSet optimal_target_placement(const JointModel& model, const std::string& target,
                                      const std::vector<std::string>& context_order,
                                      Objective objective);

PlacementSet optimal_placement(const EntropyProfile& profile);

/// Minimizes the transduced cost g[value]. For uncertainty `g` must be
/// strictly increasing; for predictability strictly decreasing (so that
/// minimizing the cost maximizes predictability). The 1e-9 bit tie tolerance
/// is carried through g, so ties are judged on the same scale as the raw
/// profile.
PlacementSet optimal_placement_with_transducer(const JointModel& model, const std::string& target,
                                               const std::vector<std::string>& context_order,
                                               Objective objective,
                                               const CostTransducer& transducer);

PlacementSet optimal_placement_with_transducer(const EntropyProfile& profile,
                                               const CostTransducer& transducer,
                                               double domain_max);

/// Context roles in canonical model order, excluding the target.
std::vector<std::string> default_context_order(const JointModel& model, const std::string& target);

/// log2 of the target alphabet size: the largest entropy the target can have.
double max_entropy(const JointModel& model, const std::string& target);

}  // namespace wordorder
