#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wordorder {

/// The six orders of subject, verb and object, listed around the ring of
/// adjacent swaps: SOV - SVO - VSO - VOS - OVS - OSV - SOV.
enum class WordOrder : std::uint8_t { SOV, SVO, VSO, VOS, OVS, OSV };

inline constexpr std::array<WordOrder, 6> kAllOrders = {
    WordOrder::SOV, WordOrder::SVO, WordOrder::VSO,
    WordOrder::VOS, WordOrder::OVS, WordOrder::OSV};

inline constexpr std::size_t index_of(WordOrder o) noexcept { return static_cast<std::size_t>(o); }

std::string_view to_string(WordOrder o) noexcept;
std::optional<WordOrder> parse_order(std::string_view text) noexcept;
/// Throws ring.UnknownOrder.
WordOrder order_from_string(std::string_view text);

/// Minimum number of adjacent-constituent swaps turning a into b (0..3).
int ring_distance(WordOrder a, WordOrder b) noexcept;

/// The two orders one adjacent swap away.
std::set<WordOrder> neighbors(WordOrder o);

enum class Constituent { subject, verb, object };

/// Orders that put the target constituent last.
std::set<WordOrder> triple_optimal_orders(Constituent target);

enum class Filter { dlm, verb_uncertainty, nominal_uncertainty, agent_first };

std::string_view to_string(Filter f) noexcept;
/// Throws ring.UnknownFilter.
Filter filter_from_string(std::string_view text);

/// Orders favoured by a filter: dlm -> verb-central {SVO, OVS};
/// verb_uncertainty -> verb-final {SOV, OSV}; nominal_uncertainty ->
/// verb-initial {VSO, VOS}; agent_first -> subject-initial {SOV, SVO}.
std::set<WordOrder> favoured_orders(Filter f);

/// Qualitative destination prediction by set logic: ring only gives the
/// nearest neighbours, a filter alone gives its favoured orders, both give
/// the intersection. Sources other than SOV and SVO throw
/// ring.UnsupportedSource. Result is in canonical order.
std::vector<WordOrder> predicted_destinations(WordOrder source, bool use_ring,
                                              std::optional<Filter> filter);

struct RingDecay {
  enum class Kind { exponential, inverse_power, tabulated };

  Kind kind = Kind::exponential;
  double parameter = 1.0;              // beta (may be +inf) or alpha
  std::array<double, 3> table{1, 1, 1};  // weights for distances 1..3

  static RingDecay exponential(double beta) { return {Kind::exponential, beta, {}}; }
  static RingDecay inverse_power(double alpha) { return {Kind::inverse_power, alpha, {}}; }
  static RingDecay tabulated(std::array<double, 3> w) { return {Kind::tabulated, 0.0, w}; }

  /// Weight at ring distance d in 1..3.
  double operator()(int d) const;
};

struct RingKernel {
  RingDecay decay = RingDecay::exponential(1.0);
  /// Active filters and their multiplicative weights on favoured destinations.
  std::map<Filter, double> filters;
  double self_weight = 0.0;

  /// Throws ring.InvalidKernel: decay must be positive and non-increasing over
  /// distances 1..3, multipliers and self weight non-negative.
  void validate() const;
};

using OrderDistribution = std::array<double, 6>;
using TransitionMatrix = std::array<OrderDistribution, 6>;

/// Row o: weight(o -> o') = decay(d(o, o')) * product of active multipliers
/// favouring o'; weight(o -> o) = self_weight; rows normalized.
/// Throws ring.DegenerateRow when a row has no positive weight.
TransitionMatrix transition_matrix(const RingKernel& kernel);

/// Exact law after `steps` transitions from `initial`.
OrderDistribution propagate(const TransitionMatrix& matrix, OrderDistribution initial,
                            std::size_t steps);

OrderDistribution point_mass(WordOrder o);

struct Trajectory {
  std::size_t ensemble_size = 0;
  /// counts[t][o]: chains in order o after t steps (t = 0..steps).
  std::vector<std::array<std::uint64_t, 6>> counts;

  OrderDistribution distribution(std::size_t step) const;
  WordOrder modal(std::size_t step) const;
};

/// Independent chains from `start`; chain i draws from a seed-derived stream
/// so results do not depend on `workers`.
Trajectory evolve(const RingKernel& kernel, WordOrder start, std::size_t steps,
                  std::size_t ensemble_size, std::uint64_t seed, unsigned workers = 1);

// --- reference frequencies ---------------------------------------------------

struct FrequencyRow {
  std::string label;
  std::vector<WordOrder> members;  // empty for "no dominant order"
  int languages = 0;
  double language_pct = 0.0;  // as printed
  int families = 0;
  double family_pct = 0.0;  // as printed
};

struct ReferenceFrequencies {
  std::vector<FrequencyRow> orders;   // the six orders, canonical order
  FrequencyRow no_dominant;
  std::vector<FrequencyRow> grouped;  // **V, *V*, V**
  int total_languages = 0;
  int total_families = 0;
};

/// Dominant-order counts in world languages and families.
const ReferenceFrequencies& reference_frequencies();

/// Language counts of the six orders renormalized to sum to 1.
OrderDistribution reference_distribution();

struct IntegrityCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  bool ok = false;
};

/// Totals, grouped sums and printed-vs-recomputed percentages (tolerance in
/// percentage points).
std::vector<IntegrityCheck> integrity_checks(const ReferenceFrequencies& ref,
                                             double pct_tolerance = 0.05);

struct RankAgreement {
  WordOrder higher;
  WordOrder lower;
  bool agrees = false;
};

struct ReferenceComparison {
  double total_variation = 0.0;
  std::vector<RankAgreement> ranks;  // all 15 pairs of the reference ranking
};

ReferenceComparison compare_to_reference(const OrderDistribution& distribution);

}  // namespace wordorder
