#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wordorder/distributions.hpp"

namespace wordorder {

/// Sliding-window block counts of orders 1..max_order over an interned
/// vocabulary. Circular tables wrap windows around the end, so every order
/// has exactly `length` windows (exact statistics of a cyclic source).
struct NGramTable {
  std::size_t max_order = 0;
  std::vector<std::string> vocabulary;
  std::vector<std::map<std::vector<std::uint32_t>, std::uint64_t>> counts;  // counts[j - 1]
  std::vector<std::uint64_t> total_positions;                              // per order
  bool circular = false;

  std::uint64_t count(const TokenSequence& block) const;
  std::size_t distinct(std::size_t order) const { return counts.at(order - 1).size(); }
};

/// Throws rate.EmptySequence.
NGramTable ngram_counts(const TokenSequence& sequence, std::size_t max_order,
                        bool circular = false);

/// Merges tables built over shards (counts add). Both must share max_order.
NGramTable merge(const NGramTable& a, const NGramTable& b);

/// values[i - 1] = H(X_i | X_1..X_{i-1}) in bits, for i = 1..depth.
struct RateProfile {
  std::vector<double> values;

  std::size_t depth() const noexcept { return values.size(); }
  double at(std::size_t i) const { return values.at(i - 1); }
};

struct ProfileOptions {
  /// Orders with fewer windows end the profile; order 1 below it throws
  /// rate.InsufficientData.
  std::uint64_t min_windows = 1;
  /// Stop before an order j >= 2 whose distinct blocks exceed this share of
  /// its windows. Ignored when `cap_depth` is false.
  double coverage_cap = 0.2;
  bool cap_depth = true;
  /// Additive smoothing over all |V|^j blocks; 0 is the plug-in estimator.
  double pseudocount = 0.0;
};

/// Plug-in block entropies H(X_1..X_j), j = 1..max_order (no depth cap).
std::vector<double> block_entropies(const NGramTable& table, double pseudocount = 0.0);

/// Differences of block entropies, depth limited per `options`.
RateProfile conditional_entropy_profile(const NGramTable& table, const ProfileOptions& options = {});

/// Same differencing on an exact joint law over consecutive positions
/// (roles in canonical order are X_1..X_k).
RateProfile exact_profile(const JointModel& positions);

// --- constant entropy rate -----------------------------------------------------

struct CerVerdict {
  bool flat = false;
  double spread = 0.0;            // max - min
  std::size_t max_drop_at = 0;    // position i >= 2 with the largest H_{i-1} - H_i; 0 if none
  double max_drop = 0.0;
  bool non_increasing = false;
};

CerVerdict cer_diagnostic(const RateProfile& profile, double tolerance);

/// Spread band of plug-in profiles (fixed depth, no cap) over i.i.d.
/// resamples of the sequence's own unigram law: mean + 3 standard deviations.
double iid_noise_band(const TokenSequence& sequence, std::size_t depth, std::size_t resamples,
                      std::uint64_t seed);

// --- uniform information density -----------------------------------------------

enum class UidClass { full_uid, strong_uid, neither };

const char* to_string(UidClass c);

struct UidSequence {
  TokenSequence sequence;
  std::vector<double> conditionals;  // p(x_i | x_1..x_{i-1})
  double spread = 0.0;
};

struct UidClassification {
  UidClass kind = UidClass::neither;
  std::size_t support_size = 0;
  double max_spread = 0.0;
  /// Sequence with the largest spread.
  UidSequence worst;
};

inline constexpr std::size_t kUidEnumerationCap = 1'000'000;

/// Strong UID: every supported sequence has constant conditionals.
/// Full UID: strong UID with support equal to the whole Cartesian product of
/// the position alphabets (a single-sequence support is reported as strong).
/// Throws rate.UnsupportedModelSize when the support exceeds `cap`.
UidClassification uid_classify(const JointModel& positions, double tolerance = 1e-9,
                               std::size_t cap = kUidEnumerationCap);

/// Conditional probabilities of one sequence under a reference model over
/// positions. Throws rate.SequenceOutOfSupport for zero-probability prefixes.
UidSequence uid_spread(const TokenSequence& sequence, const JointModel& positions);

// --- Hilberg's law ---------------------------------------------------------------

enum class HilbergVariant { pure, relaxed };

struct HilbergFit {
  double a = 0.0;
  double gamma = 0.0;
  double b = 0.0;
  HilbergVariant variant = HilbergVariant::pure;
  double rms_residual = 0.0;
};

struct HilbergOptions {
  double gamma_min = 0.05;
  double gamma_max = 1.5;
  double gamma_step = 0.005;
  /// Pure variant only: fit log H_i = log a - gamma log i (needs positive values).
  bool log_space = false;
};

/// Least squares over a gamma grid, polished by golden-section search, with a
/// closed-form (a, b) solve per gamma subject to a, b >= 0.
/// Throws rate.DegenerateProfile for constant profiles.
HilbergFit hilberg_fit(const RateProfile& profile, HilbergVariant variant,
                       const HilbergOptions& options = {});

double hilberg_value(const HilbergFit& fit, double i);

struct PeakCost {
  double value = 0.0;
  std::size_t index = 0;  // 1-based, first maximizer
};

PeakCost peak_cost(const RateProfile& profile);

}  // namespace wordorder
