#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wordorder {

struct TypeEntry {
  std::string type;
  double probability = 0.0;
  std::uint32_t length = 0;
};

/// Types with code lengths in symbol units. Lengths of 0 (full reduction)
/// are only accepted when `allow_full_reduction` is set.
struct TypeTable {
  std::vector<TypeEntry> entries;
  bool allow_full_reduction = false;

  /// Throws coding.NegativeProbability, coding.MassOutOfTolerance,
  /// coding.InvalidLength, coding.DuplicateEntry.
  void validate() const;
  std::vector<double> probabilities() const;
  std::vector<std::uint32_t> lengths() const;
};

struct ContextEntry {
  std::vector<std::string> context;  // x_1..x_n
  std::string target;                // y
  double probability = 0.0;          // joint p(x_1..x_n, y)
  std::uint32_t length = 0;
};

struct ContextTable {
  std::size_t order = 0;
  std::vector<ContextEntry> entries;
  bool allow_full_reduction = false;

  /// As TypeTable::validate, plus coding.ArityMismatch for contexts whose
  /// size differs from `order`.
  void validate() const;
  /// Targets in first-appearance order.
  std::vector<std::string> targets() const;
  /// p(y); throws coding.UnknownTarget.
  double target_mass(const std::string& target) const;
};

/// Collapses an order-0 context table to the plain type table.
TypeTable to_type_table(const ContextTable& table);

/// l_i = ceil(-log2 p_i). Values within 1e-12 of an integer snap to it so
/// exact powers of two are not pushed up by rounding. Lengths are raised to
/// 1 unless full reduction is allowed. Throws coding.ZeroProbability.
std::vector<std::uint32_t> optimal_lengths(const std::vector<double>& probabilities,
                                           bool allow_full_reduction = false);

double ideal_length(double probability);
double kraft_sum(const std::vector<std::uint32_t>& lengths);
double table_entropy(const TypeTable& table);

double mean_length(const TypeTable& table);
double contextual_mean_length(const ContextTable& table);
/// L_n(y); 0 for a listed target whose entries all have zero mass.
double per_target_length(const ContextTable& table, const std::string& target);
/// M_n(y) = L_n(y) / p(y). Throws coding.ZeroTargetMass.
double renormalized_length(const ContextTable& table, const std::string& target);

/// Tie-corrected tau-b. Throws coding.TooFewPairs (< 2) and coding.AllTied
/// when either variable is constant.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

struct AbbreviationVerdict {
  bool holds = false;
  std::optional<double> tau;  // empty when all tied
  bool all_tied = false;
};

/// holds iff tau(p, l) <= 1e-12; vacuously true when tau is undefined.
AbbreviationVerdict abbreviation_check(const TypeTable& table);
AbbreviationVerdict abbreviation_check(const ContextTable& table);
/// Same check over the entries of a single target y.
AbbreviationVerdict abbreviation_check(const ContextTable& table, const std::string& target);

/// Gives the shortest lengths of the multiset to the most probable types.
/// Ties in probability keep input order. Throws coding.ArityMismatch.
std::vector<std::uint32_t> assign_lengths_by_rank(const std::vector<double>& probabilities,
                                                  std::vector<std::uint32_t> lengths);

}  // namespace wordorder
