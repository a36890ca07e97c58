#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wordorder {

/// Ordered set of distinct tokens. Position in the list is the symbol index.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& symbol(std::size_t index) const { return symbols_.at(index); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<std::size_t> find(std::string_view symbol) const;
  /// Throws distributions.UnknownSymbol.
  std::size_t index_of(std::string_view symbol) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// One symbol index per role, in the model's canonical role order.
using Outcome = std::vector<std::uint32_t>;
using TokenSequence = std::vector<std::string>;

/// Exact finite joint distribution over a fixed, ordered list of roles.
/// Zero-probability tuples are not stored. Immutable once built.
class JointModel {
 public:
  /// Validates and (when within 1e-12 of unit mass) renormalizes.
  /// Throws NegativeProbability, MassOutOfTolerance, ArityMismatch,
  /// DuplicateRole, DuplicateEntry.
  static JointModel from_outcomes(std::vector<std::string> roles,
                                  std::vector<Alphabet> alphabets,
                                  std::map<Outcome, double> entries);

  const std::vector<std::string>& roles() const noexcept { return roles_; }
  const std::vector<Alphabet>& alphabets() const noexcept { return alphabets_; }
  const std::map<Outcome, double>& entries() const noexcept { return entries_; }
  std::size_t arity() const noexcept { return roles_.size(); }

  /// Throws distributions.UnknownRole.
  std::size_t role_index(std::string_view role) const;
  bool has_role(std::string_view role) const;

  double probability(const std::vector<std::string>& tuple) const;
  double total_mass() const;

  /// Marginal over the given role indices, keyed by outcomes restricted to
  /// those roles in the order given.
  std::map<Outcome, double> marginal_table(const std::vector<std::size_t>& role_indices) const;

 private:
  JointModel() = default;

  std::vector<std::string> roles_;
  std::vector<Alphabet> alphabets_;
  std::map<Outcome, double> entries_;
};

struct TableEntry {
  std::vector<std::string> tuple;
  double p = 0.0;
};

/// Alphabets inferred from the entries, in order of first appearance.
JointModel make_joint(const std::vector<std::string>& roles,
                      const std::vector<TableEntry>& table);
JointModel make_joint(const std::vector<std::string>& roles,
                      const std::vector<Alphabet>& alphabets,
                      const std::vector<TableEntry>& table);

using Marginal = std::vector<std::pair<std::string, double>>;

/// Roles default to x1..xn.
JointModel make_iid(const Marginal& marginal, std::size_t n_roles,
                    std::vector<std::string> role_names = {});

/// Finite-state chain. Rows of `transition` are indexed like `states`.
struct MarkovChain {
  Alphabet states;
  std::vector<double> initial;
  std::vector<std::vector<double>> transition;

  /// Throws NonStochasticRow / MassOutOfTolerance / ArityMismatch.
  void validate() const;
};

MarkovChain make_chain(const Marginal& initial,
                       const std::vector<std::vector<double>>& transition);

/// Joint law of the first `length` states; roles default to x1..x<length>.
JointModel make_markov(const MarkovChain& chain, std::size_t length,
                       std::vector<std::string> role_names = {});

/// Sums out every role not listed; the kept roles stay in canonical order.
JointModel marginalize(const JointModel& model, const std::vector<std::string>& kept_roles);

/// Explicit reordering of roles (must be a permutation of the model's roles).
JointModel reorder(const JointModel& model, const std::vector<std::string>& role_order);

struct SequenceSource {
  enum class Kind { iid, markov, periodic, homogeneous, empirical };

  Kind kind = Kind::homogeneous;
  /// iid: marginal; markov: chain; periodic: repeating block;
  /// homogeneous: single symbol; empirical: stored token sequence.
  Marginal marginal;
  std::optional<MarkovChain> chain;
  TokenSequence block;
  std::string symbol;
  TokenSequence tokens;
  /// Periodic only: fixed start offset into the block. When unset the offset
  /// is drawn uniformly from the seed.
  std::optional<std::size_t> offset;
  std::uint64_t seed = 0;

  static SequenceSource iid(Marginal marginal);
  static SequenceSource markov(MarkovChain chain);
  static SequenceSource periodic(TokenSequence block, std::optional<std::size_t> offset = {});
  static SequenceSource homogeneous(std::string symbol);
  static SequenceSource empirical(TokenSequence tokens);
};

/// Deterministic in (source, length, seed).
TokenSequence generate(const SequenceSource& source, std::size_t length, std::uint64_t seed);
inline TokenSequence generate(const SequenceSource& source, std::size_t length) {
  return generate(source, length, source.seed);
}

/// Uniform random permutation (Fisher-Yates), deterministic per seed.
TokenSequence scramble(TokenSequence sequence, std::uint64_t seed);

/// How the first element of a periodic sequence is distributed.
enum class PeriodicReading {
  /// Position within an arbitrary subsequence: uniform over the block.
  relaxed,
  /// Whole-history reading: the start is fixed, so every element is determined.
  full_history,
};

/// Exact joint law of the first k positions emitted by `source`. Empirical
/// sources yield the cyclic k-window distribution of the stored tokens.
JointModel block_model(const SequenceSource& source, std::size_t k,
                       PeriodicReading reading = PeriodicReading::relaxed);

}  // namespace wordorder
