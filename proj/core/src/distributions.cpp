#include "wordorder/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wordorder/error.hpp"
#include "wordorder/random.hpp"

namespace wordorder {
namespace {

constexpr double kMassTolerance = 1e-12;
// Below this the accumulated sum is treated as already normalized, which keeps
// reading and re-writing a model file byte-stable.
constexpr double kRenormalizeThreshold = 1e-14;

[[noreturn]] void fail(const char* kind, const std::string& message) {
  throw Error("distributions", kind, message);
}

std::vector<std::string> default_roles(std::size_t n, std::vector<std::string> names) {
  if (names.empty()) {
    for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  }
  if (names.size() != n) fail("ArityMismatch", "role name count does not match model arity");
  return names;
}

double mass_of(const Marginal& marginal) {
  double s = 0.0;
  for (const auto& [sym, p] : marginal) {
    if (p < 0.0 || !std::isfinite(p)) fail("NegativeProbability", "negative probability for '" + sym + "'");
    s += p;
  }
  return s;
}

Alphabet alphabet_of(const Marginal& marginal) {
  std::vector<std::string> symbols;
  symbols.reserve(marginal.size());
  for (const auto& entry : marginal) symbols.push_back(entry.first);
  return Alphabet(std::move(symbols));
}

}  // namespace

// --- Alphabet ---------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) fail("EmptyAlphabet", "alphabet must contain at least one symbol");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], i).second) {
      fail("DuplicateSymbol", "duplicate symbol '" + symbols_[i] + "' in alphabet");
    }
  }
}

std::optional<std::size_t> Alphabet::find(std::string_view symbol) const {
  const auto it = index_.find(symbol);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
  if (auto i = find(symbol)) return *i;
  fail("UnknownSymbol", "symbol '" + std::string(symbol) + "' is not in the alphabet");
}

// --- JointModel -------------------------------------------------------------

JointModel JointModel::from_outcomes(std::vector<std::string> roles,
                                     std::vector<Alphabet> alphabets,
                                     std::map<Outcome, double> entries) {
  if (roles.empty()) fail("ArityMismatch", "a model needs at least one role");
  if (alphabets.size() != roles.size()) {
    fail("ArityMismatch", "one alphabet per role is required");
  }
  std::set<std::string> seen;
  for (const auto& r : roles) {
    if (!seen.insert(r).second) fail("DuplicateRole", "duplicate role '" + r + "'");
  }
  double mass = 0.0;
  for (auto it = entries.begin(); it != entries.end();) {
    const auto& [outcome, p] = *it;
    if (outcome.size() != roles.size()) {
      fail("ArityMismatch", "tuple arity " + std::to_string(outcome.size()) +
                                " does not match " + std::to_string(roles.size()) + " roles");
    }
    for (std::size_t r = 0; r < outcome.size(); ++r) {
      if (outcome[r] >= alphabets[r].size()) fail("UnknownSymbol", "symbol index out of range");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) fail("NegativeProbability", "negative or non-finite probability");
    mass += p;
    it = (p == 0.0) ? entries.erase(it) : std::next(it);
  }
  if (std::abs(mass - 1.0) > kMassTolerance) {
    fail("MassOutOfTolerance", "total mass " + std::to_string(mass) + " is not within 1e-12 of 1");
  }
  if (std::abs(mass - 1.0) > kRenormalizeThreshold) {
    for (auto& entry : entries) entry.second /= mass;
  }
  JointModel model;
  model.roles_ = std::move(roles);
  model.alphabets_ = std::move(alphabets);
  model.entries_ = std::move(entries);
  return model;
}

std::size_t JointModel::role_index(std::string_view role) const {
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (roles_[i] == role) return i;
  }
  fail("UnknownRole", "unknown role '" + std::string(role) + "'");
}

bool JointModel::has_role(std::string_view role) const {
  return std::find(roles_.begin(), roles_.end(), role) != roles_.end();
}

double JointModel::probability(const std::vector<std::string>& tuple) const {
  if (tuple.size() != roles_.size()) fail("ArityMismatch", "tuple arity does not match model");
  Outcome key(tuple.size());
  for (std::size_t r = 0; r < tuple.size(); ++r) {
    const auto idx = alphabets_[r].find(tuple[r]);
    if (!idx) return 0.0;
    key[r] = static_cast<std::uint32_t>(*idx);
  }
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

double JointModel::total_mass() const {
  double s = 0.0;
  for (const auto& entry : entries_) s += entry.second;
  return s;
}

std::map<Outcome, double> JointModel::marginal_table(
    const std::vector<std::size_t>& role_indices) const {
  std::map<Outcome, double> out;
  Outcome key(role_indices.size());
  for (const auto& [outcome, p] : entries_) {
    for (std::size_t j = 0; j < role_indices.size(); ++j) key[j] = outcome.at(role_indices[j]);
    out[key] += p;
  }
  return out;
}

// --- constructors -----------------------------------------------------------

JointModel make_joint(const std::vector<std::string>& roles,
                      const std::vector<TableEntry>& table) {
  std::vector<std::vector<std::string>> symbols(roles.size());
  std::vector<std::set<std::string>> seen(roles.size());
  for (const auto& entry : table) {
    if (entry.tuple.size() != roles.size()) {
      fail("ArityMismatch", "tuple arity does not match the number of roles");
    }
    for (std::size_t r = 0; r < roles.size(); ++r) {
      if (seen[r].insert(entry.tuple[r]).second) symbols[r].push_back(entry.tuple[r]);
    }
  }
  std::vector<Alphabet> alphabets;
  for (auto& s : symbols) {
    if (s.empty()) fail("MassOutOfTolerance", "empty probability table");
    alphabets.emplace_back(std::move(s));
  }
  return make_joint(roles, alphabets, table);
}

JointModel make_joint(const std::vector<std::string>& roles,
                      const std::vector<Alphabet>& alphabets,
                      const std::vector<TableEntry>& table) {
  if (alphabets.size() != roles.size()) fail("ArityMismatch", "one alphabet per role is required");
  std::map<Outcome, double> entries;
  for (const auto& entry : table) {
    if (entry.tuple.size() != roles.size()) {
      fail("ArityMismatch", "tuple arity does not match the number of roles");
    }
    Outcome key(roles.size());
    for (std::size_t r = 0; r < roles.size(); ++r) {
      key[r] = static_cast<std::uint32_t>(alphabets[r].index_of(entry.tuple[r]));
    }
    if (!entries.emplace(std::move(key), entry.p).second) {
      fail("DuplicateEntry", "tuple listed more than once");
    }
  }
  return JointModel::from_outcomes(roles, alphabets, std::move(entries));
}

JointModel make_iid(const Marginal& marginal, std::size_t n_roles,
                    std::vector<std::string> role_names) {
  if (n_roles == 0) fail("ArityMismatch", "n_roles must be at least 1");
  const double mass = mass_of(marginal);
  if (std::abs(mass - 1.0) > kMassTolerance) {
    fail("MassOutOfTolerance", "marginal mass is not within 1e-12 of 1");
  }
  Alphabet alphabet = alphabet_of(marginal);
  std::vector<std::uint32_t> support;
  for (std::uint32_t s = 0; s < marginal.size(); ++s) {
    if (marginal[s].second > 0.0) support.push_back(s);
  }
  std::map<Outcome, double> entries;
  Outcome key(n_roles, 0);
  std::vector<std::size_t> digit(n_roles, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t r = 0; r < n_roles; ++r) {
      key[r] = support[digit[r]];
      p *= marginal[key[r]].second;
    }
    entries.emplace(key, p);
    std::size_t r = n_roles;
    while (r > 0 && ++digit[r - 1] == support.size()) digit[--r] = 0;
    if (r == 0) break;
  }
  return JointModel::from_outcomes(default_roles(n_roles, std::move(role_names)),
                                   std::vector<Alphabet>(n_roles, alphabet), std::move(entries));
}

void MarkovChain::validate() const {
  const std::size_t k = states.size();
  if (initial.size() != k || transition.size() != k) {
    fail("ArityMismatch", "initial distribution and transition matrix must match the state count");
  }
  double mass = 0.0;
  for (double p : initial) {
    if (!(p >= 0.0)) fail("NegativeProbability", "negative initial probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > kMassTolerance) fail("MassOutOfTolerance", "initial distribution does not sum to 1");
  for (std::size_t i = 0; i < k; ++i) {
    if (transition[i].size() != k) fail("ArityMismatch", "transition matrix must be square");
    double row = 0.0;
    for (double p : transition[i]) {
      if (!(p >= 0.0)) fail("NonStochasticRow", "negative transition probability");
      row += p;
    }
    if (std::abs(row - 1.0) > kMassTolerance) {
      fail("NonStochasticRow", "transition row for '" + states.symbol(i) + "' sums to " +
                                   std::to_string(row));
    }
  }
}

MarkovChain make_chain(const Marginal& initial,
                       const std::vector<std::vector<double>>& transition) {
  MarkovChain chain{alphabet_of(initial), {}, transition};
  for (const auto& entry : initial) chain.initial.push_back(entry.second);
  chain.validate();
  return chain;
}

JointModel make_markov(const MarkovChain& chain, std::size_t length,
                       std::vector<std::string> role_names) {
  chain.validate();
  if (length == 0) fail("ArityMismatch", "chain length must be at least 1");
  // Breadth-first expansion over positive-probability paths only.
  std::map<Outcome, double> layer;
  for (std::uint32_t s = 0; s < chain.states.size(); ++s) {
    if (chain.initial[s] > 0.0) layer.emplace(Outcome{s}, chain.initial[s]);
  }
  for (std::size_t step = 1; step < length; ++step) {
    std::map<Outcome, double> next;
    for (const auto& [path, p] : layer) {
      const auto& row = chain.transition[path.back()];
      for (std::uint32_t s = 0; s < row.size(); ++s) {
        if (row[s] <= 0.0) continue;
        Outcome extended = path;
        extended.push_back(s);
        next.emplace(std::move(extended), p * row[s]);
      }
    }
    layer = std::move(next);
  }
  return JointModel::from_outcomes(default_roles(length, std::move(role_names)),
                                   std::vector<Alphabet>(length, chain.states), std::move(layer));
}

JointModel marginalize(const JointModel& model, const std::vector<std::string>& kept_roles) {
  if (kept_roles.empty()) fail("UnknownRole", "at least one role must be kept");
  std::vector<bool> keep(model.arity(), false);
  for (const auto& r : kept_roles) keep[model.role_index(r)] = true;
  std::vector<std::size_t> indices;
  std::vector<std::string> roles;
  std::vector<Alphabet> alphabets;
  for (std::size_t i = 0; i < model.arity(); ++i) {
    if (!keep[i]) continue;
    indices.push_back(i);
    roles.push_back(model.roles()[i]);
    alphabets.push_back(model.alphabets()[i]);
  }
  return JointModel::from_outcomes(std::move(roles), std::move(alphabets),
                                   model.marginal_table(indices));
}

JointModel reorder(const JointModel& model, const std::vector<std::string>& role_order) {
  if (role_order.size() != model.arity()) {
    fail("NotAPermutation", "reorder needs every role exactly once");
  }
  std::vector<std::size_t> indices;
  std::vector<bool> used(model.arity(), false);
  std::vector<Alphabet> alphabets;
  for (const auto& r : role_order) {
    const auto i = model.role_index(r);
    if (used[i]) fail("NotAPermutation", "role '" + r + "' listed twice");
    used[i] = true;
    indices.push_back(i);
    alphabets.push_back(model.alphabets()[i]);
  }
  return JointModel::from_outcomes(role_order, std::move(alphabets), model.marginal_table(indices));
}

// --- sources ----------------------------------------------------------------

SequenceSource SequenceSource::iid(Marginal marginal) {
  const double mass = mass_of(marginal);
  if (marginal.empty() || std::abs(mass - 1.0) > kMassTolerance) {
    fail("MassOutOfTolerance", "iid marginal does not sum to 1");
  }
  alphabet_of(marginal);
  SequenceSource s;
  s.kind = Kind::iid;
  s.marginal = std::move(marginal);
  return s;
}

SequenceSource SequenceSource::markov(MarkovChain chain) {
  chain.validate();
  SequenceSource s;
  s.kind = Kind::markov;
  s.chain = std::move(chain);
  return s;
}

SequenceSource SequenceSource::periodic(TokenSequence block, std::optional<std::size_t> offset) {
  if (block.empty()) fail("EmptyBlock", "periodic block length must be at least 1");
  if (offset && *offset >= block.size()) fail("InvalidOffset", "offset must lie inside the block");
  SequenceSource s;
  s.kind = Kind::periodic;
  s.block = std::move(block);
  s.offset = offset;
  return s;
}

SequenceSource SequenceSource::homogeneous(std::string symbol) {
  SequenceSource s;
  s.kind = Kind::homogeneous;
  s.symbol = std::move(symbol);
  return s;
}

SequenceSource SequenceSource::empirical(TokenSequence tokens) {
  SequenceSource s;
  s.kind = Kind::empirical;
  s.tokens = std::move(tokens);
  return s;
}

namespace {

std::size_t sample_index(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;  // u landed in the rounding gap below 1
}

std::size_t periodic_offset(const SequenceSource& source, Rng& rng) {
  return source.offset ? *source.offset : static_cast<std::size_t>(rng.below(source.block.size()));
}

}  // namespace

TokenSequence generate(const SequenceSource& source, std::size_t length, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "generate"));
  TokenSequence out;
  out.reserve(length);
  switch (source.kind) {
    case SequenceSource::Kind::homogeneous:
      out.assign(length, source.symbol);
      break;
    case SequenceSource::Kind::periodic: {
      const std::size_t start = periodic_offset(source, rng);
      for (std::size_t i = 0; i < length; ++i) {
        out.push_back(source.block[(start + i) % source.block.size()]);
      }
      break;
    }
    case SequenceSource::Kind::empirical:
      if (length > 0 && source.tokens.empty()) fail("EmptySequence", "empirical source has no tokens");
      for (std::size_t i = 0; i < length; ++i) out.push_back(source.tokens[i % source.tokens.size()]);
      break;
    case SequenceSource::Kind::iid: {
      std::vector<double> w;
      for (const auto& entry : source.marginal) w.push_back(entry.second);
      for (std::size_t i = 0; i < length; ++i) out.push_back(source.marginal[sample_index(w, rng)].first);
      break;
    }
    case SequenceSource::Kind::markov: {
      const auto& chain = *source.chain;
      if (length == 0) break;
      std::size_t state = sample_index(chain.initial, rng);
      out.push_back(chain.states.symbol(state));
      for (std::size_t i = 1; i < length; ++i) {
        state = sample_index(chain.transition[state], rng);
        out.push_back(chain.states.symbol(state));
      }
      break;
    }
  }
  return out;
}

TokenSequence scramble(TokenSequence sequence, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "scramble"));
  for (std::size_t i = sequence.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(sequence[i - 1], sequence[j]);
  }
  return sequence;
}

JointModel block_model(const SequenceSource& source, std::size_t k, PeriodicReading reading) {
  if (k == 0) fail("ArityMismatch", "block length must be at least 1");
  switch (source.kind) {
    case SequenceSource::Kind::iid:
      return make_iid(source.marginal, k);
    case SequenceSource::Kind::markov:
      return make_markov(*source.chain, k);
    case SequenceSource::Kind::homogeneous: {
      std::vector<std::string> roles;
      for (std::size_t i = 1; i <= k; ++i) roles.push_back("x" + std::to_string(i));
      return JointModel::from_outcomes(roles, std::vector<Alphabet>(k, Alphabet({source.symbol})),
                                       {{Outcome(k, 0), 1.0}});
    }
    case SequenceSource::Kind::periodic:
    case SequenceSource::Kind::empirical: {
      const TokenSequence& cycle =
          source.kind == SequenceSource::Kind::periodic ? source.block : source.tokens;
      if (cycle.empty()) fail("EmptySequence", "source has no tokens");
      std::vector<std::string> symbols;
      for (const auto& t : cycle) {
        if (std::find(symbols.begin(), symbols.end(), t) == symbols.end()) symbols.push_back(t);
      }
      Alphabet alphabet(symbols);
      std::vector<std::size_t> starts;
      if (source.kind == SequenceSource::Kind::periodic &&
          reading == PeriodicReading::full_history) {
        starts.push_back(source.offset.value_or(0));
      } else {
        starts.resize(cycle.size());
        std::iota(starts.begin(), starts.end(), std::size_t{0});
      }
      std::map<Outcome, std::size_t> counts;
      for (std::size_t start : starts) {
        Outcome key(k);
        for (std::size_t i = 0; i < k; ++i) {
          key[i] = static_cast<std::uint32_t>(alphabet.index_of(cycle[(start + i) % cycle.size()]));
        }
        ++counts[key];
      }
      std::map<Outcome, double> entries;
      for (const auto& [key, c] : counts) {
        entries.emplace(key, static_cast<double>(c) / static_cast<double>(starts.size()));
      }
      std::vector<std::string> roles;
      for (std::size_t i = 1; i <= k; ++i) roles.push_back("x" + std::to_string(i));
      return JointModel::from_outcomes(roles, std::vector<Alphabet>(k, alphabet), std::move(entries));
    }
  }
  fail("UnknownSource", "unsupported source kind");
}

}  // namespace wordorder
