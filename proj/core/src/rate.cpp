#include "wordorder/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "wordorder/error.hpp"
#include "wordorder/random.hpp"

namespace wordorder {
namespace {

[[noreturn]] void fail(const char* kind, const std::string& message) {
  throw Error("rate", kind, message);
}

double plugin_entropy(const std::map<std::vector<std::uint32_t>, std::uint64_t>& counts,
                      std::uint64_t windows, double pseudocount, double possible_blocks) {
  const double n = static_cast<double>(windows);
  double h = 0.0;
  if (pseudocount <= 0.0) {
    for (const auto& [block, c] : counts) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log2(p);
    }
    return h;
  }
  const double denom = n + pseudocount * possible_blocks;
  for (const auto& [block, c] : counts) {
    const double p = (static_cast<double>(c) + pseudocount) / denom;
    h -= p * std::log2(p);
  }
  const double unseen = possible_blocks - static_cast<double>(counts.size());
  if (unseen > 0.0) {
    const double q = pseudocount / denom;
    h -= unseen * q * std::log2(q);
  }
  return h;
}

double entropy_of(const std::map<Outcome, double>& table) {
  double h = 0.0;
  for (const auto& [key, p] : table) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double profile_spread(const RateProfile& p) {
  if (p.values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
  return *hi - *lo;
}

}  // namespace

// --- counting ---------------------------------------------------------------------

std::uint64_t NGramTable::count(const TokenSequence& block) const {
  if (block.empty() || block.size() > max_order) return 0;
  std::vector<std::uint32_t> key;
  for (const auto& t : block) {
    const auto it = std::find(vocabulary.begin(), vocabulary.end(), t);
    if (it == vocabulary.end()) return 0;
    key.push_back(static_cast<std::uint32_t>(it - vocabulary.begin()));
  }
  const auto& table = counts[block.size() - 1];
  const auto it = table.find(key);
  return it == table.end() ? 0 : it->second;
}

NGramTable ngram_counts(const TokenSequence& sequence, std::size_t max_order, bool circular) {
  if (sequence.empty()) fail("EmptySequence", "cannot count blocks of an empty sequence");
  if (max_order == 0) fail("InvalidOrder", "max_order must be at least 1");
  NGramTable table;
  table.max_order = max_order;
  table.circular = circular;
  table.counts.resize(max_order);
  table.total_positions.assign(max_order, 0);

  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::uint32_t> coded;
  coded.reserve(sequence.size());
  for (const auto& t : sequence) {
    const auto [it, inserted] = ids.emplace(t, static_cast<std::uint32_t>(table.vocabulary.size()));
    if (inserted) table.vocabulary.push_back(t);
    coded.push_back(it->second);
  }
  // Vocabulary in sorted order keeps block keys independent of first appearance.
  std::vector<std::uint32_t> rank(table.vocabulary.size());
  {
    std::vector<std::uint32_t> perm(table.vocabulary.size());
    std::iota(perm.begin(), perm.end(), 0u);
    std::sort(perm.begin(), perm.end(),
              [&](auto x, auto y) { return table.vocabulary[x] < table.vocabulary[y]; });
    std::vector<std::string> sorted;
    for (std::uint32_t r = 0; r < perm.size(); ++r) {
      rank[perm[r]] = r;
      sorted.push_back(table.vocabulary[perm[r]]);
    }
    table.vocabulary = std::move(sorted);
    for (auto& c : coded) c = rank[c];
  }

  const std::size_t n = coded.size();
  for (std::size_t order = 1; order <= max_order; ++order) {
    const std::size_t windows = circular ? n : (n >= order ? n - order + 1 : 0);
    auto& bucket = table.counts[order - 1];
    std::vector<std::uint32_t> key(order);
    for (std::size_t start = 0; start < windows; ++start) {
      for (std::size_t k = 0; k < order; ++k) key[k] = coded[(start + k) % n];
      ++bucket[key];
    }
    table.total_positions[order - 1] = windows;
  }
  return table;
}

NGramTable merge(const NGramTable& a, const NGramTable& b) {
  if (a.max_order != b.max_order || a.circular != b.circular) {
    fail("IncompatibleTables", "tables must share max_order and windowing");
  }
  NGramTable out;
  out.max_order = a.max_order;
  out.circular = a.circular;
  std::set_union(a.vocabulary.begin(), a.vocabulary.end(), b.vocabulary.begin(),
                 b.vocabulary.end(), std::back_inserter(out.vocabulary));
  auto remap = [&](const NGramTable& t) {
    std::vector<std::uint32_t> m;
    for (const auto& v : t.vocabulary) {
      m.push_back(static_cast<std::uint32_t>(
          std::lower_bound(out.vocabulary.begin(), out.vocabulary.end(), v) - out.vocabulary.begin()));
    }
    return m;
  };
  const auto ma = remap(a);
  const auto mb = remap(b);
  out.counts.resize(out.max_order);
  out.total_positions.assign(out.max_order, 0);
  for (std::size_t j = 0; j < out.max_order; ++j) {
    for (const auto* src : {&a, &b}) {
      const auto& m = src == &a ? ma : mb;
      for (const auto& [key, c] : src->counts[j]) {
        std::vector<std::uint32_t> k2(key.size());
        for (std::size_t i = 0; i < key.size(); ++i) k2[i] = m[key[i]];
        out.counts[j][k2] += c;
      }
      out.total_positions[j] += src->total_positions[j];
    }
  }
  return out;
}

// --- profiles ----------------------------------------------------------------------

std::vector<double> block_entropies(const NGramTable& table, double pseudocount) {
  std::vector<double> h;
  const double v = static_cast<double>(table.vocabulary.size());
  for (std::size_t j = 1; j <= table.max_order; ++j) {
    const auto windows = table.total_positions[j - 1];
    if (windows == 0) break;
    h.push_back(plugin_entropy(table.counts[j - 1], windows, pseudocount,
                               std::pow(v, static_cast<double>(j))));
  }
  return h;
}

RateProfile conditional_entropy_profile(const NGramTable& table, const ProfileOptions& options) {
  if (table.total_positions.empty() || table.total_positions[0] < options.min_windows ||
      table.total_positions[0] == 0) {
    fail("InsufficientData", "fewer windows than the configured floor");
  }
  std::size_t depth = 0;
  for (std::size_t j = 1; j <= table.max_order; ++j) {
    const auto windows = table.total_positions[j - 1];
    if (windows == 0 || windows < options.min_windows) break;
    if (options.cap_depth && j >= 2 &&
        static_cast<double>(table.distinct(j)) > options.coverage_cap * static_cast<double>(windows)) {
      break;
    }
    depth = j;
  }
  const auto h = block_entropies(table, options.pseudocount);
  RateProfile profile;
  double previous = 0.0;
  for (std::size_t j = 0; j < depth; ++j) {
    profile.values.push_back(h[j] - previous);
    previous = h[j];
  }
  return profile;
}

RateProfile exact_profile(const JointModel& positions) {
  RateProfile profile;
  std::vector<std::size_t> prefix;
  double previous = 0.0;
  for (std::size_t i = 0; i < positions.arity(); ++i) {
    prefix.push_back(i);
    const double h = entropy_of(positions.marginal_table(prefix));
    profile.values.push_back(h - previous);
    previous = h;
  }
  return profile;
}

// --- CER -----------------------------------------------------------------------------

CerVerdict cer_diagnostic(const RateProfile& profile, double tolerance) {
  if (profile.values.empty()) fail("EmptyProfile", "profile has no values");
  CerVerdict v;
  v.spread = profile_spread(profile);
  v.flat = v.spread <= tolerance;
  v.non_increasing = true;
  for (std::size_t i = 1; i < profile.values.size(); ++i) {
    const double drop = profile.values[i - 1] - profile.values[i];
    if (drop > v.max_drop) {
      v.max_drop = drop;
      v.max_drop_at = i + 1;
    }
    if (drop < -tolerance) v.non_increasing = false;
  }
  return v;
}

double iid_noise_band(const TokenSequence& sequence, std::size_t depth, std::size_t resamples,
                      std::uint64_t seed) {
  if (sequence.empty()) fail("EmptySequence", "cannot resample an empty sequence");
  if (resamples < 2) fail("InvalidResamples", "at least two resamples are needed");
  // Unigram law of the sequence, in sorted symbol order.
  std::map<std::string, std::uint64_t> freq;
  for (const auto& t : sequence) ++freq[t];
  Marginal law;
  for (const auto& [sym, c] : freq) {
    law.emplace_back(sym, static_cast<double>(c) / static_cast<double>(sequence.size()));
  }
  double total = 0.0;
  for (const auto& e : law) total += e.second;
  for (auto& e : law) e.second /= total;
  const auto source = SequenceSource::iid(law);

  ProfileOptions fixed;
  fixed.cap_depth = false;
  std::vector<double> spreads;
  for (std::size_t r = 0; r < resamples; ++r) {
    const auto sample = generate(source, sequence.size(), derive_seed(seed, r));
    const auto profile = conditional_entropy_profile(ngram_counts(sample, depth), fixed);
    spreads.push_back(profile_spread(profile));
  }
  const double mean = std::accumulate(spreads.begin(), spreads.end(), 0.0) / spreads.size();
  double var = 0.0;
  for (double s : spreads) var += (s - mean) * (s - mean);
  var /= static_cast<double>(spreads.size() - 1);
  return mean + 3.0 * std::sqrt(var);
}

// --- UID -------------------------------------------------------------------------------

const char* to_string(UidClass c) {
  switch (c) {
    case UidClass::full_uid: return "full_uid";
    case UidClass::strong_uid: return "strong_uid";
    case UidClass::neither: return "neither";
  }
  return "?";
}

namespace {

std::vector<std::map<Outcome, double>> prefix_tables(const JointModel& positions) {
  std::vector<std::map<Outcome, double>> tables;
  std::vector<std::size_t> prefix;
  for (std::size_t i = 0; i < positions.arity(); ++i) {
    prefix.push_back(i);
    tables.push_back(positions.marginal_table(prefix));
  }
  return tables;
}

UidSequence conditionals_of(const Outcome& outcome, const JointModel& positions,
                            const std::vector<std::map<Outcome, double>>& tables) {
  UidSequence s;
  double previous = 1.0;
  Outcome prefix;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    prefix.push_back(outcome[i]);
    s.sequence.push_back(positions.alphabets()[i].symbol(outcome[i]));
    const auto it = tables[i].find(prefix);
    const double p = it == tables[i].end() ? 0.0 : it->second;
    if (p <= 0.0) {
      fail("SequenceOutOfSupport", "sequence prefix has zero probability under the model");
    }
    s.conditionals.push_back(p / previous);
    previous = p;
  }
  const auto [lo, hi] = std::minmax_element(s.conditionals.begin(), s.conditionals.end());
  s.spread = *hi - *lo;
  return s;
}

}  // namespace

UidClassification uid_classify(const JointModel& positions, double tolerance, std::size_t cap) {
  if (positions.entries().size() > cap) {
    fail("UnsupportedModelSize", "support of " + std::to_string(positions.entries().size()) +
                                     " sequences exceeds the enumeration cap");
  }
  const auto tables = prefix_tables(positions);
  UidClassification out;
  out.support_size = positions.entries().size();
  bool first = true;
  for (const auto& [outcome, p] : positions.entries()) {
    auto s = conditionals_of(outcome, positions, tables);
    if (first || s.spread > out.max_spread) {
      out.max_spread = s.spread;
      out.worst = std::move(s);
      first = false;
    }
  }
  double product = 1.0;
  for (const auto& a : positions.alphabets()) product *= static_cast<double>(a.size());
  const bool strong = out.max_spread <= tolerance;
  const bool everything = static_cast<double>(out.support_size) == product;
  if (!strong) {
    out.kind = UidClass::neither;
  } else if (everything && out.support_size > 1) {
    out.kind = UidClass::full_uid;
  } else {
    out.kind = UidClass::strong_uid;
  }
  return out;
}

UidSequence uid_spread(const TokenSequence& sequence, const JointModel& positions) {
  if (sequence.size() != positions.arity()) {
    fail("LengthMismatch", "sequence length must equal the number of model positions");
  }
  Outcome outcome;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const auto idx = positions.alphabets()[i].find(sequence[i]);
    if (!idx) fail("SequenceOutOfSupport", "symbol '" + sequence[i] + "' not in the model alphabet");
    outcome.push_back(static_cast<std::uint32_t>(*idx));
  }
  return conditionals_of(outcome, positions, prefix_tables(positions));
}

// --- Hilberg ---------------------------------------------------------------------------

namespace {

struct Candidate {
  double a;
  double b;
  double rss;
};

double rss_of(const std::vector<double>& f, const std::vector<double>& y, double a, double b) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - a * f[i] - b;
    s += r * r;
  }
  return s;
}

// min sum (y - a f - b)^2 subject to a >= 0, b >= 0 (b fixed at 0 when !with_b).
Candidate solve_nonnegative(const std::vector<double>& f, const std::vector<double>& y,
                            bool with_b) {
  const double n = static_cast<double>(y.size());
  double sf = 0, sy = 0, sff = 0, sfy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sf += f[i];
    sy += y[i];
    sff += f[i] * f[i];
    sfy += f[i] * y[i];
  }
  const double a0 = std::max(0.0, sfy / sff);
  Candidate best{a0, 0.0, rss_of(f, y, a0, 0.0)};
  if (!with_b) return best;

  const double b_only = std::max(0.0, sy / n);
  if (const double r = rss_of(f, y, 0.0, b_only); r < best.rss) best = {0.0, b_only, r};
  const double det = n * sff - sf * sf;
  if (det > 0.0) {
    const double a = (n * sfy - sf * sy) / det;
    const double b = (sy - a * sf) / n;
    if (a >= 0.0 && b >= 0.0) {
      if (const double r = rss_of(f, y, a, b); r < best.rss) best = {a, b, r};
    }
  }
  return best;
}

}  // namespace

HilbergFit hilberg_fit(const RateProfile& profile, HilbergVariant variant,
                       const HilbergOptions& options) {
  const auto& y = profile.values;
  if (y.size() < 3) fail("ProfileTooShort", "Hilberg fitting needs at least three values");
  if (profile_spread(profile) <= 1e-12) {
    fail("DegenerateProfile", "constant profile: the decay exponent is unidentifiable");
  }
  if (!(options.gamma_step > 0.0) || options.gamma_max < options.gamma_min) {
    fail("InvalidGrid", "gamma grid must be non-empty with a positive step");
  }
  const bool log_space = options.log_space && variant == HilbergVariant::pure;
  std::vector<double> log_y;
  if (log_space) {
    for (double v : y) {
      if (!(v > 0.0)) fail("NonPositiveValue", "log-space fitting needs positive values");
      log_y.push_back(std::log(v));
    }
  }

  const auto steps = static_cast<std::size_t>(
      std::floor((options.gamma_max - options.gamma_min) / options.gamma_step + 1e-9));
  std::vector<double> f(y.size());
  auto evaluate = [&](double gamma) {
    HilbergFit fit;
    fit.variant = variant;
    fit.gamma = gamma;
    double rss = 0.0;
    if (log_space) {
      // log y_i = log a - gamma log i: log a is the mean offset.
      double offset = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        offset += log_y[i] + gamma * std::log(static_cast<double>(i + 1));
      }
      offset /= static_cast<double>(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = log_y[i] - offset + gamma * std::log(static_cast<double>(i + 1));
        rss += r * r;
      }
      fit.a = std::exp(offset);
    } else {
      for (std::size_t i = 0; i < y.size(); ++i) f[i] = std::pow(static_cast<double>(i + 1), -gamma);
      const auto c = solve_nonnegative(f, y, variant == HilbergVariant::relaxed);
      fit.a = c.a;
      fit.b = c.b;
      rss = c.rss;
    }
    return std::pair{fit, rss};
  };

  HilbergFit best;
  double best_rss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= steps; ++k) {
    const auto [fit, rss] = evaluate(options.gamma_min + static_cast<double>(k) * options.gamma_step);
    if (rss < best_rss) {
      best_rss = rss;
      best = fit;
    }
  }
  // Golden-section polish inside the neighbouring grid cells.
  double lo = std::max(options.gamma_min, best.gamma - options.gamma_step);
  double hi = std::min(options.gamma_max, best.gamma + options.gamma_step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  auto e1 = evaluate(x1);
  auto e2 = evaluate(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (e1.second <= e2.second) {
      hi = x2;
      x2 = x1;
      e2 = e1;
      x1 = hi - ratio * (hi - lo);
      e1 = evaluate(x1);
    } else {
      lo = x1;
      x1 = x2;
      e1 = e2;
      x2 = lo + ratio * (hi - lo);
      e2 = evaluate(x2);
    }
  }
  for (const auto& e : {e1, e2}) {
    if (e.second < best_rss) {
      best_rss = e.second;
      best = e.first;
    }
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - hilberg_value(best, static_cast<double>(i + 1));
    sq += r * r;
  }
  best.rms_residual = std::sqrt(sq / static_cast<double>(y.size()));
  return best;
}

double hilberg_value(const HilbergFit& fit, double i) { return fit.a * std::pow(i, -fit.gamma) + fit.b; }

PeakCost peak_cost(const RateProfile& profile) {
  if (profile.values.empty()) fail("EmptyProfile", "profile has no values");
  PeakCost out{profile.values[0], 1};
  for (std::size_t i = 1; i < profile.values.size(); ++i) {
    if (profile.values[i] > out.value) out = {profile.values[i], i + 1};
  }
  return out;
}

}  // namespace wordorder
