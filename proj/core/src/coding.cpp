#include "wordorder/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wordorder/error.hpp"

namespace wordorder {
namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kSnap = 1e-12;

[[noreturn]] void fail(const char* kind, const std::string& message) {
  throw Error("coding", kind, message);
}

void check_entry(double p, std::uint32_t length, bool allow_zero) {
  if (!(p >= 0.0) || !std::isfinite(p)) fail("NegativeProbability", "probabilities must be finite and >= 0");
  if (length == 0 && !allow_zero) {
    fail("InvalidLength", "zero-length codes need full reduction to be allowed");
  }
}

void check_mass(double total) {
  if (std::abs(total - 1.0) > kMassTolerance) {
    fail("MassOutOfTolerance", "probabilities sum to " + std::to_string(total));
  }
}

AbbreviationVerdict verdict_of(const std::vector<double>& p, const std::vector<double>& l) {
  AbbreviationVerdict v;
  try {
    v.tau = kendall_tau(p, l);
    v.holds = *v.tau <= 1e-12;
  } catch (const Error& e) {
    if (e.kind() != "AllTied") throw;
    v.all_tied = true;
    v.holds = true;
  }
  return v;
}

}  // namespace

void TypeTable::validate() const {
  double total = 0.0;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    check_entry(e.probability, e.length, allow_full_reduction);
    if (!seen.insert(e.type).second) fail("DuplicateEntry", "type '" + e.type + "' listed twice");
    total += e.probability;
  }
  check_mass(total);
}

std::vector<double> TypeTable::probabilities() const {
  std::vector<double> out;
  for (const auto& e : entries) out.push_back(e.probability);
  return out;
}

std::vector<std::uint32_t> TypeTable::lengths() const {
  std::vector<std::uint32_t> out;
  for (const auto& e : entries) out.push_back(e.length);
  return out;
}

void ContextTable::validate() const {
  double total = 0.0;
  std::set<std::pair<std::vector<std::string>, std::string>> seen;
  for (const auto& e : entries) {
    if (e.context.size() != order) {
      fail("ArityMismatch", "context of size " + std::to_string(e.context.size()) +
                                " in a table of order " + std::to_string(order));
    }
    check_entry(e.probability, e.length, allow_full_reduction);
    if (!seen.insert({e.context, e.target}).second) {
      fail("DuplicateEntry", "context/target pair for '" + e.target + "' listed twice");
    }
    total += e.probability;
  }
  check_mass(total);
}

std::vector<std::string> ContextTable::targets() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (std::find(out.begin(), out.end(), e.target) == out.end()) out.push_back(e.target);
  }
  return out;
}

double ContextTable::target_mass(const std::string& target) const {
  bool found = false;
  double mass = 0.0;
  for (const auto& e : entries) {
    if (e.target == target) {
      found = true;
      mass += e.probability;
    }
  }
  if (!found) fail("UnknownTarget", "target '" + target + "' not in table");
  return mass;
}

TypeTable to_type_table(const ContextTable& table) {
  if (table.order != 0) fail("ArityMismatch", "only order-0 tables collapse to type tables");
  TypeTable out;
  out.allow_full_reduction = table.allow_full_reduction;
  for (const auto& e : table.entries) out.entries.push_back({e.target, e.probability, e.length});
  return out;
}

double ideal_length(double probability) { return -std::log2(probability); }

std::vector<std::uint32_t> optimal_lengths(const std::vector<double>& probabilities,
                                           bool allow_full_reduction) {
  std::vector<std::uint32_t> out;
  out.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p > 0.0)) fail("ZeroProbability", "optimal lengths need strictly positive probabilities");
    const double ideal = ideal_length(p);
    const double nearest = std::round(ideal);
    const double l = std::abs(ideal - nearest) <= kSnap ? nearest : std::ceil(ideal);
    auto length = static_cast<std::uint32_t>(std::max(0.0, l));
    if (length == 0 && !allow_full_reduction) length = 1;
    out.push_back(length);
  }
  return out;
}

double kraft_sum(const std::vector<std::uint32_t>& lengths) {
  double s = 0.0;
  for (auto l : lengths) s += std::ldexp(1.0, -static_cast<int>(l));
  return s;
}

double table_entropy(const TypeTable& table) {
  double h = 0.0;
  for (const auto& e : table.entries) {
    if (e.probability > 0.0) h -= e.probability * std::log2(e.probability);
  }
  return h;
}

double mean_length(const TypeTable& table) {
  double s = 0.0;
  for (const auto& e : table.entries) s += e.probability * e.length;
  return s;
}

double contextual_mean_length(const ContextTable& table) {
  double s = 0.0;
  for (const auto& e : table.entries) s += e.probability * e.length;
  return s;
}

double per_target_length(const ContextTable& table, const std::string& target) {
  bool found = false;
  double s = 0.0;
  for (const auto& e : table.entries) {
    if (e.target != target) continue;
    found = true;
    s += e.probability * e.length;
  }
  if (!found) fail("UnknownTarget", "target '" + target + "' not in table");
  return s;
}

double renormalized_length(const ContextTable& table, const std::string& target) {
  const double mass = table.target_mass(target);
  if (!(mass > 0.0)) fail("ZeroTargetMass", "target '" + target + "' has zero probability");
  return per_target_length(table, target) / mass;
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail("ArityMismatch", "tau needs paired samples");
  if (x.size() < 2) fail("TooFewPairs", "tau needs at least two pairs");
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  const long long n = static_cast<long long>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = (x[i] < x[j]) - (x[i] > x[j]);
      const int sy = (y[i] < y[j]) - (y[i] > y[j]);
      if (sx == 0) ++tied_x;
      if (sy == 0) ++tied_y;
      if (sx * sy > 0) ++concordant;
      if (sx * sy < 0) ++discordant;
    }
  }
  const long long pairs = n * (n - 1) / 2;
  const double denom =
      std::sqrt(static_cast<double>(pairs - tied_x)) * std::sqrt(static_cast<double>(pairs - tied_y));
  if (denom == 0.0) fail("AllTied", "correlation undefined: one variable is constant");
  // Rounding in the denominator can push a perfect correlation past +-1.
  return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0, 1.0);
}

AbbreviationVerdict abbreviation_check(const TypeTable& table) {
  std::vector<double> p, l;
  for (const auto& e : table.entries) {
    p.push_back(e.probability);
    l.push_back(e.length);
  }
  return verdict_of(p, l);
}

AbbreviationVerdict abbreviation_check(const ContextTable& table) {
  std::vector<double> p, l;
  for (const auto& e : table.entries) {
    p.push_back(e.probability);
    l.push_back(e.length);
  }
  return verdict_of(p, l);
}

AbbreviationVerdict abbreviation_check(const ContextTable& table, const std::string& target) {
  std::vector<double> p, l;
  for (const auto& e : table.entries) {
    if (e.target != target) continue;
    p.push_back(e.probability);
    l.push_back(e.length);
  }
  if (p.empty()) fail("UnknownTarget", "target '" + target + "' not in table");
  return verdict_of(p, l);
}

std::vector<std::uint32_t> assign_lengths_by_rank(const std::vector<double>& probabilities,
                                                  std::vector<std::uint32_t> lengths) {
  if (probabilities.size() != lengths.size()) {
    fail("ArityMismatch", "need one length per probability");
  }
  std::vector<std::size_t> order(probabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return probabilities[a] > probabilities[b]; });
  std::sort(lengths.begin(), lengths.end());
  std::vector<std::uint32_t> out(lengths.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = lengths[r];
  return out;
}

}  // namespace wordorder
