#include "wordorder/ring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "wordorder/error.hpp"
#include "wordorder/random.hpp"

namespace wordorder {
namespace {

constexpr std::array<std::string_view, 6> kNames = {"SOV", "SVO", "VSO", "VOS", "OVS", "OSV"};

[[noreturn]] void fail(const char* kind, const std::string& message) {
  throw Error("ring", kind, message);
}

WordOrder from_letters(std::string_view letters) {
  auto o = parse_order(letters);
  if (!o) fail("UnknownOrder", "not an S/V/O permutation: " + std::string(letters));
  return *o;
}

std::size_t sample(const OrderDistribution& row, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] <= 0.0) continue;
    acc += row[j];
    last = j;
    if (u < acc) return j;
  }
  return last;
}

}  // namespace

std::string_view to_string(WordOrder o) noexcept { return kNames[index_of(o)]; }

std::optional<WordOrder> parse_order(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<WordOrder>(i);
  }
  return std::nullopt;
}

WordOrder order_from_string(std::string_view text) { return from_letters(text); }

int ring_distance(WordOrder a, WordOrder b) noexcept {
  // Adjacent-swap distance between permutations = number of discordant pairs.
  const auto sa = to_string(a);
  const auto sb = to_string(b);
  int inversions = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (sb.find(sa[i]) > sb.find(sa[j])) ++inversions;
    }
  }
  return inversions;
}

std::set<WordOrder> neighbors(WordOrder o) {
  std::set<WordOrder> out;
  for (std::size_t k = 0; k < 2; ++k) {
    std::string s(to_string(o));
    std::swap(s[k], s[k + 1]);
    out.insert(from_letters(s));
  }
  return out;
}

std::set<WordOrder> triple_optimal_orders(Constituent target) {
  const char last = target == Constituent::verb ? 'V' : target == Constituent::object ? 'O' : 'S';
  std::set<WordOrder> out;
  for (auto o : kAllOrders) {
    if (to_string(o)[2] == last) out.insert(o);
  }
  return out;
}

std::string_view to_string(Filter f) noexcept {
  switch (f) {
    case Filter::dlm: return "dlm";
    case Filter::verb_uncertainty: return "verb_uncertainty";
    case Filter::nominal_uncertainty: return "nominal_uncertainty";
    case Filter::agent_first: return "agent_first";
  }
  return "?";
}

Filter filter_from_string(std::string_view text) {
  for (auto f : {Filter::dlm, Filter::verb_uncertainty, Filter::nominal_uncertainty,
                 Filter::agent_first}) {
    if (to_string(f) == text) return f;
  }
  fail("UnknownFilter", "unknown filter '" + std::string(text) + "'");
}

std::set<WordOrder> favoured_orders(Filter f) {
  switch (f) {
    case Filter::dlm: return {WordOrder::SVO, WordOrder::OVS};
    case Filter::verb_uncertainty: return {WordOrder::SOV, WordOrder::OSV};
    case Filter::nominal_uncertainty: return {WordOrder::VSO, WordOrder::VOS};
    case Filter::agent_first: return {WordOrder::SOV, WordOrder::SVO};
  }
  return {};
}

std::vector<WordOrder> predicted_destinations(WordOrder source, bool use_ring,
                                              std::optional<Filter> filter) {
  if (source != WordOrder::SOV && source != WordOrder::SVO) {
    fail("UnsupportedSource", "predictions are documented only for SOV and SVO sources");
  }
  if (!use_ring && !filter) fail("NoConstraint", "enable the ring, a filter, or both");
  std::set<WordOrder> candidates(kAllOrders.begin(), kAllOrders.end());
  candidates.erase(source);
  if (use_ring) {
    const auto near = neighbors(source);
    std::erase_if(candidates, [&](WordOrder o) { return near.count(o) == 0; });
  }
  if (filter) {
    const auto good = favoured_orders(*filter);
    std::erase_if(candidates, [&](WordOrder o) { return good.count(o) == 0; });
  }
  return {candidates.begin(), candidates.end()};
}

// --- kernel -------------------------------------------------------------------

double RingDecay::operator()(int d) const {
  switch (kind) {
    case Kind::exponential:
      return std::exp(-parameter * d);
    case Kind::inverse_power:
      return std::pow(static_cast<double>(d), -parameter);
    case Kind::tabulated:
      return table.at(static_cast<std::size_t>(d - 1));
  }
  return 0.0;
}

void RingKernel::validate() const {
  if (decay.kind == RingDecay::Kind::tabulated) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (!(decay.table[d] > 0.0)) fail("InvalidKernel", "tabulated decay weights must be positive");
      if (d > 0 && decay.table[d] > decay.table[d - 1]) {
        fail("InvalidKernel", "decay must be non-increasing in ring distance");
      }
    }
  } else if (!(decay.parameter >= 0.0)) {
    fail("InvalidKernel", "decay parameter must be non-negative");
  }
  for (const auto& [f, mult] : filters) {
    if (!(mult >= 0.0) || !std::isfinite(mult)) {
      fail("InvalidKernel", "filter multiplier must be finite and non-negative");
    }
  }
  if (!(self_weight >= 0.0) || !std::isfinite(self_weight)) {
    fail("InvalidKernel", "self weight must be finite and non-negative");
  }
}

TransitionMatrix transition_matrix(const RingKernel& kernel) {
  kernel.validate();
  const bool hard_limit =
      kernel.decay.kind == RingDecay::Kind::exponential && std::isinf(kernel.decay.parameter);
  TransitionMatrix out{};
  for (auto from : kAllOrders) {
    auto& row = out[index_of(from)];
    for (auto to : kAllOrders) {
      if (to == from) {
        row[index_of(to)] = kernel.self_weight;
        continue;
      }
      const int d = ring_distance(from, to);
      double w;
      if (hard_limit) {
        // beta -> infinity: the self weight dominates when present, otherwise
        // only distance-1 moves survive normalization.
        w = (kernel.self_weight == 0.0 && d == 1) ? 1.0 : 0.0;
      } else {
        w = kernel.decay(d);
      }
      for (const auto& [f, mult] : kernel.filters) {
        if (favoured_orders(f).count(to)) w *= mult;
      }
      row[index_of(to)] = w;
    }
    double total = 0.0;
    for (double w : row) total += w;
    if (!(total > 0.0)) {
      fail("DegenerateRow", "all transition weights from " + std::string(to_string(from)) +
                                " are zero");
    }
    for (double& w : row) w /= total;
  }
  return out;
}

OrderDistribution point_mass(WordOrder o) {
  OrderDistribution d{};
  d[index_of(o)] = 1.0;
  return d;
}

OrderDistribution propagate(const TransitionMatrix& matrix, OrderDistribution p,
                            std::size_t steps) {
  for (std::size_t t = 0; t < steps; ++t) {
    OrderDistribution next{};
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) next[j] += p[i] * matrix[i][j];
    }
    p = next;
  }
  return p;
}

OrderDistribution Trajectory::distribution(std::size_t step) const {
  OrderDistribution d{};
  const auto& c = counts.at(step);
  for (std::size_t j = 0; j < 6; ++j) {
    d[j] = static_cast<double>(c[j]) / static_cast<double>(ensemble_size);
  }
  return d;
}

WordOrder Trajectory::modal(std::size_t step) const {
  const auto& c = counts.at(step);
  return static_cast<WordOrder>(std::max_element(c.begin(), c.end()) - c.begin());
}

Trajectory evolve(const RingKernel& kernel, WordOrder start, std::size_t steps,
                  std::size_t ensemble_size, std::uint64_t seed, unsigned workers) {
  if (ensemble_size == 0) fail("InvalidEnsemble", "ensemble size must be at least 1");
  const TransitionMatrix matrix = transition_matrix(kernel);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(ensemble_size)));

  using Counts = std::vector<std::array<std::uint64_t, 6>>;
  std::vector<Counts> partial(workers, Counts(steps + 1, std::array<std::uint64_t, 6>{}));
  auto run_block = [&](unsigned w) {
    const std::size_t lo = ensemble_size * w / workers;
    const std::size_t hi = ensemble_size * (w + 1) / workers;
    auto& counts = partial[w];
    for (std::size_t chain = lo; chain < hi; ++chain) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(chain)));
      std::size_t state = index_of(start);
      ++counts[0][state];
      for (std::size_t t = 1; t <= steps; ++t) {
        state = sample(matrix[state], rng);
        ++counts[t][state];
      }
    }
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }

  Trajectory out{ensemble_size, Counts(steps + 1, std::array<std::uint64_t, 6>{})};
  for (const auto& counts : partial) {
    for (std::size_t t = 0; t <= steps; ++t) {
      for (std::size_t j = 0; j < 6; ++j) out.counts[t][j] += counts[t][j];
    }
  }
  return out;
}

// --- reference frequencies -----------------------------------------------------

const ReferenceFrequencies& reference_frequencies() {
  static const ReferenceFrequencies table = [] {
    using W = WordOrder;
    ReferenceFrequencies t;
    t.orders = {
        {"SOV", {W::SOV}, 2275, 43.3, 239, 65.3},
        {"SVO", {W::SVO}, 2117, 40.3, 55, 15.0},
        {"VSO", {W::VSO}, 503, 9.6, 27, 7.4},
        {"VOS", {W::VOS}, 174, 3.3, 15, 4.1},
        {"OVS", {W::OVS}, 40, 0.8, 3, 0.8},
        {"OSV", {W::OSV}, 19, 0.4, 1, 0.3},
    };
    t.no_dominant = {"No dominant order", {}, 124, 2.4, 26, 7.1};
    t.grouped = {
        {"**V", {W::SOV, W::OSV}, 2294, 43.7, 240, 65.6},
        {"*V*", {W::SVO, W::OVS}, 2157, 41.1, 58, 15.8},
        {"V**", {W::VSO, W::VOS}, 677, 13.9, 42, 11.5},
    };
    t.total_languages = 5252;
    t.total_families = 366;
    return t;
  }();
  return table;
}

OrderDistribution reference_distribution() {
  const auto& ref = reference_frequencies();
  double total = 0.0;
  for (const auto& row : ref.orders) total += row.languages;
  OrderDistribution d{};
  for (std::size_t j = 0; j < 6; ++j) d[j] = ref.orders[j].languages / total;
  return d;
}

std::vector<IntegrityCheck> integrity_checks(const ReferenceFrequencies& ref,
                                             double pct_tolerance) {
  std::vector<IntegrityCheck> out;
  auto exact = [&](std::string name, double expected, double actual) {
    out.push_back({std::move(name), expected, actual, expected == actual});
  };
  int languages = ref.no_dominant.languages;
  int families = ref.no_dominant.families;
  for (const auto& row : ref.orders) {
    languages += row.languages;
    families += row.families;
  }
  exact("languages sum to total", ref.total_languages, languages);
  exact("families sum to total", ref.total_families, families);

  for (const auto& group : ref.grouped) {
    int l = 0;
    int f = 0;
    for (auto member : group.members) {
      l += ref.orders[index_of(member)].languages;
      f += ref.orders[index_of(member)].families;
    }
    exact(group.label + " languages = sum of members", group.languages, l);
    exact(group.label + " families = sum of members", group.families, f);
  }

  auto pct = [&](const FrequencyRow& row) {
    const double lp = 100.0 * row.languages / ref.total_languages;
    const double fp = 100.0 * row.families / ref.total_families;
    out.push_back({row.label + " language %", row.language_pct, lp,
                   std::abs(lp - row.language_pct) <= pct_tolerance});
    out.push_back({row.label + " family %", row.family_pct, fp,
                   std::abs(fp - row.family_pct) <= pct_tolerance});
  };
  for (const auto& row : ref.orders) pct(row);
  pct(ref.no_dominant);
  for (const auto& row : ref.grouped) pct(row);
  return out;
}

ReferenceComparison compare_to_reference(const OrderDistribution& distribution) {
  const auto ref = reference_distribution();
  ReferenceComparison out;
  for (std::size_t j = 0; j < 6; ++j) {
    out.total_variation += 0.5 * std::abs(distribution[j] - ref[j]);
  }
  // The reference ranking coincides with canonical order.
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      out.ranks.push_back({kAllOrders[i], kAllOrders[j], distribution[i] > distribution[j]});
    }
  }
  return out;
}

}  // namespace wordorder
