#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "wordorder/error.hpp"
#include "wordorder/ring.hpp"

using namespace wordorder;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

WordOrder O(const char* s) { return order_from_string(s); }

std::vector<WordOrder> V(std::initializer_list<const char*> names) {
  std::vector<WordOrder> out;
  for (auto n : names) out.push_back(O(n));
  return out;
}

// Adjacent transpositions of the string form, independent of the ring code.
std::vector<std::string> swaps(const std::string& s) {
  std::string a = s, b = s;
  std::swap(a[0], a[1]);
  std::swap(b[1], b[2]);
  return {a, b};
}

int bfs(const std::string& from, const std::string& to) {
  std::map<std::string, int> dist{{from, 0}};
  std::queue<std::string> q;
  q.push(from);
  while (!q.empty()) {
    const auto s = q.front();
    q.pop();
    for (const auto& t : swaps(s)) {
      if (!dist.count(t)) {
        dist[t] = dist[s] + 1;
        q.push(t);
      }
    }
  }
  return dist.at(to);
}

}  // namespace

TEST(Orders, RoundTripNames) {
  for (auto o : kAllOrders) EXPECT_EQ(order_from_string(to_string(o)), o);
  EXPECT_EQ(code_of([] { order_from_string("SSS"); }), "ring.UnknownOrder");
  EXPECT_FALSE(parse_order("xyz").has_value());
}

TEST(Distance, ExamplesAndBfsOracle) {
  EXPECT_EQ(ring_distance(O("SOV"), O("SVO")), 1);
  EXPECT_EQ(ring_distance(O("SOV"), O("OVS")), 2);
  EXPECT_EQ(ring_distance(O("SOV"), O("SOV")), 0);
  for (auto a : kAllOrders) {
    for (auto b : kAllOrders) {
      const int d = ring_distance(a, b);
      EXPECT_EQ(d, bfs(std::string(to_string(a)), std::string(to_string(b))));
      EXPECT_EQ(d, ring_distance(b, a));
      EXPECT_LE(d, 3);
      for (auto c : kAllOrders) EXPECT_LE(d, ring_distance(a, c) + ring_distance(c, b));
    }
  }
}

TEST(Neighbors, FormTheSixCycle) {
  EXPECT_EQ(neighbors(O("SOV")), (std::set<WordOrder>{O("SVO"), O("OSV")}));
  EXPECT_EQ(neighbors(O("SVO")), (std::set<WordOrder>{O("SOV"), O("VSO")}));
  for (std::size_t i = 0; i < 6; ++i) {
    const auto here = kAllOrders[i];
    EXPECT_EQ(neighbors(here), (std::set<WordOrder>{kAllOrders[(i + 1) % 6], kAllOrders[(i + 5) % 6]}));
    for (auto n : neighbors(here)) EXPECT_TRUE(neighbors(n).count(here));
  }
  // Walking along first-unvisited neighbours visits all six and returns.
  std::set<WordOrder> seen{O("SOV")};
  auto at = O("SOV");
  for (int step = 0; step < 5; ++step) {
    for (auto n : neighbors(at)) {
      if (!seen.count(n)) {
        at = n;
        seen.insert(n);
        break;
      }
    }
  }
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_TRUE(neighbors(at).count(O("SOV")));
}

TEST(TripleOptimal, TargetLast) {
  EXPECT_EQ(triple_optimal_orders(Constituent::verb), (std::set<WordOrder>{O("SOV"), O("OSV")}));
  EXPECT_EQ(triple_optimal_orders(Constituent::object), (std::set<WordOrder>{O("SVO"), O("VSO")}));
  EXPECT_EQ(triple_optimal_orders(Constituent::subject), (std::set<WordOrder>{O("VOS"), O("OVS")}));
}

TEST(Predict, DocumentedDestinationCells) {
  EXPECT_EQ(predicted_destinations(O("SOV"), true, std::nullopt), V({"SVO", "OSV"}));
  EXPECT_EQ(predicted_destinations(O("SOV"), false, Filter::dlm), V({"SVO", "OVS"}));
  EXPECT_EQ(predicted_destinations(O("SOV"), true, Filter::dlm), V({"SVO"}));
  EXPECT_EQ(predicted_destinations(O("SVO"), true, std::nullopt), V({"SOV", "VSO"}));
  EXPECT_EQ(predicted_destinations(O("SVO"), false, Filter::nominal_uncertainty), V({"VSO", "VOS"}));
  EXPECT_EQ(predicted_destinations(O("SVO"), true, Filter::nominal_uncertainty), V({"VSO"}));
  EXPECT_EQ(code_of([] { predicted_destinations(O("VSO"), true, std::nullopt); }), "ring.UnsupportedSource");
  EXPECT_EQ(code_of([] { predicted_destinations(O("SOV"), false, std::nullopt); }), "ring.NoConstraint");
}

TEST(TransitionMatrix, Examples) {
  RingKernel hard;
  hard.decay = RingDecay::exponential(std::numeric_limits<double>::infinity());
  const auto m = transition_matrix(hard);
  const auto& row = m[index_of(O("SOV"))];
  EXPECT_DOUBLE_EQ(row[index_of(O("SVO"))], 0.5);
  EXPECT_DOUBLE_EQ(row[index_of(O("OSV"))], 0.5);

  RingKernel flat;
  flat.decay = RingDecay::exponential(0.0);
  for (const auto& r : transition_matrix(flat)) {
    for (std::size_t j = 0; j < 6; ++j) {
      if (r[j] != 0.0) EXPECT_NEAR(r[j], 0.2, 1e-15);
    }
  }

  RingKernel dlm;
  dlm.filters[Filter::dlm] = 2.0;
  const auto d = transition_matrix(dlm)[index_of(O("SOV"))];
  // Hand weights: SVO 2e^-1, VSO e^-2, VOS e^-3, OVS 2e^-2, OSV e^-1.
  const double e1 = std::exp(-1.0), e2 = std::exp(-2.0), e3 = std::exp(-3.0);
  const double z = 2 * e1 + e2 + e3 + 2 * e2 + e1;
  EXPECT_NEAR(d[index_of(O("SVO"))], 2 * e1 / z, 1e-15);
  EXPECT_NEAR(d[index_of(O("OVS"))], 2 * e2 / z, 1e-15);
  EXPECT_EQ(std::max_element(d.begin(), d.end()) - d.begin(), static_cast<long>(index_of(O("SVO"))));
}

TEST(TransitionMatrix, RowsStochastic) {
  for (double beta : {0.0, 0.5, 1.0, 3.0}) {
    for (double self : {0.0, 0.7}) {
      RingKernel k;
      k.decay = RingDecay::exponential(beta);
      k.self_weight = self;
      k.filters[Filter::agent_first] = 3.0;
      for (const auto& r : transition_matrix(k)) {
        double s = 0;
        for (double v : r) {
          EXPECT_GE(v, 0.0);
          s += v;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
      }
    }
  }
  RingKernel bad;
  bad.decay = RingDecay::tabulated({0.0, 0.0, 0.0});
  EXPECT_FALSE(code_of([&] { transition_matrix(bad); }).empty());
  RingKernel rising;
  rising.decay = RingDecay::inverse_power(-1.0);
  EXPECT_EQ(code_of([&] { rising.validate(); }), "ring.InvalidKernel");
}

TEST(Evolve, StepZeroIsPointMass) {
  const auto t = evolve(RingKernel{}, O("VOS"), 0, 100, 1);
  ASSERT_EQ(t.counts.size(), 1u);
  EXPECT_EQ(t.counts[0][index_of(O("VOS"))], 100u);
}

TEST(Evolve, WorkerCountDoesNotChangeResult) {
  RingKernel k;
  k.filters[Filter::dlm] = 2.0;
  const auto a = evolve(k, O("SOV"), 5, 3000, 42, 1);
  const auto b = evolve(k, O("SOV"), 5, 3000, 42, 4);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, evolve(k, O("SOV"), 5, 3000, 43, 1).counts);
}

TEST(Evolve, OneStepMatchesMatrixWithinThreeSigma) {
  RingKernel k;
  k.filters[Filter::dlm] = 2.0;
  const std::size_t n = 100000;
  const auto t = evolve(k, O("SOV"), 1, n, 7, 2);
  const auto row = transition_matrix(k)[index_of(O("SOV"))];
  const auto got = t.distribution(1);
  for (std::size_t j = 0; j < 6; ++j) {
    const double sigma = std::sqrt(row[j] * (1 - row[j]) / n);
    EXPECT_LE(std::abs(got[j] - row[j]), 3 * sigma + 1e-12);
  }
  EXPECT_EQ(t.modal(1), O("SVO"));
}

TEST(Evolve, SymmetricKernelApproachesUniform) {
  RingKernel k;  // exponential(1), no filters: circulant and symmetric
  const auto t = evolve(k, O("SOV"), 40, 100000, 3, 2);
  const auto exact = propagate(transition_matrix(k), point_mass(O("SOV")), 40);
  const auto got = t.distribution(40);
  double tv = 0.0, tv_exact = 0.0;
  for (std::size_t j = 0; j < 6; ++j) {
    tv += std::abs(got[j] - 1.0 / 6.0) / 2;
    tv_exact += std::abs(exact[j] - 1.0 / 6.0) / 2;
  }
  EXPECT_LT(tv, 0.01);
  EXPECT_LT(tv_exact, 1e-6);
}

TEST(Reference, CountsAndGroups) {
  const auto& ref = reference_frequencies();
  int languages = ref.no_dominant.languages, families = ref.no_dominant.families;
  for (const auto& r : ref.orders) {
    languages += r.languages;
    families += r.families;
  }
  EXPECT_EQ(languages, 5252);
  EXPECT_EQ(families, 366);
  EXPECT_EQ(ref.total_languages, 5252);
  EXPECT_EQ(ref.total_families, 366);
  ASSERT_EQ(ref.grouped.size(), 3u);
  EXPECT_EQ(ref.grouped[0].languages, 2294);
  EXPECT_EQ(ref.grouped[1].languages, 2157);
  EXPECT_EQ(ref.grouped[2].languages, 677);
  for (const auto& g : ref.grouped) {
    int sum = 0, fam = 0;
    for (auto o : g.members) {
      sum += ref.orders[index_of(o)].languages;
      fam += ref.orders[index_of(o)].families;
    }
    EXPECT_EQ(sum, g.languages) << g.label;
    EXPECT_EQ(fam, g.families) << g.label;
  }
}

TEST(Reference, DistributionFromCounts) {
  const auto d = reference_distribution();
  const double counts[6] = {2275, 2117, 503, 174, 40, 19};
  for (std::size_t j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(d[j], counts[j] / 5128.0);
}

TEST(Compare, Examples) {
  const auto self = compare_to_reference(reference_distribution());
  EXPECT_DOUBLE_EQ(self.total_variation, 0.0);
  ASSERT_EQ(self.ranks.size(), 15u);
  for (const auto& r : self.ranks) EXPECT_TRUE(r.agrees);

  OrderDistribution uniform;
  uniform.fill(1.0 / 6.0);
  const double counts[6] = {2275, 2117, 503, 174, 40, 19};
  double tv = 0.0;
  for (double c : counts) tv += std::abs(1.0 / 6.0 - c / 5128.0);
  EXPECT_NEAR(compare_to_reference(uniform).total_variation, tv / 2, 1e-15);

  OrderDistribution swapped = reference_distribution();
  std::swap(swapped[0], swapped[1]);
  for (const auto& r : compare_to_reference(swapped).ranks) {
    if (r.higher == O("SOV") && r.lower == O("SVO")) EXPECT_FALSE(r.agrees);
  }
}
