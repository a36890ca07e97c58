#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "generators.hpp"
#include "wordorder/coding.hpp"
#include "wordorder/error.hpp"

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

TypeTable table_of(const std::vector<double>& p, const std::vector<std::uint32_t>& l) {
  TypeTable t;
  for (std::size_t i = 0; i < p.size(); ++i) t.entries.push_back({"t" + std::to_string(i), p[i], l[i]});
  return t;
}

// Counts pairs directly from the definition of tau-b.
double tau_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double nc = 0, nd = 0, tx = 0, ty = 0, n0 = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      n0 += 1;
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0) tx += 1;
      if (b == 0) ty += 1;
      if (a * b > 0) nc += 1;
      if (a * b < 0) nd += 1;
    }
  return (nc - nd) / std::sqrt((n0 - tx) * (n0 - ty));
}

ContextTable random_context_table(Rng& rng, std::size_t order) {
  ContextTable t;
  t.order = order;
  const std::size_t n_targets = 1 + rng.below(4);
  std::size_t ctx_values = 1;
  for (std::size_t k = 0; k < order; ++k) ctx_values *= 2;
  const auto w = testkit::random_sparse_simplex(rng, n_targets * ctx_values, 0.2);
  for (std::size_t y = 0; y < n_targets; ++y) {
    for (std::size_t c = 0; c < ctx_values; ++c) {
      const double p = w[y * ctx_values + c];
      if (p == 0.0) continue;
      ContextEntry e;
      e.target = "y" + std::to_string(y);
      for (std::size_t k = 0; k < order; ++k) e.context.push_back((c >> k) & 1u ? "x1" : "x0");
      e.probability = p;
      e.length = 1 + static_cast<std::uint32_t>(rng.below(6));
      t.entries.push_back(e);
    }
  }
  return t;
}

}  // namespace

TEST(OptimalLengths, Examples) {
  EXPECT_EQ(optimal_lengths({0.5, 0.25, 0.25}), (std::vector<std::uint32_t>{1, 2, 2}));
  EXPECT_EQ(optimal_lengths(std::vector<double>(8, 0.125)), std::vector<std::uint32_t>(8, 3));
  EXPECT_EQ(optimal_lengths({0.4, 0.3, 0.3}), (std::vector<std::uint32_t>{2, 2, 2}));
  EXPECT_EQ(optimal_lengths({1.0}), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(optimal_lengths({1.0}, true), (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(code_of([] { optimal_lengths({0.5, 0.0, 0.5}); }), "coding.ZeroProbability");
}

TEST(OptimalLengths, KraftAndSourceCodingBound) {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = testkit::random_simplex(rng, 2 + rng.below(30));
    const auto l = optimal_lengths(p);
    EXPECT_LE(kraft_sum(l), 1.0 + 1e-12);
    const auto t = table_of(p, l);
    const double h = table_entropy(t), len = mean_length(t);
    EXPECT_LE(h, len + 1e-12);
    EXPECT_LT(len, h + 1.0);
    EXPECT_TRUE(abbreviation_check(t).holds);
  }
}

TEST(MeanLength, Examples) {
  EXPECT_DOUBLE_EQ(mean_length(table_of({0.5, 0.25, 0.25}, {1, 2, 2})), 1.5);
  EXPECT_DOUBLE_EQ(mean_length(table_of({0.2, 0.3, 0.5}, {1, 1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(mean_length(table_of({1.0}, {5})), 5.0);
}

TEST(Tables, Validation) {
  EXPECT_EQ(code_of([] { table_of({0.5, 0.4}, {1, 1}).validate(); }), "coding.MassOutOfTolerance");
  EXPECT_EQ(code_of([] { table_of({0.5, 0.5}, {0, 1}).validate(); }), "coding.InvalidLength");
  auto reduced = table_of({0.5, 0.5}, {0, 1});
  reduced.allow_full_reduction = true;
  EXPECT_NO_THROW(reduced.validate());
  ContextTable c;
  c.order = 1;
  c.entries.push_back({{}, "y", 1.0, 1});
  EXPECT_EQ(code_of([&] { c.validate(); }), "coding.ArityMismatch");
}

TEST(ContextualMeanLength, OrderZeroReducesToMeanLength) {
  ContextTable c;
  c.entries = {{{}, "a", 0.5, 1}, {{}, "b", 0.25, 2}, {{}, "c", 0.25, 3}};
  EXPECT_DOUBLE_EQ(contextual_mean_length(c), mean_length(to_type_table(c)));
}

TEST(ContextualMeanLength, UniformConstant) {
  ContextTable c;
  c.order = 1;
  c.entries = {{{"x"}, "a", 0.25, 2}, {{"x"}, "b", 0.25, 2}, {{"z"}, "a", 0.25, 2}, {{"z"}, "b", 0.25, 2}};
  EXPECT_DOUBLE_EQ(contextual_mean_length(c), 2.0);
  EXPECT_DOUBLE_EQ(renormalized_length(c, "a"), 2.0);
}

TEST(ContextTables, DecompositionIdentities) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = random_context_table(rng, rng.below(4));
    t.validate();
    double brute = 0.0;
    for (const auto& e : t.entries) brute += e.probability * e.length;
    EXPECT_NEAR(contextual_mean_length(t), brute, 1e-12);
    double sum = 0.0;
    for (const auto& y : t.targets()) {
      const double ln = per_target_length(t, y);
      sum += ln;
      const double py = t.target_mass(y);
      const double m = renormalized_length(t, y);
      EXPECT_NEAR(m * py, ln, 1e-12);
      // Second path: conditional weights p(x|y), which sum to one.
      double weights = 0.0, direct = 0.0;
      for (const auto& e : t.entries) {
        if (e.target != y) continue;
        weights += e.probability / py;
        direct += e.probability / py * e.length;
      }
      EXPECT_NEAR(weights, 1.0, 1e-12);
      EXPECT_NEAR(direct, m, 1e-12);
    }
    EXPECT_NEAR(sum, contextual_mean_length(t), 1e-12);
  }
}

TEST(PerTarget, Examples) {
  ContextTable c;
  c.order = 1;
  c.entries = {{{"x"}, "a", 0.6, 3}, {{"x"}, "b", 0.4, 2}};
  EXPECT_DOUBLE_EQ(per_target_length(c, "a"), 1.8);
  EXPECT_DOUBLE_EQ(renormalized_length(c, "a"), 3.0);
  ContextTable single;
  single.entries = {{{}, "a", 1.0, 4}};
  EXPECT_DOUBLE_EQ(per_target_length(single, "a"), contextual_mean_length(single));
  c.entries.push_back({{"z"}, "q", 0.0, 1});
  EXPECT_EQ(per_target_length(c, "q"), 0.0);
  EXPECT_EQ(code_of([&] { renormalized_length(c, "q"); }), "coding.ZeroTargetMass");
  EXPECT_EQ(code_of([&] { per_target_length(c, "nope"); }), "coding.UnknownTarget");
}

TEST(KendallTau, Examples) {
  EXPECT_DOUBLE_EQ(kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau({1, 2, 3, 4}, {1, 2, 3, 4}), 1.0);
  EXPECT_EQ(code_of([] { kendall_tau({0.4, 0.3, 0.3}, {2, 2, 2}); }), "coding.AllTied");
  EXPECT_EQ(code_of([] { kendall_tau({1}, {1}); }), "coding.TooFewPairs");
  // Ties in both variables: one concordant-free, tie-corrected value.
  EXPECT_NEAR(kendall_tau({0.4, 0.3, 0.3}, {1, 2, 2}), -1.0, 1e-15);
  EXPECT_NEAR(kendall_tau({0.4, 0.3, 0.2, 0.1}, {1, 2, 2, 3}), tau_oracle({0.4, 0.3, 0.2, 0.1}, {1, 2, 2, 3}), 1e-15);
}

TEST(KendallTau, MatchesOracleOnRandomData) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> x(2 + rng.below(15)), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<double>(rng.below(4));
      y[i] = static_cast<double>(rng.below(4));
    }
    const bool const_x = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    const bool const_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (const_x || const_y) continue;
    const double t = kendall_tau(x, y);
    EXPECT_NEAR(t, tau_oracle(x, y), 1e-12);
    EXPECT_GE(t, -1.0);
    EXPECT_LE(t, 1.0);
  }
}

TEST(Abbreviation, Examples) {
  EXPECT_TRUE(abbreviation_check(table_of({0.5, 0.25, 0.25}, optimal_lengths({0.5, 0.25, 0.25}))).holds);
  EXPECT_FALSE(abbreviation_check(table_of({0.5, 0.3, 0.2}, {3, 2, 1})).holds);
  const auto tied = abbreviation_check(table_of({0.4, 0.3, 0.3}, {2, 2, 2}));
  EXPECT_TRUE(tied.all_tied);
  EXPECT_TRUE(tied.holds);
  EXPECT_FALSE(tied.tau.has_value());
}

TEST(Abbreviation, BruteForceMinimaSatisfyBound) {
  Rng rng(2718);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    auto p = testkit::random_simplex(rng, n);
    if (rng.below(3) == 0) p[1] = p[0];  // probability ties
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    std::vector<std::uint32_t> lengths(n);
    for (auto& l : lengths) l = 1 + static_cast<std::uint32_t>(rng.below(5));
    std::sort(lengths.begin(), lengths.end());
    double best = 1e300;
    std::vector<std::vector<std::uint32_t>> minima;
    do {
      double len = 0.0;
      for (std::size_t i = 0; i < n; ++i) len += p[i] * lengths[i];
      if (len < best - 1e-12) {
        best = len;
        minima.clear();
      }
      if (len <= best + 1e-12) minima.push_back(lengths);
    } while (std::next_permutation(lengths.begin(), lengths.end()));
    for (const auto& l : minima) EXPECT_TRUE(abbreviation_check(table_of(p, l)).holds);
    const auto ranked = assign_lengths_by_rank(p, lengths);
    EXPECT_NEAR(mean_length(table_of(p, ranked)), best, 1e-12);
    // Swap optimality: no transposition lowers the mean length.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        auto s = ranked;
        std::swap(s[i], s[j]);
        EXPECT_GE(mean_length(table_of(p, s)), mean_length(table_of(p, ranked)) - 1e-12);
      }
  }
}

TEST(Abbreviation, ContextTables) {
  ContextTable c;
  c.order = 1;
  c.entries = {{{"x"}, "a", 0.5, 1}, {{"x"}, "b", 0.3, 2}, {{"z"}, "a", 0.2, 3}};
  EXPECT_TRUE(abbreviation_check(c).holds);
  EXPECT_TRUE(abbreviation_check(c, "a").holds);
  c.entries[2].length = 0;
  c.allow_full_reduction = true;
  EXPECT_FALSE(abbreviation_check(c).holds);
}
