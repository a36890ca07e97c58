#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "generators.hpp"
#include "wordorder/error.hpp"
#include "wordorder/infotheory.hpp"
#include "wordorder/rate.hpp"

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

TokenSequence repeat(const TokenSequence& block, std::size_t times) {
  TokenSequence out;
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), block.begin(), block.end());
  return out;
}

RateProfile hilberg_profile(double a, double gamma, double b, std::size_t n) {
  RateProfile p;
  for (std::size_t i = 1; i <= n; ++i) p.values.push_back(a * std::pow(static_cast<double>(i), -gamma) + b);
  return p;
}

}  // namespace

TEST(NGramCounts, Examples) {
  const auto t = ngram_counts({"a", "b", "a", "b"}, 2);
  EXPECT_EQ(t.count({"a"}), 2u);
  EXPECT_EQ(t.count({"b"}), 2u);
  EXPECT_EQ(t.count({"a", "b"}), 2u);
  EXPECT_EQ(t.count({"b", "a"}), 1u);
  EXPECT_EQ(t.count({"a", "a"}), 0u);
  EXPECT_EQ(t.total_positions, (std::vector<std::uint64_t>{4, 3}));

  const auto h = ngram_counts({"a", "a", "a", "a"}, 3);
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(h.distinct(j), 1u);
  EXPECT_EQ(code_of([] { ngram_counts({}, 2); }), "rate.EmptySequence");
}

TEST(NGramCounts, WindowIdentityProperty) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    TokenSequence s(1 + rng.below(60));
    for (auto& x : s) x = std::string(1, static_cast<char>('a' + rng.below(4)));
    const bool circular = rng.below(2) == 1;
    const auto t = ngram_counts(s, 4, circular);
    for (std::size_t j = 1; j <= 4; ++j) {
      std::uint64_t sum = 0;
      for (const auto& [k, c] : t.counts[j - 1]) sum += c;
      const std::uint64_t windows = circular ? s.size() : (s.size() >= j ? s.size() - j + 1 : 0);
      EXPECT_EQ(sum, windows);
      EXPECT_EQ(t.total_positions[j - 1], windows);
    }
  }
}

TEST(NGramCounts, MergeAddsCounts) {
  const TokenSequence a{"x", "y", "x"}, b{"y", "z", "z", "y"};
  const auto m = merge(ngram_counts(a, 2), ngram_counts(b, 2));
  EXPECT_EQ(m.count({"y"}), 3u);
  EXPECT_EQ(m.count({"z", "z"}), 1u);
  EXPECT_EQ(m.count({"x", "y"}), 1u);
  EXPECT_EQ(m.total_positions, (std::vector<std::uint64_t>{7, 5}));
  EXPECT_EQ(m.vocabulary, (std::vector<std::string>{"x", "y", "z"}));
  const auto swapped = merge(ngram_counts(b, 2), ngram_counts(a, 2));
  EXPECT_EQ(swapped.counts, m.counts);
}

TEST(Profile, HomogeneousIsZero) {
  const auto p = conditional_entropy_profile(ngram_counts(TokenSequence(1000, "a"), 5));
  ASSERT_EQ(p.depth(), 5u);
  for (double v : p.values) EXPECT_EQ(v, 0.0);
  const auto exact = exact_profile(block_model(SequenceSource::homogeneous("a"), 4));
  for (double v : exact.values) EXPECT_EQ(v, 0.0);
}

TEST(Profile, PeriodicExactCycleStatistics) {
  const auto seq = repeat({"a", "b", "c"}, 300);
  const auto p = conditional_entropy_profile(ngram_counts(seq, 3, true));
  ASSERT_EQ(p.depth(), 3u);
  EXPECT_DOUBLE_EQ(p.at(1), std::log2(3.0));
  EXPECT_EQ(p.at(2), 0.0);
  EXPECT_EQ(p.at(3), 0.0);
  const auto exact = exact_profile(block_model(SequenceSource::periodic({"a", "b", "c"}), 3));
  EXPECT_DOUBLE_EQ(exact.at(1), std::log2(3.0));
  EXPECT_EQ(exact.at(2), 0.0);
  EXPECT_EQ(exact.at(3), 0.0);
  const auto full = exact_profile(
      block_model(SequenceSource::periodic({"a", "b", "c"}, 0), 3, PeriodicReading::full_history));
  for (double v : full.values) EXPECT_EQ(v, 0.0);
}

TEST(Profile, FairCoinApproximatelyFlatAndBiasShrinks) {
  const auto src = SequenceSource::iid({{"0", 0.5}, {"1", 0.5}});
  ProfileOptions fixed;
  fixed.cap_depth = false;
  const auto small = conditional_entropy_profile(ngram_counts(generate(src, 20000, 5), 4), fixed);
  const auto large = conditional_entropy_profile(ngram_counts(generate(src, 40000, 5), 4), fixed);
  for (double v : small.values) EXPECT_NEAR(v, 1.0, 0.01);
  const double dev_small = 1.0 - small.at(4), dev_large = 1.0 - large.at(4);
  EXPECT_GT(dev_small, 0.0);
  EXPECT_LT(dev_large, dev_small * 0.8);
}

TEST(Profile, ExactMatchesInfotheory) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = testkit::random_model(rng, 2 + rng.below(3), 3);
    const auto p = exact_profile(m);
    for (std::size_t i = 0; i < m.arity(); ++i) {
      std::vector<std::string> prefix(m.roles().begin(), m.roles().begin() + i);
      EXPECT_NEAR(p.values[i], conditional_entropy(m, m.roles()[i], prefix), 1e-9);
    }
  }
}

TEST(Profile, CoverageCapAndFloor) {
  TokenSequence s;
  for (int i = 0; i < 50; ++i) s.push_back(std::to_string(i));
  // All-distinct tokens: every bigram is new, so only order 1 survives.
  EXPECT_EQ(conditional_entropy_profile(ngram_counts(s, 4)).depth(), 1u);
  ProfileOptions floor;
  floor.min_windows = 100;
  EXPECT_EQ(code_of([&] { conditional_entropy_profile(ngram_counts(s, 2), floor); }),
            "rate.InsufficientData");
}

TEST(Profile, PseudocountSmoothsTowardUniform) {
  const auto t = ngram_counts({"a", "a", "a", "b"}, 1);
  const double raw = block_entropies(t)[0];
  const double smooth = block_entropies(t, 100.0)[0];
  EXPECT_LT(raw, smooth);
  EXPECT_NEAR(smooth, 1.0, 1e-3);
}

TEST(Cer, Examples) {
  RateProfile zeros{{0, 0, 0}};
  EXPECT_TRUE(cer_diagnostic(zeros, 1e-12).flat);
  const auto v = cer_diagnostic(RateProfile{{3.0, 2.0, 0.5, 0.4}}, 0.1);
  EXPECT_FALSE(v.flat);
  EXPECT_DOUBLE_EQ(v.spread, 2.6);
  EXPECT_EQ(v.max_drop_at, 3u);
  EXPECT_DOUBLE_EQ(v.max_drop, 1.5);
  EXPECT_TRUE(v.non_increasing);
  EXPECT_FALSE(cer_diagnostic(RateProfile{{1.0, 2.0}}, 0.1).non_increasing);
}

TEST(Cer, ScrambleFlattensWithinNoiseBand) {
  const auto chain = make_chain({{"a", 0.25}, {"b", 0.25}, {"c", 0.25}, {"d", 0.25}},
                                {{0.7, 0.1, 0.1, 0.1}, {0.1, 0.7, 0.1, 0.1}, {0.1, 0.1, 0.7, 0.1},
                                 {0.1, 0.1, 0.1, 0.7}});
  const auto text = generate(SequenceSource::markov(chain), 20000, 17);
  ProfileOptions fixed;
  fixed.cap_depth = false;
  const auto original = conditional_entropy_profile(ngram_counts(text, 3), fixed);
  const auto shuffled = conditional_entropy_profile(ngram_counts(scramble(text, 3), 3), fixed);
  const double band = iid_noise_band(text, 3, 20, 99);
  EXPECT_EQ(original.at(1), shuffled.at(1));
  EXPECT_TRUE(cer_diagnostic(shuffled, band).flat);
  const auto v = cer_diagnostic(original, band);
  EXPECT_FALSE(v.flat);
  EXPECT_TRUE(v.non_increasing);
}

TEST(Uid, Examples) {
  EXPECT_EQ(uid_classify(block_model(SequenceSource::homogeneous("a"), 4)).kind, UidClass::strong_uid);
  EXPECT_EQ(uid_classify(make_iid({{"0", 0.5}, {"1", 0.5}}, 3)).kind, UidClass::full_uid);
  const auto two = make_joint({"x1", "x2"}, {{{"a", "b"}, 0.3}, {{"b", "a"}, 0.7}});
  const auto c = uid_classify(two);
  EXPECT_EQ(c.kind, UidClass::neither);
  EXPECT_EQ(c.support_size, 2u);
  EXPECT_NEAR(c.max_spread, 0.7, 1e-12);
  EXPECT_EQ(code_of([] { uid_classify(make_iid({{"0", 0.5}, {"1", 0.5}}, 3), 1e-9, 4); }),
            "rate.UnsupportedModelSize");
}

TEST(Uid, PeriodicRelaxedIsNotUniform) {
  // First symbol 1/3, then certainty.
  const auto c = uid_classify(block_model(SequenceSource::periodic({"a", "b", "c"}), 3));
  EXPECT_EQ(c.kind, UidClass::neither);
  EXPECT_NEAR(c.max_spread, 2.0 / 3.0, 1e-12);
}

TEST(Uid, Spread) {
  const auto m = make_iid({{"a", 0.25}, {"b", 0.75}}, 3);
  const auto s = uid_spread({"a", "b", "b"}, m);
  EXPECT_NEAR(s.conditionals[0], 0.25, 1e-15);
  EXPECT_NEAR(s.conditionals[1], 0.75, 1e-15);
  EXPECT_NEAR(s.spread, 0.5, 1e-15);
  const auto d = make_joint({"x1", "x2"}, {{{"a", "b"}, 1.0}});
  EXPECT_EQ(code_of([&] { uid_spread({"a", "a"}, d); }), "rate.SequenceOutOfSupport");
  EXPECT_EQ(code_of([&] { uid_spread({"a", "q"}, d); }), "rate.SequenceOutOfSupport");
}

TEST(Hilberg, NoiselessRecovery) {
  const auto p = hilberg_profile(10, 0.5, 1, 20);
  const auto f = hilberg_fit(p, HilbergVariant::relaxed);
  EXPECT_NEAR(f.gamma, 0.5, 0.005);
  EXPECT_NEAR(f.a, 10.0, 1e-6);
  EXPECT_NEAR(f.b, 1.0, 1e-6);
  EXPECT_LT(f.rms_residual, 1e-9);
  const auto pure = hilberg_fit(hilberg_profile(4, 0.7, 0, 15), HilbergVariant::pure);
  EXPECT_NEAR(pure.gamma, 0.7, 0.005);
  EXPECT_EQ(pure.b, 0.0);
  HilbergOptions logs;
  logs.log_space = true;
  EXPECT_NEAR(hilberg_fit(hilberg_profile(4, 0.7, 0, 15), HilbergVariant::pure, logs).gamma, 0.7, 0.005);
}

TEST(Hilberg, NoisyRecovery) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(seed, "noise"));
    auto p = hilberg_profile(10, 0.5, 1, 20);
    for (auto& v : p.values) v += 0.05 * testkit::normal(rng);
    EXPECT_NEAR(hilberg_fit(p, HilbergVariant::relaxed).gamma, 0.5, 0.05) << "seed " << seed;
  }
}

TEST(Hilberg, Errors) {
  EXPECT_EQ(code_of([] { hilberg_fit(RateProfile{{2, 2, 2, 2}}, HilbergVariant::relaxed); }),
            "rate.DegenerateProfile");
  EXPECT_EQ(code_of([] { hilberg_fit(RateProfile{{2, 1}}, HilbergVariant::relaxed); }),
            "rate.ProfileTooShort");
  HilbergOptions logs;
  logs.log_space = true;
  EXPECT_EQ(code_of([&] { hilberg_fit(RateProfile{{2, 1, 0}}, HilbergVariant::pure, logs); }),
            "rate.NonPositiveValue");
}

TEST(Peak, Examples) {
  const auto p = hilberg_profile(10, 0.5, 1, 20);
  const auto peak = peak_cost(p);
  EXPECT_EQ(peak.index, 1u);
  EXPECT_EQ(peak.value, 11.0);
  EXPECT_EQ(peak_cost(RateProfile{{2, 2, 2}}).index, 1u);
  const auto mid = peak_cost(RateProfile{{1, 3, 2}});
  EXPECT_EQ(mid.value, 3.0);
  EXPECT_EQ(mid.index, 2u);
  EXPECT_EQ(code_of([] { peak_cost(RateProfile{}); }), "rate.EmptyProfile");
}

TEST(Peak, MinimizingPeaksEqualsMinimizingFirstEntry) {
  Rng rng(4);
  for (int family = 0; family < 50; ++family) {
    std::vector<RateProfile> profiles;
    for (int k = 0; k < 8; ++k) {
      RateProfile p;
      double v = 1.0 + 5.0 * rng.uniform();
      for (int i = 0; i < 10; ++i) {
        p.values.push_back(v);
        v -= 0.01 + rng.uniform();
      }
      profiles.push_back(p);
    }
    std::size_t by_peak = 0, by_first = 0;
    for (std::size_t k = 1; k < profiles.size(); ++k) {
      if (peak_cost(profiles[k]).value < peak_cost(profiles[by_peak]).value) by_peak = k;
      if (profiles[k].at(1) < profiles[by_first].at(1)) by_first = k;
      EXPECT_EQ(peak_cost(profiles[k]).value, profiles[k].at(1));
    }
    EXPECT_EQ(by_peak, by_first);
  }
}
