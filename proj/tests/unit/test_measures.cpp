#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "reclab/error.hpp"
#include "reclab/measures.hpp"

using namespace reclab;

namespace {

Word binary_word(std::uint32_t bits, std::size_t n) {
  std::vector<Symbol> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1u;
  return Word(s);
}

std::vector<MeasurePtr> binary_models() {
  return {std::make_shared<BernoulliMeasure>(std::vector<double>{0.4, 0.6}),
          std::make_shared<MarkovMeasure>(std::vector<std::vector<double>>{{0.9, 0.1}, {0.2, 0.8}}),
          std::make_shared<MarkovMeasure>(std::vector<std::vector<double>>{{0.0, 1.0}, {0.5, 0.5}}),
          std::make_shared<XorCoupledMeasure>(0.75)};
}

// Preimage rule for the XOR image: sum over the two preimages of w.
double xor_brute(const Word& w, double p1) {
  double total = 0.0;
  for (Symbol start : {0u, 1u}) {
    Symbol x = start;
    double p = x ? p1 : 1.0 - p1;
    for (Symbol s : w) {
      x ^= s;
      p *= x ? p1 : 1.0 - p1;
    }
    total += p;
  }
  return total;
}

}  // namespace

TEST(Bernoulli, CylinderAndEntropy) {
  const BernoulliMeasure m({0.4, 0.6});
  EXPECT_NEAR(m.cylinder_prob(Word{1, 1, 0}), 0.6 * 0.6 * 0.4, 1e-15);
  EXPECT_NEAR(m.entropy(), 0.6730116670092564, 1e-12);
  EXPECT_NEAR(m.decay_rate().gamma, -std::log(0.6), 1e-12);
  EXPECT_EQ(m.psi(0).value, 0.0);
  EXPECT_EQ(m.psi(7).value, 0.0);
  EXPECT_TRUE(m.is_iid());
}

TEST(Bernoulli, RejectsBadInput) {
  EXPECT_THROW(BernoulliMeasure({0.5, 0.6}), Error);
  EXPECT_THROW(BernoulliMeasure({1.0}), Error);
  EXPECT_THROW(BernoulliMeasure({-0.1, 1.1}), Error);
  const BernoulliMeasure det({0.0, 1.0});
  EXPECT_EQ(det.cylinder_prob(Word{1, 1, 1}), 1.0);
  try {
    det.decay_rate();
    FAIL() << "expected no-positive-rate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_positive_rate);
  }
  EXPECT_THROW(det.psi(-1), Error);
}

TEST(Markov, StationaryDecayEntropy) {
  const MarkovMeasure m({{0.9, 0.1}, {0.2, 0.8}});
  EXPECT_NEAR(m.stationary()[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.stationary()[1], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.decay_rate().gamma, 0.10536051565782630, 1e-12);
  EXPECT_NEAR(m.cylinder_prob(Word{0, 0, 1}), 2.0 / 3.0 * 0.9 * 0.1, 1e-15);
  const double h = -(2.0 / 3.0) * (0.9 * std::log(0.9) + 0.1 * std::log(0.1)) -
                   (1.0 / 3.0) * (0.2 * std::log(0.2) + 0.8 * std::log(0.8));
  EXPECT_NEAR(m.entropy(), h, 1e-12);
  EXPECT_FALSE(m.is_iid());
}

TEST(Markov, PsiMatchesDefinition) {
  const MarkovMeasure m({{0.9, 0.1}, {0.2, 0.8}});
  // P^{m+1} of a two-state chain: pi + (0.7)^{m+1} (I - 1 pi).
  for (int k = 0; k <= 6; ++k) {
    const double lam = std::pow(0.7, k + 1);
    const double expected = std::max({std::abs(lam * (1.0 / 3.0) / (2.0 / 3.0)), std::abs(lam * (2.0 / 3.0) / (1.0 / 3.0))});
    EXPECT_NEAR(m.psi(k).value, expected, 1e-12) << k;
  }
  const MarkovMeasure rows_equal({{0.3, 0.7}, {0.3, 0.7}});
  EXPECT_NEAR(rows_equal.psi(0).value, 0.0, 1e-12);
  EXPECT_TRUE(rows_equal.is_iid());
}

TEST(Markov, RejectsReducibleAndPeriodic) {
  EXPECT_THROW(MarkovMeasure({{1.0, 0.0}, {0.0, 1.0}}), Error);
  EXPECT_THROW(MarkovMeasure({{0.0, 1.0}, {1.0, 0.0}}), Error);
  EXPECT_THROW(MarkovMeasure({{0.5, 0.6}, {0.5, 0.5}}), Error);
}

TEST(Xor, CylinderMatchesPreimageRule) {
  const XorCoupledMeasure m(0.75);
  for (std::size_t n = 1; n <= 10; ++n)
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      const Word w = binary_word(bits, n);
      ASSERT_NEAR(m.cylinder_prob(w), xor_brute(w, 0.75), 1e-15) << w.to_compact();
    }
  EXPECT_NEAR(m.cylinder_prob(Word{1, 1, 1, 1}), 0.03515625, 1e-15);
  EXPECT_NEAR(m.cylinder_prob(Word{0, 1, 1, 0}), 0.08203125, 1e-15);
  EXPECT_NEAR(m.cylinder_prob(ones(13)), 1.6294419765472412e-05, 1e-18);
}

TEST(Xor, MixingAndRates) {
  const XorCoupledMeasure m(0.75);
  EXPECT_EQ(m.psi(1).value, 0.0);
  EXPECT_EQ(m.psi(5).value, 0.0);
  EXPECT_TRUE(m.psi(0).upper_bound);
  EXPECT_NEAR(m.psi(0).value, 1.0 + 2.0 * (4.0 + 4.0 / 3.0), 1e-12);
  EXPECT_NEAR(m.decay_rate().gamma, -std::log(0.75), 1e-12);
  EXPECT_NEAR(*m.decay_rate().eventual, -0.5 * std::log(0.75 * 0.25), 1e-12);
  EXPECT_THROW(XorCoupledMeasure(0.0), Error);
  EXPECT_THROW(XorCoupledMeasure(1.0), Error);
}

TEST(AllModels, AdditivityShiftInvarianceDecay) {
  for (const auto& m : binary_models()) {
    const double gamma = m->decay_rate().gamma;
    for (std::size_t n = 1; n <= 10; ++n) {
      double max_prob = 0.0;
      for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        const Word w = binary_word(bits, n);
        const double p = m->cylinder_prob(w);
        max_prob = std::max(max_prob, p);
        const double right = m->cylinder_prob(w.concat(Word{0})) + m->cylinder_prob(w.concat(Word{1}));
        const double left = m->cylinder_prob(Word{0}.concat(w)) + m->cylinder_prob(Word{1}.concat(w));
        ASSERT_NEAR(right, p, 1e-12);
        ASSERT_NEAR(left, p, 1e-12);
        if (p > 0.0)
          ASSERT_NEAR(m->log_cylinder_prob(w), std::log(p), 1e-9);
        else
          ASSERT_EQ(m->log_cylinder_prob(w), -std::numeric_limits<double>::infinity());
      }
      ASSERT_LE(max_prob, std::exp(-gamma * static_cast<double>(n)) * (1.0 + 1e-9)) << n;
    }
  }
}

TEST(AllModels, SparsePatternsMarginalizeGaps) {
  const std::vector<std::uint64_t> positions{1, 2, 4, 7};
  for (const auto& m : binary_models()) {
    const PatternProb pattern = m->pattern_prob(positions);
    double total = 0.0;
    for (std::uint32_t bits = 0; bits < 16; ++bits) {
      std::vector<Symbol> sym{bits & 1u, (bits >> 1) & 1u, (bits >> 2) & 1u, (bits >> 3) & 1u};
      // Brute force: sum cylinder probs of all length-8 words agreeing on the positions.
      double expected = 0.0;
      for (std::uint32_t free = 0; free < 256; ++free) {
        const Word w = binary_word(free, 8);
        bool agree = true;
        for (std::size_t j = 0; j < positions.size(); ++j) agree = agree && w[positions[j]] == sym[j];
        if (agree) expected += m->cylinder_prob(w);
      }
      const double got = pattern(sym);
      ASSERT_NEAR(got, expected, 1e-13);
      total += got;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(AllModels, SamplerIsDeterministicAndChunkIndependent) {
  for (const auto& m : binary_models()) {
    const Word whole = m->sample_path(1001, 99);
    EXPECT_EQ(whole, m->sample_path(1001, 99));
    EXPECT_NE(whole, m->sample_path(1001, 100));
    auto s = m->sampler(99);
    std::vector<Symbol> pieces(1001);
    std::size_t at = 0;
    for (std::size_t len : {1u, 2u, 3u, 64u, 131u, 800u}) {
      s->fill(std::span<Symbol>(pieces.data() + at, len));
      at += len;
    }
    EXPECT_EQ(Word(pieces), whole);
  }
}

TEST(AllModels, SampledWordFrequenciesMatchCylinders) {
  for (const auto& m : binary_models()) {
    const std::size_t len = 400000;
    const Word path = m->sample_path(len, 5);
    std::vector<double> counts(8, 0.0);
    for (std::size_t i = 0; i + 3 <= len; ++i) counts[path[i] | (path[i + 1] << 1) | (path[i + 2] << 2)] += 1.0;
    for (std::uint32_t bits = 0; bits < 8; ++bits) {
      const double freq = counts[bits] / static_cast<double>(len - 2);
      EXPECT_NEAR(freq, m->cylinder_prob(binary_word(bits, 3)), 0.006) << bits;
    }
  }
}

TEST(Factory, JsonRoundTrip) {
  for (const auto& m : binary_models()) {
    const auto back = measure_from_json(m->to_json());
    EXPECT_EQ(back->to_json(), m->to_json());
  }
  EXPECT_THROW(measure_from_json({{"type", "poisson"}}), Error);
  EXPECT_THROW(measure_from_json({{"probs", {0.5, 0.5}}}), Error);
}
