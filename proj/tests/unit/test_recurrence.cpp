#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "reclab/error.hpp"
#include "reclab/measures.hpp"
#include "reclab/recurrence.hpp"

using namespace reclab;

namespace {

// Direct evaluation of S_N = sum_k prod_i 1[path[d_i k .. d_i k + n) == a].
std::uint64_t naive_count(const Word& path, const Word& a, const std::vector<std::uint64_t>& d, std::uint64_t n_terms) {
  std::uint64_t total = 0;
  for (std::uint64_t k = 1; k <= n_terms; ++k) {
    bool all = true;
    for (std::uint64_t di : d)
      for (std::size_t j = 0; j < a.size(); ++j) all = all && path[di * k + j] == a[j];
    total += all;
  }
  return total;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_NO_THROW(RecurrenceSpec({1, 2}, 1.0));
  EXPECT_THROW(RecurrenceSpec({}, 1.0), Error);
  EXPECT_THROW(RecurrenceSpec({2, 2}, 1.0), Error);
  EXPECT_THROW(RecurrenceSpec({0, 2}, 1.0), Error);
  EXPECT_THROW(RecurrenceSpec({1}, 0.0), Error);
  const auto spec = RecurrenceSpec::from_json({{"d", {1, 3}}, {"t", 2.5}});
  EXPECT_EQ(spec.ell(), 2u);
  EXPECT_EQ(spec.d_max(), 3u);
  EXPECT_EQ(spec.to_json(), (nlohmann::json{{"d", {1, 3}}, {"t", 2.5}}));
}

TEST(Kappa, Examples) {
  EXPECT_EQ(kappa(2, RecurrenceSpec({1, 2}, 1.0)), 2u);
  EXPECT_EQ(kappa(1, RecurrenceSpec({1, 2}, 1.0)), 1u);
  EXPECT_EQ(kappa(6, RecurrenceSpec({2, 3}, 1.0)), 6u);
  EXPECT_EQ(kappa(4, RecurrenceSpec({2}, 1.0)), 2u);
}

TEST(Kappa, MinimalFeasibleLagExamples) {
  EXPECT_EQ(minimal_feasible_lag(ones(8), RecurrenceSpec({1, 2}, 1.0)), 1u);
  EXPECT_EQ(minimal_feasible_lag(Word::parse("10101010"), RecurrenceSpec({1, 2}, 1.0)), 2u);
  EXPECT_EQ(code_of([] { minimal_feasible_lag(Word::parse("1000"), RecurrenceSpec({1, 2}, 1.0)); }),
            ErrorCode::precondition);
}

TEST(Rho, IidFormula) {
  const BernoulliMeasure b({0.4, 0.6});
  EXPECT_NEAR(rho(b, ones(10), RecurrenceSpec({1}, 1.0)).value, 0.6, 1e-12);
  // k0 = (kappa / r) sum d_i = 3 for r = 1, d = (1, 2).
  EXPECT_NEAR(rho(b, ones(5), RecurrenceSpec({1, 2}, 1.0)).value, std::pow(0.6, 3), 1e-12);
  const BernoulliMeasure u({0.5, 0.5});
  EXPECT_NEAR(rho(u, Word::parse("1000000000"), RecurrenceSpec({1}, 1.0)).value, std::pow(0.5, 10), 1e-15);
  EXPECT_NEAR(rho(u, Word::parse("10101"), RecurrenceSpec({1}, 1.0)).value, 0.25, 1e-15);
}

TEST(Rho, SupportExitAndConditioning) {
  const MarkovMeasure m({{0.0, 1.0}, {0.5, 0.5}});
  EXPECT_EQ(code_of([&] { rho(m, Word{0, 0}, RecurrenceSpec({1}, 1.0)); }), ErrorCode::conditioning);
  // P(0) > 0 but the extension 00 is forbidden.
  EXPECT_TRUE(rho(m, Word{0}, RecurrenceSpec({1}, 1.0)).support_exit);
  EXPECT_EQ(rho(m, Word{0}, RecurrenceSpec({1}, 1.0)).value, 0.0);
  const auto r2 = rho(m, Word{1, 0}, RecurrenceSpec({1}, 1.0));
  // Extension 1 0 1 0 ... is allowed (0 -> 1 -> 0 with prob 1 then 1/2).
  EXPECT_FALSE(r2.support_exit);
  EXPECT_NEAR(r2.value, 0.5, 1e-12);
}

TEST(Horizon, FloorAndCap) {
  EXPECT_EQ(horizon_n(std::pow(0.5, 10), RecurrenceSpec({1, 2}, 1.0)), 1048576u);
  EXPECT_EQ(horizon_n(0.5, RecurrenceSpec({1}, 1.0)), 2u);
  EXPECT_EQ(horizon_n(std::pow(0.1, 6), RecurrenceSpec({1}, 1.0)), 1000000u);
  EXPECT_EQ(horizon_n_from_log(6 * std::log(0.1), RecurrenceSpec({1}, 1.0)), 1000000u);
  EXPECT_EQ(horizon_n(0.3, RecurrenceSpec({1}, 1.0)), 3u);
  EXPECT_EQ(horizon_n(std::pow(0.5, 7), RecurrenceSpec({1, 2}, 1.0)), 16384u);
  EXPECT_EQ(code_of([] { horizon_n(std::pow(0.5, 30), RecurrenceSpec({1}, 1.0)); }), ErrorCode::horizon_too_large);
  EXPECT_EQ(horizon_n(std::pow(0.5, 30), RecurrenceSpec({1}, 1.0), std::uint64_t{1} << 31), 1u << 30);
  EXPECT_EQ(code_of([] { horizon_n_from_log(-2000.0, RecurrenceSpec({1}, 1.0), 1000); }),
            ErrorCode::horizon_too_large);
  EXPECT_EQ(horizon_n_from_log(std::log(0.25), RecurrenceSpec({1, 2}, 2.0)), 32u);
}

TEST(Horizon, EnvironmentOverride) {
  ::setenv("RECLAB_MAX_HORIZON", "12345", 1);
  EXPECT_EQ(default_max_horizon(), 12345u);
  ::setenv("RECLAB_MAX_HORIZON", "junk", 1);
  EXPECT_EQ(default_max_horizon(), kDefaultMaxHorizon);
  ::unsetenv("RECLAB_MAX_HORIZON");
  EXPECT_EQ(default_max_horizon(), kDefaultMaxHorizon);
}

TEST(Gap, LinearFamily) {
  const auto a = gap_profile(RecurrenceSpec({1, 2}, 1.0), 7);
  EXPECT_EQ(a.g, 7u);
  EXPECT_EQ(a.gamma, 14u);
  const auto b = gap_profile(RecurrenceSpec({2, 5}, 1.0), 6);
  EXPECT_EQ(b.g, 18u);
  EXPECT_EQ(b.gamma, 4u);
  const auto c = gap_profile(RecurrenceSpec({3}, 1.0), 6);
  EXPECT_FALSE(c.g.has_value());
  EXPECT_EQ(c.gamma, 0u);
}

TEST(Gap, GeneralCallbackAgreesOnLinear) {
  const std::vector<std::uint64_t> d{2, 5};
  const auto q = [&](std::size_t i, std::uint64_t k) { return d[i] * k; };
  const auto p = gap_profile(q, 2, 6);
  EXPECT_EQ(p.g, 18u);
  EXPECT_EQ(p.gamma, 4u);
  // Quadratic q_2(k) = k^2 against q_1(k) = k: gap k^2 - k >= 2n = 8 first at k = 4.
  const auto quad = gap_profile([](std::size_t i, std::uint64_t k) { return i == 0 ? k : k * k; }, 2, 4);
  EXPECT_EQ(quad.gamma, 4u);
  EXPECT_EQ(quad.g, 12u);
}

TEST(Counts, Examples) {
  EXPECT_EQ(count_hits(ones(10), Word{1}, RecurrenceSpec({1, 2}, 1.0), 3), 3u);
  // X_1 = w1 w2 = 1, X_2 = w2 w4 = 1.
  EXPECT_EQ(count_hits(Word{0, 1, 1, 0, 1, 0, 0}, Word{1}, RecurrenceSpec({1, 2}, 1.0), 2), 2u);
  EXPECT_EQ(count_hits(Word{0, 1}, Word{1}, RecurrenceSpec({1}, 1.0), 0), 0u);
  EXPECT_EQ(code_of([] { count_hits(Word{0, 1, 1}, Word{1}, RecurrenceSpec({1, 2}, 1.0), 2); }),
            ErrorCode::invalid_input);
}

TEST(Counts, HittingExamples) {
  EXPECT_EQ(hitting_time(ones(5), Word{1}, RecurrenceSpec({1}, 1.0), 3), 1u);
  EXPECT_EQ(hitting_time(Word{0, 0, 0, 1, 0}, Word{1}, RecurrenceSpec({1}, 1.0), 4), 3u);
  EXPECT_EQ(hitting_time(Word(std::vector<Symbol>(60, 0)), Word{1}, RecurrenceSpec({1}, 1.0), 50), std::nullopt);
}

TEST(Counts, MatchesNaiveOnRandomPaths) {
  const BernoulliMeasure u({0.5, 0.5});
  const std::vector<std::vector<std::uint64_t>> families{{1}, {2}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Word path = u.sample_path(400, seed);
    const Word a = u.sample_path(1 + seed % 3, seed + 1000);
    for (const auto& d : families) {
      const RecurrenceSpec spec(d, 1.0);
      const std::uint64_t n_terms = (400 - a.size()) / spec.d_max();
      ASSERT_EQ(count_hits(path, a, spec, n_terms), naive_count(path, a, d, n_terms));
      const auto tau = hitting_time(path, a, spec, n_terms);
      std::optional<std::uint64_t> expected;
      for (std::uint64_t k = 1; k <= n_terms && !expected; ++k)
        if (naive_count(path, a, d, k) == 1 && naive_count(path, a, d, k - 1) == 0) expected = k;
      ASSERT_EQ(tau, expected);
    }
  }
}

TEST(Context, CollectsDerivedQuantities) {
  const BernoulliMeasure u({0.5, 0.5});
  const auto ctx = make_context(u, ones(10), RecurrenceSpec({1, 2}, 1.0));
  EXPECT_EQ(ctx.r, 1u);
  EXPECT_EQ(ctx.kappa, 1u);
  EXPECT_EQ(ctx.horizon, 1048576u);
  EXPECT_NEAR(ctx.rho.value, 0.125, 1e-15);
  EXPECT_EQ(required_path_length(RecurrenceSpec({1, 2}, 1.0), 10, 3), 23u);
}
