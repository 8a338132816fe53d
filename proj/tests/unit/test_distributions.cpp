#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "reclab/distributions.hpp"
#include "reclab/error.hpp"

using namespace reclab;

namespace {

double poisson_at(double t, std::size_t k) { return std::exp(-t + k * std::log(t) - std::lgamma(k + 1.0)); }

}  // namespace

TEST(Pmf, Basics) {
  const Pmf p{{0.25, 0.5, 0.25}, 0.0};
  EXPECT_DOUBLE_EQ(p.total(), 1.0);
  EXPECT_DOUBLE_EQ(p.mean(), 1.0);
  EXPECT_EQ(p.kmax(), 2u);
  EXPECT_EQ(p.at(7), 0.0);
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW((Pmf{{0.5, 0.4}, 0.0}).validate(), Error);
  EXPECT_THROW((Pmf{{1.2, -0.2}, 0.0}).validate(), Error);
  EXPECT_EQ(Pmf::from_json(p.to_json()).mass, p.mass);
  EXPECT_EQ(Pmf::point_mass(3).mass, (std::vector<double>{0, 0, 0, 1}));
}

TEST(Poisson, MassesAndTail) {
  const Pmf p = poisson_pmf(1.0);
  for (std::size_t k = 0; k <= 10; ++k) EXPECT_NEAR(p.at(k), poisson_at(1.0, k), 1e-15);
  EXPECT_LE(p.tail_bound, kDefaultTail);
  EXPECT_NEAR(p.total() + p.tail_bound, 1.0, 1e-12);
  const Pmf big = poisson_pmf(40.0);
  EXPECT_NEAR(big.mean(), 40.0, 1e-6);
  const Pmf cut = poisson_pmf(2.0, 3);
  EXPECT_EQ(cut.kmax(), 3u);
  EXPECT_NEAR(cut.tail_bound, 1.0 - (poisson_at(2, 0) + poisson_at(2, 1) + poisson_at(2, 2) + poisson_at(2, 3)), 1e-14);
  EXPECT_EQ(poisson_pmf(0.0).mass, (std::vector<double>{1.0}));
  EXPECT_THROW(poisson_pmf(-1.0), Error);
}

TEST(Compound, UnitClusterIsPoisson) {
  const Pmf c = compound_pmf(1.7, Pmf{{0.0, 1.0}, 0.0});
  const Pmf p = poisson_pmf(1.7);
  for (std::size_t k = 0; k <= 15; ++k) EXPECT_NEAR(c.at(k), p.at(k), 1e-14);
}

TEST(Compound, MatchesDirectMixture) {
  // W ~ Poisson(0.5), clusters uniform on {1, 2}: sum over w of P(W = w) times
  // the w-fold convolution.
  const double s = 0.5;
  const std::size_t kmax = 30;
  std::vector<double> expected(kmax + 1, 0.0);
  std::vector<double> conv{1.0};
  for (std::size_t w = 0; w <= kmax; ++w) {
    for (std::size_t k = 0; k < conv.size() && k <= kmax; ++k) expected[k] += poisson_at(s, w) * conv[k];
    std::vector<double> next(conv.size() + 2, 0.0);
    for (std::size_t k = 0; k < conv.size(); ++k) {
      next[k + 1] += 0.5 * conv[k];
      next[k + 2] += 0.5 * conv[k];
    }
    conv = next;
  }
  const Pmf c = compound_pmf(s, Pmf{{0.0, 0.5, 0.5}, 0.0}, kmax);
  for (std::size_t k = 0; k <= kmax; ++k) EXPECT_NEAR(c.at(k), expected[k], 1e-14) << k;
  EXPECT_THROW(compound_pmf(1.0, Pmf{{0.5, 0.5}, 0.0}), Error);
}

TEST(PolyaAeppli, FrozenMasses) {
  const std::vector<double> frozen{0.6703200460356393, 0.10725120736570229, 0.07293082100867755,
                                   0.04936415571018724, 0.033274758586014044, 0.02234590288392549};
  const Pmf pa = polya_aeppli_pmf(1.0, 0.6);
  for (std::size_t k = 0; k < frozen.size(); ++k) EXPECT_NEAR(pa.at(k), frozen[k], 1e-14) << k;
  EXPECT_NEAR(pa.mean(), 1.0, 1e-8);  // t(1 - rho) clusters of mean 1/(1 - rho)
  EXPECT_NEAR(polya_aeppli_pmf(1.0, 0.5).at(1), std::exp(-0.5) * 0.25, 1e-15);
}

TEST(PolyaAeppli, ZeroRhoIsPoissonAndEqualsCompound) {
  const Pmf a = polya_aeppli_pmf(1.3, 0.0);
  const Pmf b = poisson_pmf(1.3);
  for (std::size_t k = 0; k <= 12; ++k) EXPECT_NEAR(a.at(k), b.at(k), 1e-15);
  const double rho = 0.35;
  std::vector<double> geo(60, 0.0);
  for (std::size_t k = 1; k < geo.size(); ++k) geo[k] = (1 - rho) * std::pow(rho, k - 1.0);
  double sum = 0.0;
  for (double g : geo) sum += g;
  geo.back() += 1.0 - sum;  // residual mass, far beyond the compared range
  const Pmf c = compound_pmf(2.0 * (1 - rho), Pmf{geo, 0.0}, 25);
  const Pmf pa = polya_aeppli_pmf(2.0, rho, 25);
  for (std::size_t k = 0; k <= 25; ++k) EXPECT_NEAR(c.at(k), pa.at(k), 1e-13);
}

TEST(Tv, ValuesAndRadius) {
  const auto d = tv_distance(poisson_pmf(1.0), poisson_pmf(1.2));
  EXPECT_NEAR(d.value, 0.07313161613604004, 1e-10);
  EXPECT_LE(d.radius, 1e-10);
  EXPECT_NEAR(tv_distance(Pmf::point_mass(0), poisson_pmf(1.0)).value, 1.0 - std::exp(-1.0), 1e-10);
  EXPECT_EQ(tv_distance(Pmf::point_mass(2), Pmf::point_mass(2)).value, 0.0);
  const auto rough = tv_distance(poisson_pmf(1.0, 2), poisson_pmf(1.0, 2));
  EXPECT_GT(rough.radius, 0.0);
}

TEST(Tv, PoissonShiftBound) {
  for (double lam = 0.1; lam <= 3.0; lam += 0.3)
    for (double gam = 0.1; gam <= 3.0; gam += 0.3) {
      const double full = 2.0 * tv_distance(poisson_pmf(lam, 200), poisson_pmf(gam, 200)).value;
      EXPECT_LE(full, 2.0 * wp(std::abs(lam - gam)) + 1e-12);
    }
  EXPECT_DOUBLE_EQ(wp(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wp(1.0), std::exp(1.0));
}
