#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

namespace reclab {

/// Probability mass function on {0..kmax} with a certified bound on the mass
/// beyond kmax.
struct Pmf {
  std::vector<double> mass;
  double tail_bound = 0.0;

  double at(std::size_t k) const noexcept { return k < mass.size() ? mass[k] : 0.0; }
  std::size_t kmax() const noexcept { return mass.empty() ? 0 : mass.size() - 1; }
  double total() const noexcept;
  double mean() const noexcept;

  /// Throws invalid_input unless entries are >= 0 and total + tail is 1
  /// within 1e-9.
  void validate() const;

  /// {"mass":[...],"tail":...}
  nlohmann::json to_json() const;
  static Pmf from_json(const nlohmann::json& j);

  static Pmf point_mass(std::size_t k);
};

/// x e^x.
double wp(double x);

/// Truncation target used when kmax is not given.
inline constexpr double kDefaultTail = 1e-10;

Pmf poisson_pmf(double t, std::optional<std::size_t> kmax = std::nullopt);

/// Law of sum_{k<=W} eta_k, W ~ Poisson(s), eta_k i.i.d. ~ cluster on {1..m}.
/// Panjer recursion; the tail is the exact complement of the computed mass.
Pmf compound_pmf(double s, const Pmf& cluster, std::optional<std::size_t> kmax = std::nullopt);

/// Polya-Aeppli law: W ~ Poisson(t(1-rho)) and geometric(rho) clusters
/// P(zeta = k) = (1-rho) rho^{k-1}.
Pmf polya_aeppli_pmf(double t, double rho, std::optional<std::size_t> kmax = std::nullopt);

struct TvDistance {
  double value = 0.0;
  /// Half the sum of the tail bounds; the true distance lies within
  /// value +- radius.
  double radius = 0.0;
};

/// sup over sets L of |p(L) - q(L)|, i.e. half the l1 distance.
TvDistance tv_distance(const Pmf& p, const Pmf& q);

}  // namespace reclab
