#include "reclab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reclab/error.hpp"

namespace reclab {
namespace {

constexpr std::size_t kMaxSupport = 1'000'000;

// Rounding slack added to 1 - sum(mass) so the tail stays an upper bound.
double rounding_slack(std::size_t terms) {
  return 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(terms + 1);
}

double complement_tail(const std::vector<double>& mass) {
  double sum = 0.0;
  for (double m : mass) sum += m;
  return std::max(0.0, 1.0 - sum) + rounding_slack(mass.size());
}

}  // namespace

double Pmf::total() const noexcept {
  double sum = 0.0;
  for (double m : mass) sum += m;
  return sum;
}

double Pmf::mean() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) sum += static_cast<double>(k) * mass[k];
  return sum;
}

void Pmf::validate() const {
  require(!mass.empty(), "pmf needs at least one cell");
  for (double m : mass) require(std::isfinite(m) && m >= 0.0, "pmf entries must be nonnegative");
  require(std::isfinite(tail_bound) && tail_bound >= 0.0, "pmf tail bound must be nonnegative");
  require(std::abs(total() + tail_bound - 1.0) <= 1e-9, "pmf is not normalized");
}

nlohmann::json Pmf::to_json() const { return {{"mass", mass}, {"tail", tail_bound}}; }

Pmf Pmf::from_json(const nlohmann::json& j) {
  try {
    Pmf p{j.at("mass").get<std::vector<double>>(), j.value("tail", 0.0)};
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("bad pmf: ") + e.what());
  }
}

Pmf Pmf::point_mass(std::size_t k) {
  Pmf p;
  p.mass.assign(k + 1, 0.0);
  p.mass[k] = 1.0;
  return p;
}

double wp(double x) {
  require(x >= 0.0, "wp needs x >= 0");
  return x * std::exp(x);
}

Pmf poisson_pmf(double t, std::optional<std::size_t> kmax) {
  require(std::isfinite(t) && t >= 0.0, "Poisson parameter must be nonnegative");
  if (t == 0.0) return Pmf::point_mass(0);
  // log of the analytic tail bound t^{k+1}/(k+1)!
  const auto log_tail_bound = [t](std::size_t k) {
    return static_cast<double>(k + 1) * std::log(t) - std::lgamma(static_cast<double>(k) + 2.0);
  };
  std::size_t last = 0;
  if (kmax) {
    last = *kmax;
  } else {
    last = static_cast<std::size_t>(std::ceil(t));
    while (log_tail_bound(last) >= std::log(kDefaultTail)) {
      ++last;
      require(last < kMaxSupport, "Poisson support too large");
    }
  }
  Pmf p;
  p.mass.resize(last + 1);
  for (std::size_t k = 0; k <= last; ++k)
    p.mass[k] = std::exp(-t + static_cast<double>(k) * std::log(t) - std::lgamma(static_cast<double>(k) + 1.0));
  p.tail_bound = std::min(std::exp(log_tail_bound(last)), complement_tail(p.mass));
  return p;
}

Pmf compound_pmf(double s, const Pmf& cluster, std::optional<std::size_t> kmax) {
  require(std::isfinite(s) && s > 0.0, "compound Poisson rate must be positive");
  require(s < 700.0, "compound Poisson rate too large for the recursion");
  cluster.validate();
  require(cluster.mass[0] == 0.0, "cluster sizes must be at least 1");
  require(cluster.tail_bound <= 1e-12, "cluster law must be fully specified on {1..m}");

  // Panjer: g_0 = e^{-s}, g_k = (s/k) sum_{j=1}^{min(k,m)} j f_j g_{k-j}.
  Pmf out;
  out.mass.push_back(std::exp(-s));
  double sum = out.mass[0];
  for (std::size_t k = 1;; ++k) {
    if (kmax ? k > *kmax : (1.0 - sum) < kDefaultTail) break;
    require(k < kMaxSupport, "compound support too large");
    double acc = 0.0;
    for (std::size_t j = 1; j <= std::min(k, cluster.kmax()); ++j)
      acc += static_cast<double>(j) * cluster.mass[j] * out.mass[k - j];
    out.mass.push_back(s * acc / static_cast<double>(k));
    sum += out.mass.back();
  }
  out.tail_bound = complement_tail(out.mass);
  return out;
}

Pmf polya_aeppli_pmf(double t, double rho, std::optional<std::size_t> kmax) {
  require(std::isfinite(t) && t > 0.0, "Polya-Aeppli intensity must be positive");
  require(std::isfinite(rho) && rho >= 0.0 && rho < 1.0, "Polya-Aeppli needs 0 <= rho < 1");
  const double lambda = t * (1.0 - rho);
  require(lambda < 700.0, "Polya-Aeppli rate too large for the recursion");
  // From (1 - rho z)^2 G'(z) = lambda (1 - rho) G(z):
  // (k+1) P_{k+1} = (2 rho k + lambda (1-rho)) P_k - rho^2 (k-1) P_{k-1}.
  Pmf out;
  out.mass.push_back(std::exp(-lambda));
  double sum = out.mass[0];
  for (std::size_t k = 0;; ++k) {
    const std::size_t next = k + 1;
    if (kmax ? next > *kmax : (1.0 - sum) < kDefaultTail) break;
    require(next < kMaxSupport, "Polya-Aeppli support too large");
    const double kd = static_cast<double>(k);
    const double prev = k >= 1 ? out.mass[k - 1] : 0.0;
    const double v = ((2.0 * rho * kd + lambda * (1.0 - rho)) * out.mass[k] -
                      rho * rho * (kd - 1.0) * prev) /
                     static_cast<double>(next);
    out.mass.push_back(std::max(0.0, v));
    sum += out.mass.back();
  }
  out.tail_bound = complement_tail(out.mass);
  return out;
}

TvDistance tv_distance(const Pmf& p, const Pmf& q) {
  p.validate();
  q.validate();
  const std::size_t n = std::max(p.mass.size(), q.mass.size());
  double l1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) l1 += std::abs(p.at(k) - q.at(k));
  return {std::min(1.0, 0.5 * l1), 0.5 * (p.tail_bound + q.tail_bound)};
}

}  // namespace reclab
