#include "reclab/bounds.hpp"

#include <cmath>
#include <limits>

#include "reclab/distributions.hpp"
#include "reclab/error.hpp"

namespace reclab {
namespace {

double pow2(double e) { return std::exp2(e); }

double ipow(double x, std::uint64_t k) { return std::pow(x, static_cast<double>(k)); }

void check_psi(const BoundInputs& in) {
  const double threshold = psi_threshold(in.ell);
  if (!(in.psin < threshold)) {
    throw HypothesisError("psi_n", threshold,
                          "psi_n = " + std::to_string(in.psin) +
                              " violates psi_n < (3/2)^{1/(ell+1)} - 1 = " + std::to_string(threshold));
  }
}

void check_length(const BoundInputs& in) {
  const std::uint64_t limit = in.r * (in.d_max + 6);
  if (!(in.n > limit)) {
    throw HypothesisError("n > r(d_max + 6)", static_cast<double>(limit),
                          "n = " + std::to_string(in.n) + " must exceed r(d_max + 6) = " +
                              std::to_string(limit));
  }
}

}  // namespace

void BoundInputs::validate() const {
  require(n >= 1 && ell >= 1 && r >= 1 && d_max >= 1 && kappa >= 1,
          "n, ell, r, d_max and kappa must be positive integers");
  require(r <= n, "r = pi(A) cannot exceed n");
  require(std::isfinite(t) && t >= 0.0, "t must be nonnegative");
  require(prob > 0.0 && prob <= 1.0, "P(A) must lie in (0, 1]");
  require(prob_period > 0.0 && prob_period <= 1.0, "P(A(pi)) must lie in (0, 1]");
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(std::isfinite(gamma_rate) && gamma_rate > 0.0, "decay rate Gamma must be positive");
  require(psi0 >= 0.0 && psin >= 0.0 && psin <= psi0, "need 0 <= psi_n <= psi_0");
}

nlohmann::json BoundInputs::to_json() const {
  return {{"n", n},         {"ell", ell},     {"t", t},       {"prob", prob},
          {"prob_period", prob_period},       {"r", r},       {"d_max", d_max},
          {"kappa", kappa}, {"rho", rho},     {"psi0", psi0}, {"psin", psin},
          {"gamma_rate", gamma_rate},         {"gamma_n", gamma_n}, {"iid", iid}};
}

BoundInputs BoundInputs::from_json(const nlohmann::json& j) {
  BoundInputs in;
  try {
    in.n = j.at("n").get<std::uint64_t>();
    in.ell = j.value("ell", std::uint64_t{1});
    in.t = j.value("t", 1.0);
    in.prob = j.at("prob").get<double>();
    in.prob_period = j.value("prob_period", in.prob);
    in.r = j.value("r", in.n);
    in.d_max = j.value("d_max", std::uint64_t{1});
    in.kappa = j.value("kappa", std::uint64_t{1});
    in.rho = j.value("rho", 0.0);
    in.psi0 = j.value("psi0", 0.0);
    in.psin = j.value("psin", 0.0);
    in.gamma_rate = j.at("gamma_rate").get<double>();
    in.gamma_n = j.value("gamma_n", std::uint64_t{0});
    in.iid = j.value("iid", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("bad bound inputs: ") + e.what());
  }
  in.validate();
  return in;
}

double psi_threshold(std::uint64_t ell) {
  return std::pow(1.5, 1.0 / static_cast<double>(ell + 1)) - 1.0;
}

double thm21_bound(const BoundInputs& in) {
  in.validate();
  require(in.t > 0.0, "t must be positive");
  check_psi(in);
  const double l = static_cast<double>(in.ell), n = static_cast<double>(in.n);
  const double g = static_cast<double>(in.gamma_n);
  return 16.0 * in.prob * (l * l * n * in.t + g * (1.0 + 1.0 / in.t)) +
         6.0 * in.prob_period * in.t * n * l * l * (1.0 + in.psi0) +
         2.0 * wp(pow2(l) * in.t * in.psin + g * in.prob);
}

double thm23_bound(const BoundInputs& in) {
  in.validate();
  require(in.t > 0.0, "t must be positive");
  check_psi(in);
  check_length(in);
  const double l = static_cast<double>(in.ell), n = static_cast<double>(in.n);
  const double d = static_cast<double>(in.d_max);
  const double mix = ipow(1.0 + in.psi0, 2 * in.ell);
  const double decay = std::exp(-in.gamma_rate * n / 2.0);
  return pow2(2.0 * l + 7.0) * mix *
             (d * l * l * std::pow(n, 4) * decay + in.psin / (1.0 - std::exp(-in.gamma_rate))) +
         2.0 * wp(10.0 * mix * d * n * n * (in.t + 1.0) * decay + pow2(l) * in.t * in.psin);
}

double cor25_bound(const BoundInputs& in) {
  in.validate();
  check_psi(in);
  if (in.t < 1e-9) return std::numeric_limits<double>::infinity();
  const double l = static_cast<double>(in.ell), n = static_cast<double>(in.n);
  const double d = static_cast<double>(in.d_max);
  const double mix = ipow(1.0 + in.psi0, 2 * in.ell);
  return pow2(2.0 * l + 8.0) * mix * (in.t + 1.0) *
             (in.psin / (1.0 - std::exp(-in.gamma_rate)) +
              d * l * l * std::pow(n, 4) * (1.0 + 1.0 / in.t) *
                  std::exp(-in.gamma_rate * n / (d + 6.0))) +
         2.0 * wp(pow2(l) * in.t * in.psin +
                  10.0 * std::exp(-in.gamma_rate * n / 2.0) * mix * d * n * n * (in.t + 1.0));
}

double thm26_bound(const BoundInputs& in) {
  in.validate();
  if (!in.iid) fail(ErrorCode::wrong_model, "the geometric compound bound needs an i.i.d. model");
  check_length(in);
  const double l = static_cast<double>(in.ell), n = static_cast<double>(in.n);
  const double d = static_cast<double>(in.d_max);
  const double decay = std::exp(-in.gamma_rate * n / 2.0);
  const double m = static_cast<double>(in.n / in.r + 1);  // [n/r] + 1
  const double poisson_tail =
      in.t > 0.0 ? std::exp(m * std::log(in.t) - std::lgamma(m + 1.0)) : 0.0;
  return pow2(2.0 * l + 8.0) * (in.t + 1.0) * l * l * d * std::pow(n, 4) * decay +
         2.0 * wp(12.0 * d * n * n * (in.t + 1.0) * decay) + poisson_tail;
}

double evaluate_bound(const std::string& name, const BoundInputs& in) {
  if (name == "thm21") return thm21_bound(in);
  if (name == "thm23") return thm23_bound(in);
  if (name == "cor25") return cor25_bound(in);
  if (name == "thm26") return thm26_bound(in);
  fail(ErrorCode::invalid_input, "unknown bound \"" + name + "\" (thm21, thm23, cor25, thm26)");
}

BoundInputs assemble_bound_inputs(const Measure& model, const Word& a, const RecurrenceSpec& spec) {
  a.validate(model.alphabet());
  BoundInputs in;
  in.n = a.size();
  in.ell = spec.ell();
  in.t = spec.t();
  in.prob = model.cylinder_prob(a);
  in.r = principal_period(a);
  in.prob_period = model.cylinder_prob(a.prefix(in.r));
  in.d_max = spec.d_max();
  in.kappa = kappa(in.r, spec);
  in.rho = rho(model, a, spec).value;
  in.psi0 = model.psi(0).value;
  in.psin = model.psi(static_cast<std::int64_t>(in.n)).value;
  in.gamma_rate = model.decay_rate().gamma;
  in.gamma_n = gap_profile(spec, in.n).gamma;
  in.iid = model.is_iid();
  return in;
}

}  // namespace reclab
