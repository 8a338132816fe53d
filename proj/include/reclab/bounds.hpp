#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "reclab/measures.hpp"
#include "reclab/recurrence.hpp"

namespace reclab {

/// Inputs of the approximation error bounds.
struct BoundInputs {
  std::uint64_t n = 1;           // word length
  std::uint64_t ell = 1;
  double t = 1.0;
  double prob = 0.0;             // P(A)
  double prob_period = 0.0;      // P(A(pi)), the cylinder of the first r symbols
  std::uint64_t r = 1;           // pi(A)
  std::uint64_t d_max = 1;
  std::uint64_t kappa = 1;
  double rho = 0.0;
  double psi0 = 0.0;
  double psin = 0.0;
  double gamma_rate = 0.0;       // decay rate Gamma
  std::uint64_t gamma_n = 0;     // gap function gamma(n)
  bool iid = false;

  void validate() const;
  nlohmann::json to_json() const;
  static BoundInputs from_json(const nlohmann::json& j);
};

/// Largest psi_n the bounds accept: (3/2)^{1/(ell+1)} - 1.
double psi_threshold(std::uint64_t ell);

/// Poisson approximation bound for sup_L |P(S_N in L) - P_t(L)|.
double thm21_bound(const BoundInputs& in);

/// Compound Poisson bound; needs n > r (d_max + 6).
double thm23_bound(const BoundInputs& in);

/// Hitting-time bound on |P(P(A)^ell tau_A > t) - exp(-(1-rho) t)|.
/// Returns +infinity for t < 1e-9, where the (1 + 1/t) factor diverges.
double cor25_bound(const BoundInputs& in);

/// Geometric compound (Polya-Aeppli) bound for i.i.d. models.
double thm26_bound(const BoundInputs& in);

/// Bound name -> evaluator dispatch ("thm21", "thm23", "cor25", "thm26").
double evaluate_bound(const std::string& name, const BoundInputs& in);

/// Assembles inputs from a model, a target word and a recurrence.
BoundInputs assemble_bound_inputs(const Measure& model, const Word& a, const RecurrenceSpec& spec);

}  // namespace reclab
