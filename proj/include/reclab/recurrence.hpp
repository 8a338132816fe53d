#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "reclab/measures.hpp"
#include "reclab/symbolic.hpp"

namespace reclab {

/// Linear recurrence family q_i(k) = d_i k, 1 <= d_1 < ... < d_ell, with
/// intensity t.
class RecurrenceSpec {
 public:
  RecurrenceSpec(std::vector<std::uint64_t> d, double t);

  /// {"d":[1,2],"t":1.0}
  static RecurrenceSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t ell() const noexcept { return d_.size(); }
  const std::vector<std::uint64_t>& d() const noexcept { return d_; }
  std::uint64_t d_max() const noexcept { return d_.back(); }
  double t() const noexcept { return t_; }

  RecurrenceSpec with_t(double t) const { return RecurrenceSpec(d_, t); }

 private:
  std::vector<std::uint64_t> d_;
  double t_;
};

inline constexpr std::uint64_t kDefaultMaxHorizon = 100'000'000;

/// Horizon cap: RECLAB_MAX_HORIZON when set, otherwise 10^8.
std::uint64_t default_max_horizon();

/// lcm over i of r / gcd(r, d_i).
std::uint64_t kappa(std::uint64_t r, const RecurrenceSpec& spec);

/// Least lag l in {1..n} such that hits at some far-out m and at m + l are
/// jointly satisfiable on the full shift, found by placing the 2*ell copies
/// of A and checking symbol conflicts. Requires n >= r (d_ell + 1).
std::uint64_t minimal_feasible_lag(const Word& a, const RecurrenceSpec& spec);

struct RhoResult {
  double value = 0.0;
  /// Set when P(A) > 0 but some periodic extension has probability 0.
  bool support_exit = false;
};

/// rho_A = prod_i P(R^{(n + d_i kappa)/r} | A).
RhoResult rho(const Measure& model, const Word& a, const RecurrenceSpec& spec);

/// floor(t * prob^{-ell}); horizon_too_large beyond `max_horizon`.
std::uint64_t horizon_n(double prob, const RecurrenceSpec& spec,
                        std::uint64_t max_horizon = default_max_horizon());

/// Same, from log P(A); used when P(A) underflows.
std::uint64_t horizon_n_from_log(double log_prob, const RecurrenceSpec& spec,
                                 std::uint64_t max_horizon = default_max_horizon());

struct GapProfile {
  std::optional<std::uint64_t> g;  // nullopt = infinity (ell = 1)
  std::uint64_t gamma = 0;
};

/// g(n) and gamma(n) for the linear family.
GapProfile gap_profile(const RecurrenceSpec& spec, std::uint64_t n);

/// g(n) and gamma(n) for general increasing q_i given as q(i, k), i in
/// [0, ell). The infimum over k >= n is taken over the finite window
/// [n, n + window].
GapProfile gap_profile(const std::function<std::uint64_t(std::size_t, std::uint64_t)>& q,
                       std::size_t ell, std::uint64_t n, std::uint64_t window = 4096);

/// Path length needed to evaluate X_1..X_n_terms: d_ell * n_terms + n.
std::uint64_t required_path_length(const RecurrenceSpec& spec, std::uint64_t n_terms,
                                   std::size_t word_length);

/// S_N^A on a path (0-based positions, k from 1).
std::uint64_t count_hits(const Word& path, const Word& a, const RecurrenceSpec& spec,
                         std::uint64_t n_terms);

/// Least k in 1..max_k with X_k = 1, or nullopt.
std::optional<std::uint64_t> hitting_time(const Word& path, const Word& a,
                                          const RecurrenceSpec& spec, std::uint64_t max_k);

/// match[p] = 1 iff the window of the path starting at p equals `a`.
/// Linear time (Knuth-Morris-Pratt).
std::vector<std::uint8_t> match_positions(std::span<const Symbol> path, const Word& a);

/// Everything derived from (model, A, spec) that the bounds use.
struct CylinderContext {
  Word word;
  std::size_t r = 0;
  Word r_word;
  std::uint64_t kappa = 0;
  RhoResult rho;
  double prob = 0.0;
  double log_prob = 0.0;
  std::uint64_t horizon = 0;
};

CylinderContext make_context(const Measure& model, const Word& a, const RecurrenceSpec& spec,
                             std::uint64_t max_horizon = default_max_horizon());

}  // namespace reclab
