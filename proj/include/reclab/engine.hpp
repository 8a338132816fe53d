#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reclab/bounds.hpp"
#include "reclab/distributions.hpp"
#include "reclab/measures.hpp"
#include "reclab/recurrence.hpp"

namespace reclab {

/// Worker threads used for trials. 0 (the default) means
/// std::thread::hardware_concurrency(). Results never depend on it.
void set_thread_count(unsigned threads);
unsigned thread_count();

struct EmpiricalDistribution {
  std::map<std::uint64_t, std::uint64_t> counts;  // value -> occurrences
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  Pmf to_pmf() const;
  double mean() const;
  nlohmann::json to_json() const;  // counts as [[value, occurrences], ...]
};

/// A bound evaluation; `value` is empty when a hypothesis fails or the
/// bound is infinite, and `note` says why.
struct BoundValue {
  std::string name;
  std::optional<double> value;
  std::string note;

  nlohmann::json to_json() const;
};

struct ExperimentReport {
  EmpiricalDistribution empirical;
  Pmf target;
  double tv = 0.0;
  double tv_radius = 0.0;  // truncation radius of the target
  double mc_radius = 0.0;  // 99% Monte Carlo radius of the plug-in distance
  std::optional<BoundValue> bound;
  nlohmann::json config;

  nlohmann::json to_json() const;
};

/// Streaming S_N / tau evaluator for one target word. Reads fresh symbols from
/// a sampler in chunks and keeps the path only when ell > 1.
class HitScanner {
 public:
  HitScanner(const Word& a, const RecurrenceSpec& spec);

  /// S_N on the next d_ell N + n symbols of `source`.
  std::uint64_t count(PathSampler& source, std::uint64_t n_terms);
  /// Least k <= max_k with X_k = 1, reading only as far as needed.
  std::optional<std::uint64_t> first_hit(PathSampler& source, std::uint64_t max_k);

 private:
  template <class OnMatch>
  void scan(PathSampler& source, std::uint64_t length, OnMatch&& on_match);

  Word word_;
  RecurrenceSpec spec_;
  std::vector<std::uint32_t> automaton_;  // (n + 1) x alphabet, empty -> use borders
  std::vector<std::size_t> border_;
  std::uint32_t alphabet_ = 0;
  std::vector<Symbol> chunk_;
  std::vector<std::uint64_t> matches_;  // bitset over window starts, ell > 1
};

/// Empirical law of S_N over fresh paths; N = horizon_n(P(A), spec).
EmpiricalDistribution simulate_counts(const Measure& model, const Word& a,
                                      const RecurrenceSpec& spec, std::uint64_t trials,
                                      std::uint64_t seed,
                                      std::uint64_t max_horizon = default_max_horizon());
/// Same with an explicit number of terms N.
EmpiricalDistribution simulate_counts_n(const Measure& model, const Word& a,
                                        const RecurrenceSpec& spec, std::uint64_t n_terms,
                                        std::uint64_t trials, std::uint64_t seed);

/// Cap on the number of enumerated assignments: alphabet^|P| <= 2^24.
inline constexpr std::uint64_t kDefaultExactCap = std::uint64_t{1} << 24;

/// Exact law of S_N by enumerating the symbols at the read positions
/// P = union over k <= N and i of {d_i k, ..., d_i k + n - 1}.
Pmf exact_distribution(const Measure& model, const Word& a, const RecurrenceSpec& spec,
                       std::uint64_t n_terms, std::uint64_t cap = kDefaultExactCap);

/// sqrt(ln(2/0.01) / (2 trials)).
double dkw_epsilon(std::uint64_t trials);

ExperimentReport compare_to_target(const EmpiricalDistribution& emp, const Pmf& target,
                                   std::optional<BoundValue> bound = std::nullopt,
                                   nlohmann::json config = nullptr);

struct NonconvergenceRow {
  std::uint64_t n = 0;
  std::uint64_t horizon = 0;
  double theta = 0.0;
  double limit = 0.0;  // limit along the parity class of n
};

struct NonconvergenceTable {
  double p1 = 0.0;
  double t = 0.0;
  double limit_even = 0.0;  // exp(-t (1 - 2 p0 p1))
  double limit_odd = 0.0;   // exp(-t / 2)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double mc_radius = 0.0;
  std::vector<NonconvergenceRow> rows;

  nlohmann::json to_json() const;
};

/// theta_n = P(S_N = 0) for A = 1^n, ell = 1, d = (1) under the XOR-coupled
/// measure. Rows follow n_list; row n uses base seed derive_seed(seed, n).
NonconvergenceTable nonconvergence_sweep(double p1, double t,
                                         const std::vector<std::uint64_t>& n_list,
                                         std::uint64_t trials, std::uint64_t seed,
                                         std::uint64_t max_horizon = default_max_horizon());

struct SurvivalRow {
  double t = 0.0;
  std::uint64_t threshold = 0;  // floor(t P(A)^-ell): survival means tau > threshold
  double survival = 0.0;
  double prediction = 0.0;  // exp(-(1 - rho) t)
  BoundValue bound;
};

struct SurvivalTable {
  double prob = 0.0;
  double rho = 0.0;
  std::uint64_t max_k = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t censored = 0;  // trials with tau > max_k
  double mc_radius = 0.0;
  std::vector<SurvivalRow> rows;

  nlohmann::json to_json() const;
};

/// Empirical P(P(A)^ell tau_A > t) on a grid, with the exponential
/// prediction and the hitting-time bound. The t stored in `spec` is ignored.
SurvivalTable hitting_time_survival(const Measure& model, const Word& a,
                                    const RecurrenceSpec& spec, const std::vector<double>& t_grid,
                                    std::uint64_t trials, std::uint64_t seed,
                                    std::uint64_t max_horizon = default_max_horizon());

struct EntropyRow {
  std::uint64_t n = 0;
  double mean_log_rate = 0.0;  // mean of (1/n) ln tau
  double mean_residual = 0.0;  // mean of (1/n)(ln tau + ell ln P(A_n))
  std::uint64_t samples = 0;   // uncensored trials
  std::uint64_t censored = 0;
};

struct EntropyTable {
  double h = 0.0;
  double ell_h = 0.0;
  bool fixed_omega = false;
  double t_cap = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<EntropyRow> rows;

  nlohmann::json to_json() const;
};

/// Return-time entropy estimate. With `omega` the targets are its prefixes
/// A_n and every trial draws a fresh path; without it each trial draws a path
/// omega and uses its own prefix (return times). tau is searched up to
/// min(t_cap P(A_n)^-ell, max_horizon); later hits are censored and left out
/// of the means.
EntropyTable entropy_estimate(const Measure& model, const std::optional<Word>& omega,
                              const RecurrenceSpec& spec, const std::vector<std::uint64_t>& n_list,
                              std::uint64_t trials, std::uint64_t seed, double t_cap = 20.0,
                              std::uint64_t max_horizon = default_max_horizon());

/// Shortest decimal form that reads back as the same double.
std::string format_double(double v);

}  // namespace reclab
