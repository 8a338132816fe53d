#include "reclab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include "reclab/error.hpp"

namespace reclab {
namespace {

std::atomic<unsigned> g_threads{0};

constexpr std::size_t kChunk = 8192;
constexpr std::size_t kAutomatonLimit = std::size_t{1} << 22;

// Runs body(state, i) for i in [0, trials) with one state per worker.
// Trial i always sees the same inputs, so results do not depend on the
// number of workers.
template <class MakeState, class Body>
void for_each_trial(std::uint64_t trials, MakeState make_state, Body body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), std::max<std::uint64_t>(trials, 1)));
  if (workers <= 1) {
    auto state = make_state();
    for (std::uint64_t i = 0; i < trials; ++i) body(state, i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        auto state = make_state();
        for (std::uint64_t i = w; i < trials; i += workers) body(state, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Replays a stored prefix before continuing with the wrapped sampler.
class PrefixedSampler final : public PathSampler {
 public:
  PrefixedSampler(std::span<const Symbol> prefix, PathSampler& rest) : prefix_(prefix), rest_(rest) {}
  void fill(std::span<Symbol> out) override {
    const std::size_t from_prefix = std::min(out.size(), prefix_.size() - used_);
    std::copy_n(prefix_.begin() + static_cast<std::ptrdiff_t>(used_), from_prefix, out.begin());
    used_ += from_prefix;
    if (from_prefix < out.size()) rest_.fill(out.subspan(from_prefix));
  }

 private:
  std::span<const Symbol> prefix_;
  PathSampler& rest_;
  std::size_t used_ = 0;
};

BoundValue bound_value(std::string name, double v) {
  BoundValue b{std::move(name), std::nullopt, ""};
  if (std::isfinite(v))
    b.value = v;
  else
    b.note = "not finite in double precision";
  return b;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void require_trials(std::uint64_t trials) { require(trials >= 1, "trials must be at least 1"); }

EmpiricalDistribution tabulate(const std::vector<std::uint64_t>& values, std::uint64_t seed) {
  EmpiricalDistribution emp;
  emp.trials = values.size();
  emp.seed = seed;
  for (std::uint64_t v : values) ++emp.counts[v];
  return emp;
}

}  // namespace

void set_thread_count(unsigned threads) { g_threads.store(threads); }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  if (t != 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- EmpiricalDistribution / reports -------------------------------------

Pmf EmpiricalDistribution::to_pmf() const {
  require(trials >= 1 && !counts.empty(), "empirical distribution is empty");
  Pmf p;
  p.mass.assign(counts.rbegin()->first + 1, 0.0);
  for (const auto& [value, occ] : counts)
    p.mass[value] = static_cast<double>(occ) / static_cast<double>(trials);
  return p;
}

double EmpiricalDistribution::mean() const {
  double sum = 0.0;
  for (const auto& [value, occ] : counts) sum += static_cast<double>(value) * static_cast<double>(occ);
  return trials ? sum / static_cast<double>(trials) : 0.0;
}

nlohmann::json EmpiricalDistribution::to_json() const {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [value, occ] : counts) cells.push_back({value, occ});
  return {{"counts", cells}, {"trials", trials}, {"seed", seed}};
}

nlohmann::json BoundValue::to_json() const {
  nlohmann::json j{{"name", name}, {"value", optional_number(value)}};
  if (!note.empty()) j["note"] = note;
  return j;
}

nlohmann::json ExperimentReport::to_json() const {
  return {{"config", config},
          {"empirical", empirical.to_json()},
          {"empirical_mean", empirical.mean()},
          {"target", target.to_json()},
          {"tv", tv},
          {"tv_radius", tv_radius},
          {"mc_radius", mc_radius},
          {"bound", bound ? bound->to_json() : nlohmann::json(nullptr)}};
}


// ---- HitScanner ---------------------------------------------------------

HitScanner::HitScanner(const Word& a, const RecurrenceSpec& spec)
    : word_(a), spec_(spec), border_(border_array(a.symbols())), chunk_(kChunk) {
  const std::size_t n = a.size();
  alphabet_ = a.max_symbol() + 1;
  if (static_cast<std::uint64_t>(n + 1) * alphabet_ <= kAutomatonLimit) {
    automaton_.assign((n + 1) * alphabet_, 0);
    // Entries hold the row offset (state * alphabet) of the next state.
    for (std::size_t q = 0; q <= n; ++q) {
      for (Symbol s = 0; s < alphabet_; ++s) {
        std::uint32_t next = 0;
        if (q < n && a[q] == s)
          next = static_cast<std::uint32_t>((q + 1) * alphabet_);
        else if (q > 0)
          next = automaton_[border_[q] * alphabet_ + s];
        automaton_[q * alphabet_ + s] = next;
      }
    }
  }
}

template <class OnMatch>
void HitScanner::scan(PathSampler& source, std::uint64_t length, OnMatch&& on_match) {
  const std::size_t n = word_.size();
  const auto a = word_.symbols();
  std::size_t q = 0;
  std::uint64_t processed = 0;
  while (processed < length) {
    const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, length - processed));
    source.fill(std::span<Symbol>(chunk_.data(), m));
    if (!automaton_.empty()) {
      const std::uint32_t* table = automaton_.data();
      const std::uint32_t alph = alphabet_;
      const std::size_t accept = n * alph;
      std::size_t row = q * alph;
      for (std::size_t j = 0; j < m; ++j) {
        const Symbol s = chunk_[j];
        row = s < alph ? table[row + s] : 0;
        if (row == accept && on_match(processed + j + 1 - n)) return;
      }
      q = row / alph;
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        const Symbol s = chunk_[j];
        if (q == n) q = border_[n];
        while (q > 0 && a[q] != s) q = border_[q];
        if (a[q] == s) ++q;
        if (q == n && on_match(processed + j + 1 - n)) return;
      }
    }
    processed += m;
  }
}

std::uint64_t HitScanner::count(PathSampler& source, std::uint64_t n_terms) {
  if (n_terms == 0) return 0;
  const std::uint64_t length = required_path_length(spec_, n_terms, word_.size());
  const auto& d = spec_.d();
  std::uint64_t hits = 0;
  if (d.size() == 1) {
    const std::uint64_t d1 = d[0];
    scan(source, length, [&](std::uint64_t p) {
      hits += (p != 0 && p % d1 == 0);
      return false;
    });
    return hits;
  }
  const std::uint64_t dmax = spec_.d_max();
  matches_.assign(length / 64 + 1, 0);
  scan(source, length, [&](std::uint64_t p) {
    matches_[p >> 6] |= std::uint64_t{1} << (p & 63);
    if (p == 0 || p % dmax != 0) return false;
    const std::uint64_t k = p / dmax;
    bool all = true;
    for (std::size_t i = 0; i + 1 < d.size() && all; ++i) {
      const std::uint64_t pos = d[i] * k;
      all = (matches_[pos >> 6] >> (pos & 63)) & 1;
    }
    hits += all;
    return false;
  });
  return hits;
}

std::optional<std::uint64_t> HitScanner::first_hit(PathSampler& source, std::uint64_t max_k) {
  if (max_k == 0) return std::nullopt;
  const std::uint64_t length = required_path_length(spec_, max_k, word_.size());
  const auto& d = spec_.d();
  std::optional<std::uint64_t> found;
  if (d.size() == 1) {
    const std::uint64_t d1 = d[0];
    scan(source, length, [&](std::uint64_t p) {
      if (p == 0 || p % d1 != 0) return false;
      found = p / d1;
      return true;
    });
    return found;
  }
  const std::uint64_t dmax = spec_.d_max();
  matches_.assign(length / 64 + 1, 0);
  scan(source, length, [&](std::uint64_t p) {
    matches_[p >> 6] |= std::uint64_t{1} << (p & 63);
    if (p == 0 || p % dmax != 0) return false;
    const std::uint64_t k = p / dmax;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const std::uint64_t pos = d[i] * k;
      if (!((matches_[pos >> 6] >> (pos & 63)) & 1)) return false;
    }
    found = k;
    return true;
  });
  return found;
}

// ---- simulation ---------------------------------------------------------

EmpiricalDistribution simulate_counts(const Measure& model, const Word& a,
                                      const RecurrenceSpec& spec, std::uint64_t trials,
                                      std::uint64_t seed, std::uint64_t max_horizon) {
  a.validate(model.alphabet());
  const double log_prob = model.log_cylinder_prob(a);
  if (!std::isfinite(log_prob)) fail(ErrorCode::conditioning, "P(A) = 0: the horizon is undefined");
  const double prob = model.cylinder_prob(a);
  const std::uint64_t n_terms =
      prob > 0.0 ? horizon_n(prob, spec, max_horizon) : horizon_n_from_log(log_prob, spec, max_horizon);
  return simulate_counts_n(model, a, spec, n_terms, trials, seed);
}

EmpiricalDistribution simulate_counts_n(const Measure& model, const Word& a,
                                        const RecurrenceSpec& spec, std::uint64_t n_terms,
                                        std::uint64_t trials, std::uint64_t seed) {
  require_trials(trials);
  a.validate(model.alphabet());
  std::vector<std::uint64_t> values(trials);
  for_each_trial(
      trials, [&] { return HitScanner(a, spec); },
      [&](HitScanner& scanner, std::uint64_t i) {
        auto source = model.sampler(derive_seed(seed, i));
        values[i] = scanner.count(*source, n_terms);
      });
  return tabulate(values, seed);
}

// ---- exact oracle -------------------------------------------------------

Pmf exact_distribution(const Measure& model, const Word& a, const RecurrenceSpec& spec,
                       std::uint64_t n_terms, std::uint64_t cap) {
  a.validate(model.alphabet());
  if (n_terms == 0) return Pmf::point_mass(0);
  const std::size_t n = a.size();
  const auto& d = spec.d();
  const std::uint64_t alph = model.alphabet_size();

  std::vector<std::uint64_t> positions;
  const auto too_large = [&] {
    fail(ErrorCode::too_large, "exact enumeration needs more than " + std::to_string(cap) +
                                   " assignments; reduce N, n or ell");
  };
  // Each window adds at most n positions; bail out before the set grows
  // past what the cap could ever allow.
  const double max_positions = std::log(static_cast<double>(cap)) / std::log(static_cast<double>(alph));
  for (std::uint64_t k = 1; k <= n_terms; ++k) {
    for (std::uint64_t di : d)
      for (std::size_t j = 0; j < n; ++j) positions.push_back(di * k + j);
    if (positions.size() > 4 * (static_cast<std::size_t>(max_positions) + n * d.size())) {
      std::sort(positions.begin(), positions.end());
      positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
      if (static_cast<double>(positions.size()) > max_positions + 1e-9) too_large();
    }
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  std::uint64_t assignments = 1;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (assignments > cap / alph) too_large();
    assignments *= alph;
  }

  // window_index[(k - 1) * ell + i][j] = index into positions of d_i k + j.
  std::vector<std::size_t> window_index;
  window_index.reserve(n_terms * d.size() * n);
  for (std::uint64_t k = 1; k <= n_terms; ++k)
    for (std::uint64_t di : d)
      for (std::size_t j = 0; j < n; ++j)
        window_index.push_back(static_cast<std::size_t>(
            std::lower_bound(positions.begin(), positions.end(), di * k + j) - positions.begin()));

  const PatternProb prob = model.pattern_prob(positions);
  std::vector<Symbol> symbols(positions.size(), 0);
  std::vector<double> mass(n_terms + 1, 0.0);
  for (std::uint64_t code = 0; code < assignments; ++code) {
    if (code != 0) {
      // Mixed-radix increment.
      for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (++symbols[i] < alph) break;
        symbols[i] = 0;
      }
    }
    const double p = prob(symbols);
    if (p == 0.0) continue;
    std::uint64_t hits = 0;
    const std::size_t* idx = window_index.data();
    for (std::uint64_t k = 0; k < n_terms; ++k) {
      bool hit = true;
      for (std::size_t i = 0; i < d.size(); ++i, idx += n) {
        if (!hit) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (symbols[idx[j]] != a[j]) {
            hit = false;
            break;
          }
        }
      }
      hits += hit;
    }
    mass[hits] += p;
  }
  Pmf out;
  out.mass = std::move(mass);
  out.tail_bound = 0.0;
  return out;
}

// ---- comparison ---------------------------------------------------------

double dkw_epsilon(std::uint64_t trials) {
  require_trials(trials);
  return std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(trials)));
}

ExperimentReport compare_to_target(const EmpiricalDistribution& emp, const Pmf& target,
                                   std::optional<BoundValue> bound, nlohmann::json config) {
  const Pmf p = emp.to_pmf();
  const TvDistance tv = tv_distance(p, target);
  // With probability 0.99 the empirical cdf is within eps of the true cdf
  // everywhere, so each cell is off by at most 2 eps and the sup distance by
  // at most eps per cell that can carry mass.
  std::size_t cells = 0;
  const std::size_t last = std::max(p.mass.size(), target.mass.size());
  for (std::size_t k = 0; k < last; ++k) cells += (p.at(k) > 0.0 || target.at(k) >= 1e-12);
  ExperimentReport report;
  report.empirical = emp;
  report.target = target;
  report.tv = tv.value;
  report.tv_radius = tv.radius;
  report.mc_radius = std::min(1.0, static_cast<double>(cells) * dkw_epsilon(emp.trials));
  report.bound = std::move(bound);
  report.config = std::move(config);
  return report;
}

// ---- nonconvergence -----------------------------------------------------

nlohmann::json NonconvergenceTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"n", r.n}, {"horizon", r.horizon}, {"theta", r.theta}, {"limit", r.limit}});
  return {{"p1", p1},           {"t", t},         {"limit_even", limit_even},
          {"limit_odd", limit_odd}, {"trials", trials}, {"seed", seed},
          {"mc_radius", mc_radius}, {"rows", rows_json}};
}


NonconvergenceTable nonconvergence_sweep(double p1, double t, const std::vector<std::uint64_t>& n_list,
                                         std::uint64_t trials, std::uint64_t seed,
                                         std::uint64_t max_horizon) {
  require_trials(trials);
  require(!n_list.empty(), "n list must not be empty");
  const XorCoupledMeasure model(p1);
  if (std::abs(model.p0() - model.p1()) < 1e-12)
    fail(ErrorCode::degenerate_parameters, "p0 = p1: the even and odd limits coincide");
  const RecurrenceSpec spec({1}, t);

  NonconvergenceTable table;
  table.p1 = p1;
  table.t = t;
  table.limit_even = std::exp(-t * (1.0 - 2.0 * model.p0() * model.p1()));
  table.limit_odd = std::exp(-t / 2.0);
  table.trials = trials;
  table.seed = seed;
  table.mc_radius = 2.0 * dkw_epsilon(trials);
  for (std::uint64_t n : n_list) {
    require(n >= 1, "word lengths must be positive");
    const Word a = ones(n);
    const std::uint64_t horizon = horizon_n(model.cylinder_prob(a), spec, max_horizon);
    const std::uint64_t base = derive_seed(seed, n);
    std::vector<std::uint8_t> empty(trials, 0);
    for_each_trial(
        trials, [&] { return HitScanner(a, spec); },
        [&](HitScanner& scanner, std::uint64_t i) {
          auto source = model.sampler(derive_seed(base, i));
          empty[i] = !scanner.first_hit(*source, horizon).has_value();
        });
    std::uint64_t zeros = 0;
    for (auto e : empty) zeros += e;
    table.rows.push_back({n, horizon, static_cast<double>(zeros) / static_cast<double>(trials),
                          n % 2 == 0 ? table.limit_even : table.limit_odd});
  }
  return table;
}

// ---- hitting-time survival ----------------------------------------------

nlohmann::json SurvivalTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"t", r.t},
                         {"threshold", r.threshold},
                         {"survival", r.survival},
                         {"prediction", r.prediction},
                         {"bound", r.bound.to_json()}});
  return {{"prob", prob},         {"rho", rho},       {"max_k", max_k},
          {"trials", trials},     {"seed", seed},     {"censored", censored},
          {"mc_radius", mc_radius}, {"rows", rows_json}};
}


SurvivalTable hitting_time_survival(const Measure& model, const Word& a, const RecurrenceSpec& spec,
                                    const std::vector<double>& t_grid, std::uint64_t trials,
                                    std::uint64_t seed, std::uint64_t max_horizon) {
  require_trials(trials);
  require(!t_grid.empty(), "t grid must not be empty");
  for (double t : t_grid) require(std::isfinite(t) && t >= 0.0, "grid values must be finite and >= 0");
  a.validate(model.alphabet());
  const double prob = model.cylinder_prob(a);
  if (!(prob > 0.0)) fail(ErrorCode::conditioning, "P(A) = 0: tau_A is infinite almost surely");
  const double t_max = *std::max_element(t_grid.begin(), t_grid.end());

  SurvivalTable table;
  table.prob = prob;
  table.rho = rho(model, a, spec).value;
  table.max_k = t_max > 0.0 ? horizon_n(prob, spec.with_t(t_max), max_horizon) : 0;
  table.trials = trials;
  table.seed = seed;
  table.mc_radius = dkw_epsilon(trials);

  std::vector<std::uint64_t> tau(trials, 0);  // 0 marks a censored trial
  if (table.max_k > 0) {
    for_each_trial(
        trials, [&] { return HitScanner(a, spec); },
        [&](HitScanner& scanner, std::uint64_t i) {
          auto source = model.sampler(derive_seed(seed, i));
          tau[i] = scanner.first_hit(*source, table.max_k).value_or(0);
        });
  }
  std::vector<std::uint64_t> sorted;
  sorted.reserve(trials);
  for (auto v : tau) {
    if (v == 0)
      ++table.censored;
    else
      sorted.push_back(v);
  }
  if (table.max_k == 0) table.censored = trials;
  std::sort(sorted.begin(), sorted.end());

  std::optional<BoundInputs> inputs;
  std::string inputs_note;
  try {
    inputs = assemble_bound_inputs(model, a, spec.with_t(t_max > 0.0 ? t_max : 1.0));
  } catch (const Error& e) {
    inputs_note = e.what();
  }

  for (double t : t_grid) {
    SurvivalRow row;
    row.t = t;
    row.threshold = t > 0.0 ? horizon_n(prob, spec.with_t(t), max_horizon) : 0;
    const auto survivors_uncensored =
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), row.threshold);
    row.survival = static_cast<double>(static_cast<std::uint64_t>(survivors_uncensored) + table.censored) /
                   static_cast<double>(trials);
    row.prediction = std::exp(-(1.0 - table.rho) * t);
    if (!inputs) {
      row.bound = {"cor25", std::nullopt, inputs_note};
    } else {
      BoundInputs in = *inputs;
      in.t = t;
      try {
        row.bound = bound_value("cor25", cor25_bound(in));
      } catch (const Error& e) {
        row.bound = {"cor25", std::nullopt, e.what()};
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---- entropy ------------------------------------------------------------

nlohmann::json EntropyTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"n", r.n},
                         {"mean_log_rate", r.mean_log_rate},
                         {"mean_residual", r.mean_residual},
                         {"samples", r.samples},
                         {"censored", r.censored}});
  }
  return {{"h", h},           {"ell_h", ell_h}, {"mode", fixed_omega ? "fixed-omega" : "return-time"},
          {"t_cap", t_cap},   {"trials", trials}, {"seed", seed}, {"rows", rows_json}};
}


namespace {

// min(floor(t_cap P^-ell), max_horizon), at least 1.
std::uint64_t search_limit(double log_prob, std::size_t ell, double t_cap, std::uint64_t max_horizon) {
  const double log_x = std::log(t_cap) - static_cast<double>(ell) * log_prob;
  if (log_x >= std::log(static_cast<double>(max_horizon))) return max_horizon;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(std::exp(log_x))));
}

struct TauSample {
  std::uint64_t tau = 0;  // 0 = censored
  double log_prob = 0.0;
};

}  // namespace

EntropyTable entropy_estimate(const Measure& model, const std::optional<Word>& omega,
                              const RecurrenceSpec& spec, const std::vector<std::uint64_t>& n_list,
                              std::uint64_t trials, std::uint64_t seed, double t_cap,
                              std::uint64_t max_horizon) {
  require_trials(trials);
  require(!n_list.empty(), "n list must not be empty");
  require(std::isfinite(t_cap) && t_cap > 0.0, "t_cap must be positive");
  const std::size_t ell = spec.ell();

  EntropyTable table;
  table.h = model.entropy();
  table.ell_h = static_cast<double>(ell) * table.h;
  table.fixed_omega = omega.has_value();
  table.t_cap = t_cap;
  table.trials = trials;
  table.seed = seed;
  if (omega) omega->validate(model.alphabet());

  for (std::uint64_t n : n_list) {
    require(n >= 1, "word lengths must be positive");
    const std::uint64_t base = derive_seed(seed, n);
    std::vector<TauSample> samples(trials);
    if (omega) {
      require(omega->size() >= n, "omega prefix shorter than n = " + std::to_string(n));
      const Word a = omega->prefix(n);
      const double log_prob = model.log_cylinder_prob(a);
      if (!std::isfinite(log_prob)) fail(ErrorCode::conditioning, "P(A_n) = 0 for n = " + std::to_string(n));
      const std::uint64_t limit = search_limit(log_prob, ell, t_cap, max_horizon);
      for_each_trial(
          trials, [&] { return HitScanner(a, spec); },
          [&](HitScanner& scanner, std::uint64_t i) {
            auto source = model.sampler(derive_seed(base, i));
            samples[i] = {scanner.first_hit(*source, limit).value_or(0), log_prob};
          });
    } else {
      for_each_trial(
          trials, [] { return std::vector<Symbol>(); },
          [&](std::vector<Symbol>& prefix, std::uint64_t i) {
            auto source = model.sampler(derive_seed(base, i));
            prefix.resize(n);
            source->fill(prefix);
            const Word a{std::vector<Symbol>(prefix)};
            const double log_prob = model.log_cylinder_prob(a);
            const std::uint64_t limit = search_limit(log_prob, ell, t_cap, max_horizon);
            PrefixedSampler replay(prefix, *source);
            HitScanner scanner(a, spec);
            samples[i] = {scanner.first_hit(replay, limit).value_or(0), log_prob};
          });
    }
    EntropyRow row;
    row.n = n;
    double rate_sum = 0.0, residual_sum = 0.0;
    const double nd = static_cast<double>(n);
    for (const auto& s : samples) {
      if (s.tau == 0) {
        ++row.censored;
        continue;
      }
      const double log_tau = std::log(static_cast<double>(s.tau));
      rate_sum += log_tau / nd;
      residual_sum += (log_tau + static_cast<double>(ell) * s.log_prob) / nd;
      ++row.samples;
    }
    if (row.samples > 0) {
      row.mean_log_rate = rate_sum / static_cast<double>(row.samples);
      row.mean_residual = residual_sum / static_cast<double>(row.samples);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace reclab
