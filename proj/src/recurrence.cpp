#include "reclab/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "reclab/error.hpp"

namespace reclab {

RecurrenceSpec::RecurrenceSpec(std::vector<std::uint64_t> d, double t) : d_(std::move(d)), t_(t) {
  require(!d_.empty(), "recurrence needs at least one multiplier d_i");
  require(d_.front() >= 1, "multipliers must be positive");
  for (std::size_t i = 1; i < d_.size(); ++i)
    require(d_[i] > d_[i - 1], "multipliers must be strictly increasing");
  require(std::isfinite(t_) && t_ > 0.0, "intensity t must be positive");
}

RecurrenceSpec RecurrenceSpec::from_json(const nlohmann::json& j) {
  require(j.is_object(), "recurrence spec must be an object");
  try {
    return RecurrenceSpec(j.at("d").get<std::vector<std::uint64_t>>(), j.value("t", 1.0));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("bad recurrence spec: ") + e.what());
  }
}

nlohmann::json RecurrenceSpec::to_json() const { return {{"d", d_}, {"t", t_}}; }

std::uint64_t default_max_horizon() {
  if (const char* env = std::getenv("RECLAB_MAX_HORIZON")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && std::isfinite(v) && v >= 1.0 && v < 1.8e19) return static_cast<std::uint64_t>(v);
  }
  return kDefaultMaxHorizon;
}

std::uint64_t kappa(std::uint64_t r, const RecurrenceSpec& spec) {
  require(r >= 1, "period must be positive");
  std::uint64_t k = 1;
  for (std::uint64_t d : spec.d()) k = std::lcm(k, r / std::gcd(r, d));
  return k;
}

std::uint64_t minimal_feasible_lag(const Word& a, const RecurrenceSpec& spec) {
  const std::uint64_t n = a.size();
  const std::uint64_t r = principal_period(a);
  const std::uint64_t needed = r * (spec.d_max() + 1);
  if (n < needed) {
    fail(ErrorCode::precondition, "minimal_feasible_lag needs n >= r(d_max + 1) = " +
                                      std::to_string(needed) + ", got n = " + std::to_string(n));
  }
  const std::uint64_t m = 2 * spec.d_max() * n + 1;
  std::vector<std::pair<std::uint64_t, Symbol>> placed;
  for (std::uint64_t l = 1; l <= n; ++l) {
    placed.clear();
    for (std::uint64_t d : spec.d())
      for (std::uint64_t base : {d * m, d * (m + l)})
        for (std::uint64_t j = 0; j < n; ++j) placed.emplace_back(base + j, a[j]);
    std::sort(placed.begin(), placed.end());
    bool consistent = true;
    for (std::size_t j = 1; j < placed.size() && consistent; ++j)
      consistent = placed[j].first != placed[j - 1].first || placed[j].second == placed[j - 1].second;
    if (consistent) return l;
  }
  // l = n puts every pair of copies at least n apart, so this is unreachable.
  fail(ErrorCode::precondition, "no feasible lag found");
}

RhoResult rho(const Measure& model, const Word& a, const RecurrenceSpec& spec) {
  const double log_pa = model.log_cylinder_prob(a);
  if (!std::isfinite(log_pa)) fail(ErrorCode::conditioning, "rho is undefined: P(A) = 0");
  const std::size_t r = principal_period(a);
  const Word r_word = a.prefix(r);
  const std::uint64_t k = kappa(r, spec);
  RhoResult out;
  double log_rho = 0.0;
  for (std::uint64_t d : spec.d()) {
    const double log_ext = model.log_cylinder_prob(periodic_extension(r_word, a.size() + d * k));
    if (!std::isfinite(log_ext)) out.support_exit = true;
    log_rho += log_ext - log_pa;
  }
  out.value = std::clamp(std::exp(log_rho), 0.0, 1.0);
  return out;
}

namespace {

// floor(x), where x carries rounding from P(A)^-ell: 0.1^6 gives 999999.9999...
// for an exact 10^6, so values within 1e-12 (relative) below an integer count
// as that integer.
std::uint64_t floor_horizon(double x) {
  return static_cast<std::uint64_t>(std::floor(x * (1.0 + 1e-12)));
}

}  // namespace

std::uint64_t horizon_n_from_log(double log_prob, const RecurrenceSpec& spec,
                                 std::uint64_t max_horizon) {
  require(std::isfinite(log_prob) && log_prob <= 0.0, "horizon needs 0 < P(A) <= 1");
  const double log_x = std::log(spec.t()) - static_cast<double>(spec.ell()) * log_prob;
  const auto too_large = [&] {
    fail(ErrorCode::horizon_too_large,
         "horizon N = t P(A)^-ell exceeds the cap " + std::to_string(max_horizon) +
             "; shrink the word length or t (or raise RECLAB_MAX_HORIZON)");
  };
  if (log_x > std::log(static_cast<double>(max_horizon)) + 1.0) too_large();
  const auto n = floor_horizon(std::exp(log_x));
  if (n > max_horizon) too_large();
  return n;
}

std::uint64_t horizon_n(double prob, const RecurrenceSpec& spec, std::uint64_t max_horizon) {
  require(prob > 0.0 && prob <= 1.0, "horizon needs 0 < P(A) <= 1");
  const double log_x = std::log(spec.t()) - static_cast<double>(spec.ell()) * std::log(prob);
  if (log_x > std::log(static_cast<double>(max_horizon)) + 1.0)
    return horizon_n_from_log(std::log(prob), spec, max_horizon);  // throws
  const auto n = floor_horizon(spec.t() * std::pow(prob, -static_cast<double>(spec.ell())));
  if (n > max_horizon) return horizon_n_from_log(std::log(prob), spec, max_horizon);
  return n;
}

GapProfile gap_profile(const RecurrenceSpec& spec, std::uint64_t n) {
  require(n >= 1, "gap profile needs n >= 1");
  if (spec.ell() == 1) return {std::nullopt, 0};  // no spacing constraint
  std::uint64_t delta = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 1; i < spec.ell(); ++i) delta = std::min(delta, spec.d()[i] - spec.d()[i - 1]);
  return {n * delta, (2 * n + delta - 1) / delta};
}

GapProfile gap_profile(const std::function<std::uint64_t(std::size_t, std::uint64_t)>& q,
                       std::size_t ell, std::uint64_t n, std::uint64_t window) {
  require(n >= 1, "gap profile needs n >= 1");
  if (ell <= 1) return {std::nullopt, 0};
  const auto gap_at = [&](std::uint64_t k) {
    std::uint64_t g = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i + 1 < ell; ++i) {
      const std::uint64_t lo = q(i, k), hi = q(i + 1, k);
      g = std::min(g, hi > lo ? hi - lo : 0);
    }
    return g;
  };
  const auto g_at = [&](std::uint64_t k) {
    std::uint64_t g = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t j = k; j <= k + window; ++j) g = std::min(g, gap_at(j));
    return g;
  };
  constexpr std::uint64_t kSearchLimit = 1'000'000;
  for (std::uint64_t k = 0; k <= kSearchLimit; ++k)
    if (g_at(k) >= 2 * n) return {g_at(n), k};
  fail(ErrorCode::too_large, "gamma(n) not found below the search limit");
}

std::uint64_t required_path_length(const RecurrenceSpec& spec, std::uint64_t n_terms,
                                   std::size_t word_length) {
  return spec.d_max() * n_terms + word_length;
}

std::vector<std::uint8_t> match_positions(std::span<const Symbol> path, const Word& a) {
  const auto border = border_array(a.symbols());
  const std::size_t n = a.size();
  std::vector<std::uint8_t> match(path.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    while (k > 0 && path[i] != a[k]) k = border[k];
    if (path[i] == a[k]) ++k;
    if (k == n) {
      match[i + 1 - n] = 1;
      k = border[n];
    }
  }
  return match;
}

namespace {

void check_path_length(const Word& path, const RecurrenceSpec& spec, std::uint64_t n_terms,
                       std::size_t word_length) {
  const std::uint64_t needed = required_path_length(spec, n_terms, word_length);
  if (path.size() < needed) {
    fail(ErrorCode::invalid_input, "path too short: need length >= d_max * N + n = " +
                                       std::to_string(needed) + ", got " +
                                       std::to_string(path.size()));
  }
}

bool hit_at(const std::vector<std::uint8_t>& match, const RecurrenceSpec& spec, std::uint64_t k) {
  for (std::uint64_t d : spec.d())
    if (!match[d * k]) return false;
  return true;
}

}  // namespace

std::uint64_t count_hits(const Word& path, const Word& a, const RecurrenceSpec& spec,
                         std::uint64_t n_terms) {
  if (n_terms == 0) return 0;
  check_path_length(path, spec, n_terms, a.size());
  const auto used = path.symbols().first(required_path_length(spec, n_terms, a.size()));
  const auto match = match_positions(used, a);
  std::uint64_t count = 0;
  for (std::uint64_t k = 1; k <= n_terms; ++k) count += hit_at(match, spec, k);
  return count;
}

std::optional<std::uint64_t> hitting_time(const Word& path, const Word& a,
                                          const RecurrenceSpec& spec, std::uint64_t max_k) {
  if (max_k == 0) return std::nullopt;
  check_path_length(path, spec, max_k, a.size());
  const auto used = path.symbols().first(required_path_length(spec, max_k, a.size()));
  const auto match = match_positions(used, a);
  for (std::uint64_t k = 1; k <= max_k; ++k)
    if (hit_at(match, spec, k)) return k;
  return std::nullopt;
}

CylinderContext make_context(const Measure& model, const Word& a, const RecurrenceSpec& spec,
                             std::uint64_t max_horizon) {
  a.validate(model.alphabet());
  const std::size_t r = principal_period(a);
  CylinderContext ctx{a, r, a.prefix(r), kappa(r, spec), {}, 0.0, 0.0, 0};
  ctx.log_prob = model.log_cylinder_prob(a);
  ctx.prob = model.cylinder_prob(a);
  ctx.rho = rho(model, a, spec);
  ctx.horizon = horizon_n_from_log(ctx.log_prob, spec, max_horizon);
  if (ctx.prob > 0.0) ctx.horizon = horizon_n(ctx.prob, spec, max_horizon);
  return ctx;
}

}  // namespace reclab
