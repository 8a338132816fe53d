#include "reclab/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "reclab/bounds.hpp"
#include "reclab/engine.hpp"
#include "reclab/error.hpp"
#include "reclab/recurrence.hpp"

namespace reclab {
namespace {

using nlohmann::json;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    fail(ErrorCode::invalid_input, "not a number: \"" + std::string(s) + "\"");
  return v;
}

std::uint64_t to_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    fail(ErrorCode::invalid_input, "not a nonnegative integer: \"" + std::string(s) + "\"");
  return v;
}

std::uint64_t json_uint(const json& j, std::string_view what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    require(j.get<std::int64_t>() >= 0, std::string(what) + " must be nonnegative");
    return j.get<std::uint64_t>();
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    require(v >= 0.0 && v < 1.8e19 && std::floor(v) == v, std::string(what) + " must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  if (j.is_string()) return to_uint(j.get<std::string>());
  fail(ErrorCode::invalid_input, std::string(what) + " must be a nonnegative integer");
}

double json_double(const json& j, std::string_view what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(j.get<std::string>());
  fail(ErrorCode::invalid_input, std::string(what) + " must be a number");
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

// ---- config access -------------------------------------------------------

class Config {
 public:
  Config(std::string_view command, const json& raw, std::set<std::string> allowed)
      : raw_(raw.is_null() ? json::object() : raw) {
    require(raw_.is_object(), "config must be a JSON object");
    allowed.insert("command");
    for (const auto& [key, value] : raw_.items()) {
      if (!allowed.count(key))
        fail(ErrorCode::invalid_input, "unknown config key \"" + key + "\" for " + std::string(command));
    }
    if (raw_.contains("command")) {
      require(raw_["command"].is_string() && raw_["command"].get<std::string>() == command,
              "config is for command \"" + raw_["command"].dump() + "\", not " + std::string(command));
    }
    echo_["command"] = std::string(command);
  }

  bool has(const std::string& key) const { return raw_.contains(key) && !raw_[key].is_null(); }
  const json& at(const std::string& key) const { return raw_.at(key); }

  std::uint64_t uint(const std::string& key, std::uint64_t fallback) {
    const std::uint64_t v = has(key) ? json_uint(raw_[key], key) : fallback;
    echo_[key] = v;
    return v;
  }

  double number(const std::string& key, double fallback) {
    const double v = has(key) ? json_double(raw_[key], key) : fallback;
    echo_[key] = v;
    return v;
  }

  std::uint64_t seed(bool required) {
    if (!has("seed")) {
      require(!required, "a seed is required for this command");
      return 0;
    }
    return uint("seed", 0);
  }

  json& echo() { return echo_; }

 private:
  json raw_;
  json echo_ = json::object();
};

bool is_digits_spec(const json& word) {
  return word.is_string() && starts_with(word.get<std::string>(), "digits:");
}

json default_model_for(const Config& cfg, const char* word_key) {
  if (cfg.has(word_key) && is_digits_spec(cfg.at(word_key))) {
    const auto parts = split(cfg.at(word_key).get<std::string>(), ':');
    if (parts.size() == 4) return "uniform:" + std::string(trim(parts[1]));
  }
  return "uniform-binary";
}

MeasurePtr model_of(Config& cfg, const char* word_key = "word") {
  const json spec = cfg.has("model") ? cfg.at("model") : default_model_for(cfg, word_key);
  auto model = parse_model(spec);
  cfg.echo()["model"] = spec;
  return model;
}

Word word_of(Config& cfg, const Measure& model, const char* key = "word") {
  require(cfg.has(key), std::string("config needs \"") + key + "\"");
  const Word w = parse_word(cfg.at(key));
  w.validate(model.alphabet());
  cfg.echo()[key] = cfg.at(key);
  return w;
}

RecurrenceSpec recurrence_of(Config& cfg) {
  const RecurrenceSpec spec =
      cfg.has("recurrence") ? RecurrenceSpec::from_json(cfg.at("recurrence")) : RecurrenceSpec({1}, 1.0);
  cfg.echo()["recurrence"] = spec.to_json();
  return spec;
}

std::uint64_t max_horizon_of(Config& cfg) { return cfg.uint("max_horizon", default_max_horizon()); }

constexpr std::uint64_t kDefaultTrials = 10000;

json optional_value(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

BoundValue try_bound(const std::string& name, const BoundInputs& in) {
  try {
    const double v = evaluate_bound(name, in);
    if (!std::isfinite(v)) return {name, std::nullopt, "not finite in double precision"};
    return {name, v, ""};
  } catch (const Error& e) {
    return {name, std::nullopt, e.what()};
  }
}

// ---- commands -------------------------------------------------------------

json cmd_analyze(const json& raw) {
  Config cfg("analyze", raw, {"model", "word", "recurrence", "max_horizon"});
  const auto model = model_of(cfg);
  const Word a = word_of(cfg, *model);
  const RecurrenceSpec spec = recurrence_of(cfg);
  const std::uint64_t cap = max_horizon_of(cfg);

  const CylinderContext ctx = make_context(*model, a, spec, cap);
  const GapProfile gap = gap_profile(spec, a.size());
  json decay_rate = nullptr, decay_eventual = nullptr;
  try {
    const DecayRate decay = model->decay_rate();
    decay_rate = decay.gamma;
    decay_eventual = optional_value(decay.eventual);
  } catch (const Error&) {
    // no positive rate (a deterministic model): reported as null
  }
  json lag = nullptr;
  if (a.size() >= ctx.r * (spec.d_max() + 1)) lag = minimal_feasible_lag(a, spec);

  json psi = json::array();
  const std::size_t last = std::min<std::size_t>(a.size(), 64);
  for (std::size_t m = 0; m <= last; ++m) {
    const PsiValue p = model->psi(static_cast<std::int64_t>(m));
    psi.push_back({{"m", m}, {"value", p.value}, {"upper_bound", p.upper_bound}});
  }
  return {{"command", "analyze"},
          {"config", cfg.echo()},
          {"n", a.size()},
          {"principal_period", ctx.r},
          {"overlap_set", overlap_set(a)},
          {"kappa", ctx.kappa},
          {"minimal_feasible_lag", lag},
          {"rho", ctx.rho.value},
          {"rho_support_exit", ctx.rho.support_exit},
          {"prob", ctx.prob},
          {"log_prob", ctx.log_prob},
          {"horizon", ctx.horizon},
          {"g", gap.g ? json(*gap.g) : json(nullptr)},
          {"gamma_n", gap.gamma},
          {"decay_rate", decay_rate},
          {"decay_rate_eventual", decay_eventual},
          {"entropy", model->entropy()},
          {"iid", model->is_iid()},
          {"psi", psi}};
}

struct Simulation {
  EmpiricalDistribution emp;
  std::uint64_t horizon = 0;
};

Simulation simulate(Config& cfg, const Measure& model, const Word& a, const RecurrenceSpec& spec) {
  const std::uint64_t trials = cfg.uint("trials", kDefaultTrials);
  const std::uint64_t seed = cfg.seed(true);
  const std::uint64_t cap = max_horizon_of(cfg);
  Simulation sim;
  if (cfg.has("n_terms")) {
    sim.horizon = cfg.uint("n_terms", 0);
    if (sim.horizon > cap)
      fail(ErrorCode::horizon_too_large, "n_terms exceeds the horizon cap " + std::to_string(cap));
  } else {
    const double log_prob = model.log_cylinder_prob(a);
    if (!std::isfinite(log_prob)) fail(ErrorCode::conditioning, "P(A) = 0: the horizon is undefined");
    const double prob = model.cylinder_prob(a);
    sim.horizon = prob > 0.0 ? horizon_n(prob, spec, cap) : horizon_n_from_log(log_prob, spec, cap);
  }
  sim.emp = simulate_counts_n(model, a, spec, sim.horizon, trials, seed);
  return sim;
}

json cmd_simulate(const json& raw) {
  Config cfg("simulate", raw, {"model", "word", "recurrence", "trials", "seed", "max_horizon", "n_terms"});
  const auto model = model_of(cfg);
  const Word a = word_of(cfg, *model);
  const RecurrenceSpec spec = recurrence_of(cfg);
  const Simulation sim = simulate(cfg, *model, a, spec);
  return {{"command", "simulate"},
          {"config", cfg.echo()},
          {"horizon", sim.horizon},
          {"empirical", sim.emp.to_json()},
          {"mean", sim.emp.mean()}};
}

json cmd_compare(const json& raw) {
  Config cfg("compare",
             raw, {"model", "word", "recurrence", "trials", "seed", "max_horizon", "n_terms", "target"});
  const auto model = model_of(cfg);
  const Word a = word_of(cfg, *model);
  const RecurrenceSpec spec = recurrence_of(cfg);
  const Simulation sim = simulate(cfg, *model, a, spec);

  const json target_spec = cfg.has("target") ? cfg.at("target") : json{{"kind", "poisson"}};
  require(target_spec.is_object() && target_spec.contains("kind") && target_spec["kind"].is_string(),
          "target needs a string \"kind\"");
  const std::string kind = target_spec["kind"].get<std::string>();
  Pmf target;
  std::string bound_name;
  if (kind == "poisson") {
    target = poisson_pmf(spec.t());
    bound_name = "thm21";
  } else if (kind == "polya-aeppli") {
    const double r = target_spec.contains("rho") ? json_double(target_spec["rho"], "rho") : rho(*model, a, spec).value;
    target = polya_aeppli_pmf(spec.t(), r);
    bound_name = model->is_iid() ? "thm26" : "thm23";
  } else if (kind == "compound") {
    require(target_spec.contains("s") && target_spec.contains("cluster"), "compound target needs s and cluster");
    Pmf cluster{target_spec["cluster"].get<std::vector<double>>(), 0.0};
    target = compound_pmf(json_double(target_spec["s"], "s"), cluster);
    bound_name = "thm23";
  } else if (kind == "exact") {
    target = exact_distribution(*model, a, spec, sim.horizon);
  } else {
    fail(ErrorCode::invalid_input, "unknown target kind \"" + kind + "\" (poisson, polya-aeppli, compound, exact)");
  }
  cfg.echo()["target"] = target_spec;

  std::optional<BoundValue> bound;
  if (!bound_name.empty()) {
    try {
      bound = try_bound(bound_name, assemble_bound_inputs(*model, a, spec));
    } catch (const Error& e) {
      bound = BoundValue{bound_name, std::nullopt, e.what()};
    }
  }
  json report = compare_to_target(sim.emp, target, bound, cfg.echo()).to_json();
  report["command"] = "compare";
  report["horizon"] = sim.horizon;
  return report;
}

json cmd_nonconv(const json& raw) {
  Config cfg("nonconv", raw, {"p1", "t", "n", "trials", "seed", "max_horizon"});
  const double p1 = cfg.number("p1", 0.75);
  const double t = cfg.number("t", 1.0);
  const auto n_list = parse_index_list(cfg.has("n") ? cfg.at("n") : json("8..13"));
  cfg.echo()["n"] = n_list;
  const std::uint64_t trials = cfg.uint("trials", kDefaultTrials);
  const std::uint64_t seed = cfg.seed(true);
  const std::uint64_t cap = max_horizon_of(cfg);
  json report = nonconvergence_sweep(p1, t, n_list, trials, seed, cap).to_json();
  report["command"] = "nonconv";
  report["config"] = cfg.echo();
  return report;
}

json cmd_hitting(const json& raw) {
  Config cfg("hitting", raw, {"model", "word", "recurrence", "grid", "trials", "seed", "max_horizon"});
  const auto model = model_of(cfg);
  const Word a = word_of(cfg, *model);
  const RecurrenceSpec spec = recurrence_of(cfg);
  const auto grid = parse_grid(cfg.has("grid") ? cfg.at("grid") : json("0.25..3:0.25"));
  cfg.echo()["grid"] = grid;
  const std::uint64_t trials = cfg.uint("trials", kDefaultTrials);
  const std::uint64_t seed = cfg.seed(true);
  const std::uint64_t cap = max_horizon_of(cfg);
  json report = hitting_time_survival(*model, a, spec, grid, trials, seed, cap).to_json();
  report["command"] = "hitting";
  report["config"] = cfg.echo();
  return report;
}

json cmd_entropy(const json& raw) {
  Config cfg("entropy", raw, {"model", "omega", "recurrence", "n", "trials", "seed", "t_cap", "max_horizon"});
  const auto model = model_of(cfg, "omega");
  std::optional<Word> omega;
  if (cfg.has("omega"))
    omega = word_of(cfg, *model, "omega");
  else
    cfg.echo()["omega"] = nullptr;
  const RecurrenceSpec spec = recurrence_of(cfg);
  const auto n_list = parse_index_list(cfg.has("n") ? cfg.at("n") : json("4..14"));
  cfg.echo()["n"] = n_list;
  const std::uint64_t trials = cfg.uint("trials", kDefaultTrials);
  const std::uint64_t seed = cfg.seed(true);
  const double t_cap = cfg.number("t_cap", 20.0);
  const std::uint64_t cap = max_horizon_of(cfg);
  json report = entropy_estimate(*model, omega, spec, n_list, trials, seed, t_cap, cap).to_json();
  report["command"] = "entropy";
  report["config"] = cfg.echo();
  return report;
}

// Inputs for a model with cylinder probabilities at the decay-rate envelope:
// P(A) = exp(-Gamma n), P(A(pi)) = exp(-Gamma r).
BoundInputs envelope_inputs(const Measure& model, const RecurrenceSpec& spec, std::uint64_t n,
                            std::uint64_t r) {
  require(n >= 1 && r >= 1 && r <= n, "need 1 <= r <= n");
  BoundInputs in;
  in.n = n;
  in.ell = spec.ell();
  in.t = spec.t();
  in.r = r;
  in.d_max = spec.d_max();
  in.kappa = kappa(r, spec);
  in.gamma_rate = model.decay_rate().gamma;
  in.prob = std::exp(-in.gamma_rate * static_cast<double>(n));
  in.prob_period = std::exp(-in.gamma_rate * static_cast<double>(r));
  double d_sum = 0.0;
  for (auto d : spec.d()) d_sum += static_cast<double>(d);
  in.rho = std::exp(-in.gamma_rate * static_cast<double>(in.kappa) * d_sum);
  in.psi0 = model.psi(0).value;
  in.psin = model.psi(static_cast<std::int64_t>(n)).value;
  in.gamma_n = gap_profile(spec, n).gamma;
  in.iid = model.is_iid();
  return in;
}

json cmd_bounds(const json& raw) {
  Config cfg("bounds", raw, {"preset", "model", "word", "recurrence", "n", "r", "overrides"});
  const std::string preset = cfg.has("preset") ? cfg.at("preset").get<std::string>() : "all";
  cfg.echo()["preset"] = preset;
  const auto model = model_of(cfg);
  BoundInputs in;
  if (cfg.has("word")) {
    const Word a = word_of(cfg, *model);
    const RecurrenceSpec spec = recurrence_of(cfg);
    in = assemble_bound_inputs(*model, a, spec);
  } else {
    const RecurrenceSpec spec = recurrence_of(cfg);
    require(cfg.has("n"), "bounds needs either \"word\" or \"n\"");
    const std::uint64_t n = cfg.uint("n", 1);
    in = envelope_inputs(*model, spec, n, cfg.uint("r", n));
  }
  if (cfg.has("overrides")) {
    require(cfg.at("overrides").is_object(), "overrides must be an object");
    json merged = in.to_json();
    for (const auto& [key, value] : cfg.at("overrides").items()) {
      require(merged.contains(key), "unknown bound input \"" + key + "\"");
      merged[key] = value;
    }
    in = BoundInputs::from_json(merged);
    cfg.echo()["overrides"] = cfg.at("overrides");
  }

  json values = json::array();
  if (preset == "all") {
    for (const char* name : {"thm21", "thm23", "cor25", "thm26"}) values.push_back(try_bound(name, in).to_json());
  } else {
    const double v = evaluate_bound(preset, in);  // hypothesis errors propagate
    values.push_back((std::isfinite(v) ? BoundValue{preset, v, ""} : BoundValue{preset, std::nullopt, "not finite in double precision"})
                         .to_json());
  }
  return {{"command", "bounds"},
          {"config", cfg.echo()},
          {"inputs", in.to_json()},
          {"psi_threshold", psi_threshold(in.ell)},
          {"bounds", values}};
}

// ---- csv ---------------------------------------------------------------

std::string csv_number(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

// ---- parsing -------------------------------------------------------------

MeasurePtr parse_model(const json& spec) {
  if (spec.is_object()) return measure_from_json(spec);
  require(spec.is_string(), "model must be an object or a preset string");
  const std::string s = spec.get<std::string>();
  if (s == "uniform-binary") return std::make_shared<BernoulliMeasure>(std::vector<double>{0.5, 0.5});
  if (starts_with(s, "uniform:")) {
    const std::uint64_t m = to_uint(std::string_view(s).substr(8));
    require(m >= 2 && m <= 1'000'000, "uniform:m needs 2 <= m <= 10^6");
    return std::make_shared<BernoulliMeasure>(std::vector<double>(m, 1.0 / static_cast<double>(m)));
  }
  if (starts_with(s, "bernoulli:")) {
    std::vector<double> probs;
    for (auto part : split(std::string_view(s).substr(10), ',')) probs.push_back(to_double(part));
    return std::make_shared<BernoulliMeasure>(std::move(probs));
  }
  if (starts_with(s, "xor:")) return std::make_shared<XorCoupledMeasure>(to_double(std::string_view(s).substr(4)));
  fail(ErrorCode::invalid_input,
       "unknown model preset \"" + s + "\" (uniform-binary, uniform:m, bernoulli:p0,p1,..., xor:p1)");
}

Word parse_word(const json& spec) {
  if (spec.is_array()) {
    try {
      return Word(spec.get<std::vector<Symbol>>());
    } catch (const json::exception& e) {
      fail(ErrorCode::invalid_input, std::string("bad word: ") + e.what());
    }
  }
  require(spec.is_string(), "word must be an array or a string");
  const std::string s = spec.get<std::string>();
  const std::string_view v(s);
  if (starts_with(v, "ones:")) {
    const std::uint64_t n = to_uint(v.substr(5));
    require(n >= 1, "ones:n needs n >= 1");
    return ones(n);
  }
  if (starts_with(v, "thue-morse:")) {
    const std::uint64_t n = to_uint(v.substr(11));
    require(n >= 1, "thue-morse:n needs n >= 1");
    return thue_morse(n);
  }
  if (starts_with(v, "digits:")) {
    const auto parts = split(v, ':');
    require(parts.size() == 4, "digits spec is digits:base:length:value");
    return digits_word(static_cast<unsigned>(to_uint(parts[1])), to_uint(parts[2]), trim(parts[3]));
  }
  return Word::parse(v);
}

Word digits_word(unsigned base, std::size_t length, std::string_view value) {
  namespace mp = boost::multiprecision;
  require(base >= 2 && base <= 1'000'000, "digit base must lie in [2, 10^6]");
  require(length >= 1 && length <= 1'000'000, "digit count must lie in [1, 10^6]");
  std::vector<Symbol> digits;
  digits.reserve(length);

  const auto from_rational = [&](mp::cpp_int num, const mp::cpp_int& den) {
    require(den > 0, "denominator must be positive");
    require(num >= 0, "value must be nonnegative");
    num %= den;
    for (std::size_t i = 0; i < length; ++i) {
      num *= base;
      digits.push_back(static_cast<Symbol>(num / den));
      num %= den;
    }
    return Word(std::move(digits));
  };
  const auto parse_int = [](std::string_view s) {
    require(!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }),
            "not a nonnegative integer: \"" + std::string(s) + "\"");
    return mp::cpp_int(std::string(s));
  };

  if (const auto slash = value.find('/'); slash != std::string_view::npos)
    return from_rational(parse_int(trim(value.substr(0, slash))), parse_int(trim(value.substr(slash + 1))));

  using Float = mp::cpp_bin_float_100;
  namespace c = boost::math::constants;
  std::optional<Float> constant;
  if (value == "pi") constant = c::pi<Float>();
  if (value == "e") constant = c::e<Float>();
  if (value == "sqrt2") constant = c::root_two<Float>();
  if (value == "phi") constant = c::phi<Float>();
  if (value == "ln2") constant = c::ln_two<Float>();
  if (constant) {
    // 100 decimal digits carry about 332 bits; keep a margin for rounding.
    require(static_cast<double>(length) * std::log2(static_cast<double>(base)) <= 300.0,
            "named constants support at most 300 bits of digits (length * log2(base) <= 300)");
    Float x = *constant - mp::floor(*constant);
    for (std::size_t i = 0; i < length; ++i) {
      x *= base;
      const Float d = mp::floor(x);
      digits.push_back(d.convert_to<Symbol>());
      x -= d;
    }
    return Word(std::move(digits));
  }

  const auto dot = value.find('.');
  const std::string_view whole = value.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view() : value.substr(dot + 1);
  require(!(whole.empty() && frac.empty()), "empty digit value");
  mp::cpp_int num = whole.empty() ? mp::cpp_int(0) : parse_int(whole);
  mp::cpp_int den = 1;
  if (!frac.empty()) {
    const mp::cpp_int f = parse_int(frac);
    den = mp::pow(mp::cpp_int(10), static_cast<unsigned>(frac.size()));
    num = num * den + f;
  }
  return from_rational(num, den);
}

std::vector<std::uint64_t> parse_index_list(const json& spec) {
  std::vector<std::uint64_t> out;
  if (spec.is_array()) {
    for (const auto& v : spec) out.push_back(json_uint(v, "list entry"));
  } else if (spec.is_number()) {
    out.push_back(json_uint(spec, "list entry"));
  } else if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (const auto dots = s.find(".."); dots != std::string::npos) {
      const std::uint64_t lo = to_uint(std::string_view(s).substr(0, dots));
      const std::uint64_t hi = to_uint(std::string_view(s).substr(dots + 2));
      require(lo <= hi && hi - lo < 100000, "range a..b needs a <= b and fewer than 10^5 entries");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      for (auto part : split(s, ',')) out.push_back(to_uint(part));
    }
  } else {
    fail(ErrorCode::invalid_input, "expected a list, a range a..b or an integer");
  }
  require(!out.empty(), "list must not be empty");
  return out;
}

std::vector<double> parse_grid(const json& spec) {
  std::vector<double> out;
  if (spec.is_array()) {
    for (const auto& v : spec) out.push_back(json_double(v, "grid entry"));
  } else if (spec.is_number()) {
    out.push_back(spec.get<double>());
  } else if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (const auto dots = s.find(".."); dots != std::string::npos) {
      const auto colon = s.find(':', dots);
      require(colon != std::string::npos, "grid range is a..b:step");
      const double lo = to_double(std::string_view(s).substr(0, dots));
      const double hi = to_double(std::string_view(s).substr(dots + 2, colon - dots - 2));
      const double step = to_double(std::string_view(s).substr(colon + 1));
      require(step > 0.0 && lo <= hi && (hi - lo) / step < 1e6, "grid range needs a <= b and step > 0");
      for (std::size_t i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9 * step) break;
        out.push_back(v);
      }
    } else {
      for (auto part : split(s, ',')) out.push_back(to_double(part));
    }
  } else {
    fail(ErrorCode::invalid_input, "expected a grid list, a range a..b:step or a number");
  }
  require(!out.empty(), "grid must not be empty");
  return out;
}

// ---- dispatch ------------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"analyze", "simulate", "compare", "nonconv",
                                              "hitting", "entropy",  "bounds"};
  return names;
}

bool needs_seed(std::string_view command) {
  return command == "simulate" || command == "compare" || command == "nonconv" || command == "hitting" ||
         command == "entropy";
}

json run_command(std::string_view command, const json& config) {
  try {
    if (command == "analyze") return cmd_analyze(config);
    if (command == "simulate") return cmd_simulate(config);
    if (command == "compare") return cmd_compare(config);
    if (command == "nonconv") return cmd_nonconv(config);
    if (command == "hitting") return cmd_hitting(config);
    if (command == "entropy") return cmd_entropy(config);
    if (command == "bounds") return cmd_bounds(config);
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("bad config: ") + e.what());
  }
  fail(ErrorCode::invalid_input, "unknown command \"" + std::string(command) + "\"");
}

std::string report_to_csv(const json& report) {
  require(report.is_object() && report.contains("command"), "not a report");
  const std::string command = report["command"].get<std::string>();
  std::ostringstream out;
  if (command == "analyze") {
    out << "key,value\n";
    for (const auto& [key, value] : report.items()) {
      if (key == "config" || key == "command" || key == "psi") continue;
      out << key << ',' << csv_text(value.is_array() ? value.dump() : csv_number(value)) << '\n';
    }
    for (const auto& p : report["psi"])
      out << "psi_" << p["m"].get<std::uint64_t>() << ',' << csv_number(p["value"]) << '\n';
  } else if (command == "simulate") {
    out << "value,count\n";
    for (const auto& cell : report["empirical"]["counts"]) out << cell[0].dump() << ',' << cell[1].dump() << '\n';
  } else if (command == "compare") {
    out << "k,empirical,target,abs_diff\n";
    std::vector<double> emp;
    const double trials = report["empirical"]["trials"].get<double>();
    for (const auto& cell : report["empirical"]["counts"]) {
      const auto k = cell[0].get<std::size_t>();
      if (emp.size() <= k) emp.resize(k + 1, 0.0);
      emp[k] = cell[1].get<double>() / trials;
    }
    const auto target = report["target"]["mass"].get<std::vector<double>>();
    for (std::size_t k = 0; k < std::max(emp.size(), target.size()); ++k) {
      const double e = k < emp.size() ? emp[k] : 0.0;
      const double q = k < target.size() ? target[k] : 0.0;
      out << k << ',' << format_double(e) << ',' << format_double(q) << ',' << format_double(std::abs(e - q)) << '\n';
    }
  } else if (command == "nonconv") {
    out << "n,horizon,theta,limit\n";
    for (const auto& r : report["rows"])
      out << r["n"].dump() << ',' << r["horizon"].dump() << ',' << csv_number(r["theta"]) << ','
          << csv_number(r["limit"]) << '\n';
  } else if (command == "hitting") {
    out << "t,threshold,survival,prediction,bound\n";
    for (const auto& r : report["rows"])
      out << csv_number(r["t"]) << ',' << r["threshold"].dump() << ',' << csv_number(r["survival"]) << ','
          << csv_number(r["prediction"]) << ',' << csv_number(r["bound"]["value"]) << '\n';
  } else if (command == "entropy") {
    out << "n,mean_log_rate,ell_h,h,mean_residual,samples,censored\n";
    for (const auto& r : report["rows"])
      out << r["n"].dump() << ',' << csv_number(r["mean_log_rate"]) << ',' << csv_number(report["ell_h"]) << ','
          << csv_number(report["h"]) << ',' << csv_number(r["mean_residual"]) << ',' << r["samples"].dump() << ','
          << r["censored"].dump() << '\n';
  } else if (command == "bounds") {
    out << "name,value,note\n";
    for (const auto& b : report["bounds"])
      out << b["name"].get<std::string>() << ',' << csv_number(b["value"]) << ','
          << csv_text(b.value("note", std::string())) << '\n';
  } else {
    fail(ErrorCode::invalid_input, "no table view for command \"" + command + "\"");
  }
  return out.str();
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace reclab
