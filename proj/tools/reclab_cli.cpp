// reclab: command-line front end over the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reclab/reclab.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 64;

struct Options {
  std::string config_path;
  std::string output;
  std::string format = "json";
  unsigned threads = 0;

  std::optional<std::string> model, model_file, word, omega, d, n, grid, preset, target;
  std::optional<double> t, p1, rho, s, t_cap;
  std::optional<std::uint64_t> trials, seed, max_horizon, n_terms, r;
  std::vector<std::string> cluster, overrides;
};

int exit_code(reclab_status status) {
  switch (status) {
    case RECLAB_OK:
      return 0;
    case RECLAB_HYPOTHESIS_FAILED:
      return 2;
    case RECLAB_HORIZON_TOO_LARGE:
    case RECLAB_TOO_LARGE:
      return 3;
    default:
      return 1;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A model flag is either JSON text or a preset name.
json model_value(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  return j.is_discarded() ? json(text) : j;
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

json number_or_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  return j.is_discarded() ? json(text) : j;
}

json build_config(const std::string& command, const Options& o) {
  json cfg = o.config_path.empty() ? json::object() : json::parse(read_file(o.config_path));
  if (!cfg.is_object()) throw std::runtime_error("config file must hold a JSON object");
  cfg.erase("command");
  if (o.model_file) cfg["model"] = json::parse(read_file(*o.model_file));
  if (o.model) cfg["model"] = model_value(*o.model);
  if (o.word) cfg["word"] = *o.word;
  if (o.omega) cfg["omega"] = *o.omega;
  if (o.d || o.t) {
    json rec = cfg.contains("recurrence") ? cfg["recurrence"] : json{{"d", {1}}, {"t", 1.0}};
    if (o.d) rec["d"] = parse_list(*o.d);
    if (o.t) rec["t"] = *o.t;
    if (command == "nonconv") {
      if (o.t) cfg["t"] = *o.t;
    } else {
      cfg["recurrence"] = rec;
    }
  }
  if (o.trials) cfg["trials"] = *o.trials;
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.max_horizon) cfg["max_horizon"] = *o.max_horizon;
  if (o.n_terms) cfg["n_terms"] = *o.n_terms;
  if (o.p1) cfg["p1"] = *o.p1;
  if (o.n) cfg["n"] = *o.n;
  if (o.r) cfg["r"] = *o.r;
  if (o.grid) cfg["grid"] = *o.grid;
  if (o.t_cap) cfg["t_cap"] = *o.t_cap;
  if (o.preset) cfg["preset"] = *o.preset;
  if (o.target) {
    json target{{"kind", *o.target}};
    if (o.rho) target["rho"] = *o.rho;
    if (o.s) target["s"] = *o.s;
    if (!o.cluster.empty()) {
      json mass = json::array({0.0});
      for (const auto& c : o.cluster) mass.push_back(std::stod(c));
      target["cluster"] = mass;
    }
    cfg["target"] = target;
  }
  if (!o.overrides.empty()) {
    json over = cfg.contains("overrides") ? cfg["overrides"] : json::object();
    for (const auto& kv : o.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::runtime_error("--set expects key=value, got " + kv);
      over[kv.substr(0, eq)] = number_or_text(kv.substr(eq + 1));
    }
    cfg["overrides"] = over;
  }
  return cfg;
}

bool needs_seed(const std::string& command) {
  return command == "simulate" || command == "compare" || command == "nonconv" || command == "hitting" ||
         command == "entropy";
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON config file; flags override its keys");
  sub->add_option("-o,--output", o.output, "Write the report here instead of stdout");
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");
  sub->add_option("--max-horizon", o.max_horizon, "Cap on N (default 1e8 or RECLAB_MAX_HORIZON)");
}

void add_model(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "uniform-binary, uniform:m, bernoulli:p0,p1,..., xor:p1 or JSON");
  sub->add_option("--model-file", o.model_file, "JSON model definition file");
}

void add_recurrence(CLI::App* sub, Options& o) {
  sub->add_option("--d", o.d, "Multipliers d_1 < ... < d_ell, comma separated (default 1)");
  sub->add_option("--t", o.t, "Intensity t (default 1)");
}

void add_sampling(CLI::App* sub, Options& o) {
  sub->add_option("--trials", o.trials, "Monte Carlo trials (default 10000)");
  sub->add_option("--seed", o.seed, "Base seed (required)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence statistics of cylinder sets: analyzers, simulations and bounds"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Period, kappa, rho, horizon and mixing summary of a word");
  auto* simulate = app.add_subcommand("simulate", "Empirical law of S_N over fresh sampled paths");
  auto* compare = app.add_subcommand("compare", "Simulate and compare with a limit law");
  auto* nonconv = app.add_subcommand("nonconv", "theta_n = P(S_N = 0) sweep under the XOR-coupled measure");
  auto* hitting = app.add_subcommand("hitting", "Rescaled hitting-time survival against exp(-(1-rho) t)");
  auto* entropy = app.add_subcommand("entropy", "Return-time entropy estimates");
  auto* bounds = app.add_subcommand("bounds", "Evaluate the approximation error bounds");

  for (auto* sub : {analyze, simulate, compare, nonconv, hitting, entropy, bounds}) add_common(sub, o);
  for (auto* sub : {analyze, simulate, compare, hitting, entropy, bounds}) add_model(sub, o);
  for (auto* sub : {analyze, simulate, compare, hitting, entropy, bounds}) add_recurrence(sub, o);
  for (auto* sub : {simulate, compare, nonconv, hitting, entropy}) add_sampling(sub, o);
  for (auto* sub : {analyze, simulate, compare, hitting, bounds})
    sub->add_option("--word", o.word, "Word: 0110, [0,1,1], ones:n, thue-morse:n or digits:base:length:value");

  for (auto* sub : {simulate, compare}) sub->add_option("--n-terms", o.n_terms, "Explicit N instead of t P(A)^-ell");
  compare->add_option("--target", o.target, "poisson, polya-aeppli, compound or exact")
      ->check(CLI::IsMember({"poisson", "polya-aeppli", "compound", "exact"}));
  compare->add_option("--rho", o.rho, "Polya-Aeppli parameter (default rho_A)");
  compare->add_option("--s", o.s, "Compound Poisson rate");
  compare->add_option("--cluster", o.cluster, "Cluster law P(eta = 1), P(eta = 2), ...")->delimiter(',');

  nonconv->add_option("--p1", o.p1, "P(omega_i = 1) of the underlying Bernoulli measure (default 0.75)");
  nonconv->add_option("--t", o.t, "Intensity t (default 1)");
  nonconv->add_option("--n", o.n, "Word lengths: a..b or a,b,c (default 8..13)");

  hitting->add_option("--grid", o.grid, "t grid: a..b:step or a,b,c (default 0.25..3:0.25)");

  entropy->add_option("--omega", o.omega, "Fixed omega prefix; omit to use each path's own prefix");
  entropy->add_option("--n", o.n, "Prefix lengths: a..b or a,b,c (default 4..14)");
  entropy->add_option("--t-cap", o.t_cap, "Search tau up to t_cap P(A)^-ell (default 20)");

  bounds->add_option("--preset", o.preset, "thm21, thm23, cor25, thm26 or all (default all)")
      ->check(CLI::IsMember({"thm21", "thm23", "cor25", "thm26", "all"}));
  bounds->add_option("--n", o.n, "Word length, when no --word is given");
  bounds->add_option("--r", o.r, "Principal period, when no --word is given (default n)");
  bounds->add_option("--set", o.overrides, "Override an input, e.g. --set psin=0.01");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();

  json config;
  try {
    config = build_config(command, o);
  } catch (const std::exception& e) {
    std::cerr << "reclab: " << e.what() << "\n";
    return kExitUsage;
  }
  if (needs_seed(command) && !config.contains("seed")) {
    std::cerr << "reclab " << command << ": --seed is required\n\n" << chosen->help();
    return kExitUsage;
  }

  reclab_set_thread_count(o.threads);
  reclab_text* report = nullptr;
  reclab_status status = reclab_run(command.c_str(), config.dump().c_str(), &report);
  if (status != RECLAB_OK) {
    std::cerr << "reclab " << command << ": " << reclab_status_name(status) << ": "
              << reclab_last_error_message() << "\n";
    return exit_code(status);
  }
  std::string text = reclab_text_data(report);
  reclab_text_destroy(report);
  if (o.format == "csv") {
    reclab_text* csv = nullptr;
    status = reclab_report_to_csv(text.c_str(), &csv);
    if (status != RECLAB_OK) {
      std::cerr << "reclab: " << reclab_last_error_message() << "\n";
      return exit_code(status);
    }
    text = reclab_text_data(csv);
    reclab_text_destroy(csv);
  }
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "reclab: cannot write " << o.output << "\n";
      return 1;
    }
  }
  return 0;
}
