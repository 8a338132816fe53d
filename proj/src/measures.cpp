#include "reclab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "reclab/error.hpp"

namespace reclab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kUnit = std::uint64_t{1} << 32;
constexpr std::size_t kLogSpaceLength = 50;

// Cumulative inverse-CDF thresholds at 32-bit resolution; the last entry is
// 2^32 so every 32-bit uniform maps to some symbol.
std::vector<std::uint64_t> cumulative_thresholds(std::span<const double> probs) {
  std::vector<std::uint64_t> out(probs.size());
  double cum = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    cum += probs[a];
    out[a] = std::min<std::uint64_t>(kUnit, static_cast<std::uint64_t>(std::llround(cum * 0x1.0p32)));
  }
  out.back() = kUnit;
  return out;
}

inline Symbol pick(const std::uint64_t* thresholds, std::uint64_t u) noexcept {
  Symbol a = 0;
  while (u >= thresholds[a]) ++a;
  return a;
}

// 32-bit uniforms, two per 64-bit draw, consumed low half first. Keeps the
// pending half so a path does not depend on how it is chunked.
class Halves {
 public:
  explicit Halves(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next() noexcept {
    if (pending_) {
      pending_ = false;
      return high_;
    }
    const std::uint64_t x = rng_();
    high_ = x >> 32;
    pending_ = true;
    return x & 0xffffffffULL;
  }

  /// Calls f(half) `count` times; same sequence as repeated next().
  template <class F>
  void generate(std::size_t count, F&& f) {
    std::size_t i = 0;
    if (pending_ && count > 0) {
      pending_ = false;
      f(high_);
      ++i;
    }
    for (; i + 2 <= count; i += 2) {
      const std::uint64_t x = rng_();
      f(x & 0xffffffffULL);
      f(x >> 32);
    }
    if (i < count) f(next());
  }

 private:
  Rng rng_;
  std::uint64_t high_ = 0;
  bool pending_ = false;
};

void check_symbols(std::span<const Symbol> w, std::uint32_t size) {
  for (Symbol s : w) {
    if (s >= size) {
      fail(ErrorCode::invalid_input, "symbol " + std::to_string(s) +
                                         " is outside the alphabet of size " +
                                         std::to_string(size));
    }
  }
}

void check_positions(std::span<const std::uint64_t> positions) {
  for (std::size_t i = 1; i < positions.size(); ++i)
    require(positions[i] > positions[i - 1], "pattern positions must be strictly increasing");
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double bernoulli_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix matrix_power(const Matrix& base, std::uint64_t k) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  Matrix sq = base;
  while (k > 0) {
    if (k & 1) result = result * sq;
    k >>= 1;
    if (k > 0) sq = sq * sq;
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------- Measure

double Measure::cylinder_prob(const Word& w) const {
  check_symbols(w.symbols(), alphabet_size());
  if (w.size() > kLogSpaceLength) return std::exp(log_prob(w.symbols()));
  return linear_prob(w.symbols());
}

double Measure::log_cylinder_prob(const Word& w) const {
  check_symbols(w.symbols(), alphabet_size());
  return log_prob(w.symbols());
}

Word Measure::sample_path(std::size_t length, std::uint64_t seed) const {
  require(length >= 1, "path length must be at least 1");
  std::vector<Symbol> out(length);
  sampler(seed)->fill(out);
  return Word(std::move(out));
}

// -------------------------------------------------------------- Bernoulli

BernoulliMeasure::BernoulliMeasure(std::vector<double> probs) : probs_(std::move(probs)) {
  require(probs_.size() >= 2, "Bernoulli measure needs at least two symbols");
  double sum = 0.0;
  for (double p : probs_) {
    require(std::isfinite(p) && p >= 0.0, "Bernoulli probabilities must be nonnegative");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "Bernoulli probabilities must sum to 1");
  thresholds_ = cumulative_thresholds(probs_);
}

double BernoulliMeasure::linear_prob(std::span<const Symbol> w) const {
  double p = 1.0;
  for (Symbol s : w) p *= probs_[s];
  return p;
}

double BernoulliMeasure::log_prob(std::span<const Symbol> w) const {
  double lp = 0.0;
  for (Symbol s : w) lp += safe_log(probs_[s]);
  return lp;
}

PatternProb BernoulliMeasure::pattern_prob(std::span<const std::uint64_t> positions) const {
  check_positions(positions);
  return [probs = probs_](std::span<const Symbol> symbols) {
    double p = 1.0;
    for (Symbol s : symbols) p *= probs[s];
    return p;
  };
}

namespace {

class BernoulliSampler final : public PathSampler {
 public:
  BernoulliSampler(const std::vector<std::uint64_t>& thresholds, std::uint64_t seed)
      : thresholds_(thresholds), halves_(seed) {}

  void fill(std::span<Symbol> out) override {
    if (thresholds_.size() == 2) {
      const std::uint64_t t0 = thresholds_[0];
      Symbol* dst = out.data();
      halves_.generate(out.size(), [&](std::uint64_t h) { *dst++ = h >= t0 ? 1u : 0u; });
    } else {
      for (auto& s : out) s = pick(thresholds_.data(), halves_.next());
    }
  }

 private:
  const std::vector<std::uint64_t>& thresholds_;
  Halves halves_;
};

}  // namespace

std::unique_ptr<PathSampler> BernoulliMeasure::sampler(std::uint64_t seed) const {
  return std::make_unique<BernoulliSampler>(thresholds_, seed);
}

PsiValue BernoulliMeasure::psi(std::int64_t m) const {
  require(m >= 0, "psi index must be nonnegative");
  return {0.0, false};
}

DecayRate BernoulliMeasure::decay_rate() const {
  const double pmax = *std::max_element(probs_.begin(), probs_.end());
  if (pmax >= 1.0)
    fail(ErrorCode::no_positive_rate, "degenerate marginal: a symbol has probability 1");
  return {-std::log(pmax), std::nullopt};
}

double BernoulliMeasure::entropy() const { return bernoulli_entropy(probs_); }

nlohmann::json BernoulliMeasure::to_json() const {
  return {{"type", "bernoulli"}, {"probs", probs_}};
}

// ----------------------------------------------------------------- Markov

MarkovMeasure::MarkovMeasure(std::vector<std::vector<double>> transition) {
  const std::size_t s = transition.size();
  require(s >= 2, "Markov measure needs at least two states");
  transition_.reserve(s * s);
  for (const auto& row : transition) {
    require(row.size() == s, "transition matrix must be square");
    double sum = 0.0;
    for (double p : row) {
      require(std::isfinite(p) && p >= 0.0, "transition probabilities must be nonnegative");
      sum += p;
      transition_.push_back(p);
    }
    require(std::abs(sum - 1.0) <= 1e-12, "transition rows must sum to 1");
  }

  // Primitive iff some power is strictly positive; Wielandt's bound
  // (s-1)^2 + 1 on the exponent makes the check finite.
  {
    using BoolMatrix = std::vector<std::uint8_t>;
    auto multiply = [s](const BoolMatrix& a, const BoolMatrix& b) {
      BoolMatrix c(s * s, 0);
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t k = 0; k < s; ++k)
          if (a[i * s + k])
            for (std::size_t j = 0; j < s; ++j) c[i * s + j] |= b[k * s + j];
      return c;
    };
    BoolMatrix base(s * s), acc(s * s, 0);
    for (std::size_t i = 0; i < s * s; ++i) base[i] = transition_[i] > 0.0;
    for (std::size_t i = 0; i < s; ++i) acc[i * s + i] = 1;
    for (std::uint64_t k = (s - 1) * (s - 1) + 1; k > 0; k >>= 1) {
      if (k & 1) acc = multiply(acc, base);
      base = multiply(base, base);
    }
    require(std::all_of(acc.begin(), acc.end(), [](std::uint8_t v) { return v != 0; }),
            "transition matrix must be irreducible and aperiodic");
  }

  const Eigen::Map<const Matrix> p(transition_.data(), static_cast<Eigen::Index>(s),
                                   static_cast<Eigen::Index>(s));
  Matrix a = p.transpose() - Matrix::Identity(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  a.row(static_cast<Eigen::Index>(s) - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s));
  rhs(static_cast<Eigen::Index>(s) - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  stationary_.assign(pi.data(), pi.data() + s);
  for (double& v : stationary_) {
    if (v < 0.0 && v > -1e-14) v = 0.0;
    require(v > 0.0, "stationary distribution must be positive");
  }
  const Eigen::Map<const Eigen::RowVectorXd> pirow(stationary_.data(), static_cast<Eigen::Index>(s));
  require((pirow * p - pirow).cwiseAbs().maxCoeff() <= 1e-10,
          "failed to compute a stationary distribution");

  iid_ = true;
  for (std::size_t i = 1; i < s && iid_; ++i)
    for (std::size_t j = 0; j < s; ++j)
      if (std::abs(transition_[i * s + j] - transition_[j]) > 1e-12) iid_ = false;

  initial_thresholds_ = cumulative_thresholds(stationary_);
  row_thresholds_.reserve(s * s);
  for (std::size_t i = 0; i < s; ++i) {
    auto row = cumulative_thresholds(std::span<const double>(transition_).subspan(i * s, s));
    row_thresholds_.insert(row_thresholds_.end(), row.begin(), row.end());
  }
}

std::vector<double> MarkovMeasure::transition_power(std::uint64_t k) const {
  const auto s = static_cast<Eigen::Index>(states());
  const Eigen::Map<const Matrix> p(transition_.data(), s, s);
  const Matrix pk = matrix_power(p, k);
  return std::vector<double>(pk.data(), pk.data() + s * s);
}

double MarkovMeasure::linear_prob(std::span<const Symbol> w) const {
  double p = stationary_[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) p *= transition(w[i - 1], w[i]);
  return p;
}

double MarkovMeasure::log_prob(std::span<const Symbol> w) const {
  double lp = safe_log(stationary_[w[0]]);
  for (std::size_t i = 1; i < w.size(); ++i) lp += safe_log(transition(w[i - 1], w[i]));
  return lp;
}

PatternProb MarkovMeasure::pattern_prob(std::span<const std::uint64_t> positions) const {
  check_positions(positions);
  const std::size_t s = states();
  std::map<std::uint64_t, std::shared_ptr<const std::vector<double>>> by_gap;
  std::vector<std::shared_ptr<const std::vector<double>>> steps;
  for (std::size_t j = 1; j < positions.size(); ++j) {
    const std::uint64_t gap = positions[j] - positions[j - 1];
    auto& slot = by_gap[gap];
    if (!slot) slot = std::make_shared<const std::vector<double>>(transition_power(gap));
    steps.push_back(slot);
  }
  return [s, stationary = stationary_, steps = std::move(steps)](std::span<const Symbol> symbols) {
    double p = stationary[symbols[0]];
    for (std::size_t j = 0; j < steps.size(); ++j) p *= (*steps[j])[symbols[j] * s + symbols[j + 1]];
    return p;
  };
}

namespace {

class MarkovSampler final : public PathSampler {
 public:
  MarkovSampler(const std::vector<std::uint64_t>& initial, const std::vector<std::uint64_t>& rows,
                std::size_t states, std::uint64_t seed)
      : initial_(initial), rows_(rows), states_(states), halves_(seed) {}

  void fill(std::span<Symbol> out) override {
    for (auto& s : out) {
      const std::uint64_t* t = started_ ? rows_.data() + state_ * states_ : initial_.data();
      state_ = pick(t, halves_.next());
      started_ = true;
      s = state_;
    }
  }

 private:
  const std::vector<std::uint64_t>& initial_;
  const std::vector<std::uint64_t>& rows_;
  std::size_t states_;
  Halves halves_;
  Symbol state_ = 0;
  bool started_ = false;
};

}  // namespace

std::unique_ptr<PathSampler> MarkovMeasure::sampler(std::uint64_t seed) const {
  return std::make_unique<MarkovSampler>(initial_thresholds_, row_thresholds_, states(), seed);
}

PsiValue MarkovMeasure::psi(std::int64_t m) const {
  require(m >= 0, "psi index must be nonnegative");
  // By the Markov property the sup over sigma-algebras reduces to the
  // single-state atoms at the two ends of the gap.
  const auto pk = transition_power(static_cast<std::uint64_t>(m) + 1);
  const std::size_t s = states();
  double worst = 0.0;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      worst = std::max(worst, std::abs(pk[i * s + j] / stationary_[j] - 1.0));
  return {worst, false};
}

double MarkovMeasure::cycle_rate() const {
  // Karp's maximum mean cycle over log-weights: max-times powers D_k of the
  // transition graph, started from every vertex.
  const std::size_t s = states();
  std::vector<std::vector<double>> d(s + 1, std::vector<double>(s, kNegInf));
  std::fill(d[0].begin(), d[0].end(), 0.0);
  for (std::size_t k = 1; k <= s; ++k)
    for (std::size_t u = 0; u < s; ++u) {
      if (d[k - 1][u] == kNegInf) continue;
      for (std::size_t v = 0; v < s; ++v) {
        const double w = transition(u, v);
        if (w > 0.0) d[k][v] = std::max(d[k][v], d[k - 1][u] + std::log(w));
      }
    }
  double best = kNegInf;
  for (std::size_t v = 0; v < s; ++v) {
    if (d[s][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s; ++k) {
      if (d[k][v] == kNegInf) continue;
      worst = std::min(worst, (d[s][v] - d[k][v]) / static_cast<double>(s - k));
    }
    best = std::max(best, worst);
  }
  return -best;
}

DecayRate MarkovMeasure::decay_rate() const {
  // The cycle rate is only the limit; short cylinders can be heavier than
  // exp(-rate * n), so take the minimum with the finite-n rates.
  constexpr std::size_t kCheckedLength = 64;
  const std::size_t s = states();
  double gamma = cycle_rate();
  std::vector<double> best(s, 0.0), next(s);  // log max product of k steps from i
  for (std::size_t n = 1; n <= kCheckedLength; ++n) {
    double heaviest = kNegInf;
    for (std::size_t i = 0; i < s; ++i) heaviest = std::max(heaviest, std::log(stationary_[i]) + best[i]);
    gamma = std::min(gamma, -heaviest / static_cast<double>(n));
    for (std::size_t i = 0; i < s; ++i) {
      next[i] = kNegInf;
      for (std::size_t j = 0; j < s; ++j)
        if (transition(i, j) > 0.0) next[i] = std::max(next[i], std::log(transition(i, j)) + best[j]);
    }
    best.swap(next);
  }
  if (!(gamma > 0.0)) fail(ErrorCode::no_positive_rate, "Markov model has no positive decay rate");
  return {gamma, cycle_rate()};
}

double MarkovMeasure::entropy() const {
  const std::size_t s = states();
  double h = 0.0;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      const double p = transition(i, j);
      if (p > 0.0) h -= stationary_[i] * p * std::log(p);
    }
  return h;
}

nlohmann::json MarkovMeasure::to_json() const {
  const std::size_t s = states();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s; ++i)
    rows.push_back(std::vector<double>(transition_.begin() + static_cast<std::ptrdiff_t>(i * s),
                                       transition_.begin() + static_cast<std::ptrdiff_t>((i + 1) * s)));
  return {{"type", "markov"}, {"transition", rows}};
}

// ------------------------------------------------------------ XorCoupled

XorCoupledMeasure::XorCoupledMeasure(double p1) : p1_(p1) {
  require(std::isfinite(p1) && p1 > 0.0 && p1 < 1.0, "XOR-coupled measure needs 0 < p1 < 1");
  const double probs[2] = {1.0 - p1, p1};
  threshold_one_ = cumulative_thresholds(probs)[0];
}

// [w] pulls back to two cylinders of length n+1 under S: the sequences
// alpha (alpha_0 = 0) and beta (beta_0 = 1) with a_i = x_i XOR x_{i+1}.
double XorCoupledMeasure::linear_prob(std::span<const Symbol> w) const {
  const double p[2] = {p0(), p1_};
  Symbol alpha = 0;
  double pa = p[0], pb = p[1];
  for (Symbol a : w) {
    alpha ^= a;
    pa *= p[alpha];
    pb *= p[alpha ^ 1u];
  }
  return pa + pb;
}

double XorCoupledMeasure::log_prob(std::span<const Symbol> w) const {
  const double lp[2] = {std::log(p0()), std::log(p1_)};
  Symbol alpha = 0;
  double la = lp[0], lb = lp[1];
  for (Symbol a : w) {
    alpha ^= a;
    la += lp[alpha];
    lb += lp[alpha ^ 1u];
  }
  return log_add(la, lb);
}

PatternProb XorCoupledMeasure::pattern_prob(std::span<const std::uint64_t> positions) const {
  check_positions(positions);
  // The image process is 1-dependent: maximal runs of consecutive positions
  // are independent blocks, each distributed as a cylinder.
  std::vector<std::pair<std::size_t, std::size_t>> runs;  // [begin, end)
  for (std::size_t j = 0; j < positions.size();) {
    std::size_t k = j + 1;
    while (k < positions.size() && positions[k] == positions[k - 1] + 1) ++k;
    runs.emplace_back(j, k);
    j = k;
  }
  return [self = *this, runs = std::move(runs)](std::span<const Symbol> symbols) {
    double p = 1.0;
    for (auto [b, e] : runs) p *= self.linear_prob(symbols.subspan(b, e - b));
    return p;
  };
}

namespace {

class XorSampler final : public PathSampler {
 public:
  XorSampler(std::uint64_t threshold_one, std::uint64_t seed)
      : threshold_(threshold_one), halves_(seed) {}

  void fill(std::span<Symbol> out) override {
    if (!started_) {
      last_ = draw();
      started_ = true;
    }
    const std::uint64_t threshold = threshold_;
    Symbol last = last_;
    Symbol* dst = out.data();
    halves_.generate(out.size(), [&](std::uint64_t h) {
      const Symbol x = h >= threshold ? 1u : 0u;
      *dst++ = last ^ x;
      last = x;
    });
    last_ = last;
  }

 private:
  Symbol draw() noexcept { return halves_.next() >= threshold_ ? 1u : 0u; }

  std::uint64_t threshold_;
  Halves halves_;
  Symbol last_ = 0;
  bool started_ = false;
};

}  // namespace

std::unique_ptr<PathSampler> XorCoupledMeasure::sampler(std::uint64_t seed) const {
  return std::make_unique<XorSampler>(threshold_one_, seed);
}

PsiValue XorCoupledMeasure::psi(std::int64_t m) const {
  require(m >= 0, "psi index must be nonnegative");
  if (m >= 1) return {0.0, false};
  return {1.0 + 2.0 * (1.0 / p0() + 1.0 / p1_), true};
}

DecayRate XorCoupledMeasure::decay_rate() const {
  // Per-symbol rate holds for every n; the even-n rate is sharper.
  return {-std::log(std::max(p0(), p1_)), -0.5 * std::log(p0() * p1_)};
}

double XorCoupledMeasure::entropy() const {
  // S is two-to-one, so it preserves the entropy of the product measure.
  const double probs[2] = {p0(), p1_};
  return bernoulli_entropy(probs);
}

nlohmann::json XorCoupledMeasure::to_json() const { return {{"type", "xor"}, {"p1", p1_}}; }

// ---------------------------------------------------------------- factory

MeasurePtr measure_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("type") && j["type"].is_string(),
          "model definition needs a string \"type\"");
  const auto type = j["type"].get<std::string>();
  try {
    if (type == "bernoulli") return std::make_shared<BernoulliMeasure>(j.at("probs").get<std::vector<double>>());
    if (type == "markov")
      return std::make_shared<MarkovMeasure>(j.at("transition").get<std::vector<std::vector<double>>>());
    if (type == "xor") return std::make_shared<XorCoupledMeasure>(j.at("p1").get<double>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("bad model definition: ") + e.what());
  }
  fail(ErrorCode::invalid_input, "unknown model type \"" + type + "\"");
}

}  // namespace reclab
