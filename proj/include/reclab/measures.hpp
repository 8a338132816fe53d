#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "reclab/rng.hpp"
#include "reclab/symbolic.hpp"

namespace reclab {

enum class MeasureKind { bernoulli, markov, xor_coupled };

/// psi-mixing coefficient. `upper_bound` marks values that only bound the
/// exact coefficient from above.
struct PsiValue {
  double value = 0.0;
  bool upper_bound = false;
};

/// Decay rate Gamma with max over n-cylinders of P(A) <= exp(-Gamma n) for
/// every n. `eventual` is a sharper rate that only holds asymptotically or
/// along a subsequence of n, when the model has one.
struct DecayRate {
  double gamma = 0.0;
  std::optional<double> eventual;
};

/// Stateful symbol stream for one sampled path. Successive fill() calls
/// continue the same path.
class PathSampler {
 public:
  virtual ~PathSampler() = default;
  virtual void fill(std::span<Symbol> out) = 0;
};

/// Probability of a sparse pattern: symbols[j] placed at positions[j].
using PatternProb = std::function<double(std::span<const Symbol>)>;

/// Shift-invariant probability measure on the sequence space. Immutable
/// after construction and safe to share across threads.
class Measure {
 public:
  virtual ~Measure() = default;

  virtual MeasureKind kind() const noexcept = 0;
  virtual std::uint32_t alphabet_size() const noexcept = 0;
  Alphabet alphabet() const { return Alphabet::finite(alphabet_size()); }

  /// True when coordinates are i.i.d. under the measure.
  virtual bool is_iid() const noexcept { return false; }

  /// Exact probability of the cylinder [w]. Computed in log space for
  /// words longer than 50 symbols.
  double cylinder_prob(const Word& w) const;
  double log_cylinder_prob(const Word& w) const;

  /// Evaluator for patterns over a fixed, strictly increasing position set.
  virtual PatternProb pattern_prob(std::span<const std::uint64_t> positions) const = 0;

  virtual std::unique_ptr<PathSampler> sampler(std::uint64_t seed) const = 0;
  Word sample_path(std::size_t length, std::uint64_t seed) const;

  virtual PsiValue psi(std::int64_t m) const = 0;
  virtual DecayRate decay_rate() const = 0;

  /// Kolmogorov-Sinai entropy of the shift, in nats.
  virtual double entropy() const = 0;

  virtual nlohmann::json to_json() const = 0;

 protected:
  virtual double linear_prob(std::span<const Symbol> w) const = 0;
  virtual double log_prob(std::span<const Symbol> w) const = 0;
};

using MeasurePtr = std::shared_ptr<const Measure>;

/// Product measure with marginal `probs`.
class BernoulliMeasure final : public Measure {
 public:
  explicit BernoulliMeasure(std::vector<double> probs);

  const std::vector<double>& probs() const noexcept { return probs_; }

  MeasureKind kind() const noexcept override { return MeasureKind::bernoulli; }
  std::uint32_t alphabet_size() const noexcept override {
    return static_cast<std::uint32_t>(probs_.size());
  }
  bool is_iid() const noexcept override { return true; }
  PatternProb pattern_prob(std::span<const std::uint64_t> positions) const override;
  std::unique_ptr<PathSampler> sampler(std::uint64_t seed) const override;
  PsiValue psi(std::int64_t m) const override;
  DecayRate decay_rate() const override;
  double entropy() const override;
  nlohmann::json to_json() const override;

 protected:
  double linear_prob(std::span<const Symbol> w) const override;
  double log_prob(std::span<const Symbol> w) const override;

 private:
  std::vector<double> probs_;
  std::vector<std::uint64_t> thresholds_;
};

/// Stationary Markov chain given by a primitive row-stochastic matrix.
class MarkovMeasure final : public Measure {
 public:
  explicit MarkovMeasure(std::vector<std::vector<double>> transition);

  std::size_t states() const noexcept { return stationary_.size(); }
  double transition(std::size_t i, std::size_t j) const { return transition_[i * states() + j]; }
  const std::vector<double>& stationary() const noexcept { return stationary_; }

  /// Entry (i, j) of the k-step transition matrix, row-major.
  std::vector<double> transition_power(std::uint64_t k) const;

  /// Max-mean cycle rate of the transition graph: minus the largest mean
  /// log-weight over cycles. The limit of -ln(max n-cylinder prob)/n.
  double cycle_rate() const;

  MeasureKind kind() const noexcept override { return MeasureKind::markov; }
  std::uint32_t alphabet_size() const noexcept override {
    return static_cast<std::uint32_t>(stationary_.size());
  }
  bool is_iid() const noexcept override { return iid_; }
  PatternProb pattern_prob(std::span<const std::uint64_t> positions) const override;
  std::unique_ptr<PathSampler> sampler(std::uint64_t seed) const override;
  PsiValue psi(std::int64_t m) const override;
  DecayRate decay_rate() const override;
  double entropy() const override;
  nlohmann::json to_json() const override;

 protected:
  double linear_prob(std::span<const Symbol> w) const override;
  double log_prob(std::span<const Symbol> w) const override;

 private:
  std::vector<double> transition_;  // row-major
  std::vector<double> stationary_;
  std::vector<std::uint64_t> initial_thresholds_;
  std::vector<std::uint64_t> row_thresholds_;  // row-major
  bool iid_ = false;
};

/// Image of the Bernoulli(p0, p1) product measure under
/// (S w)_n = w_n XOR w_{n+1}.
class XorCoupledMeasure final : public Measure {
 public:
  explicit XorCoupledMeasure(double p1);

  double p0() const noexcept { return 1.0 - p1_; }
  double p1() const noexcept { return p1_; }

  MeasureKind kind() const noexcept override { return MeasureKind::xor_coupled; }
  std::uint32_t alphabet_size() const noexcept override { return 2; }
  PatternProb pattern_prob(std::span<const std::uint64_t> positions) const override;
  std::unique_ptr<PathSampler> sampler(std::uint64_t seed) const override;
  PsiValue psi(std::int64_t m) const override;
  DecayRate decay_rate() const override;
  double entropy() const override;
  nlohmann::json to_json() const override;

 protected:
  double linear_prob(std::span<const Symbol> w) const override;
  double log_prob(std::span<const Symbol> w) const override;

 private:
  double p1_;
  std::uint64_t threshold_one_;
};

/// {"type":"bernoulli","probs":[...]}, {"type":"markov","transition":[[...]]}
/// or {"type":"xor","p1":...}.
MeasurePtr measure_from_json(const nlohmann::json& j);

}  // namespace reclab
