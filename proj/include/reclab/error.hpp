#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace reclab {

// Numeric values are shared with the C API status codes in reclab.h.
enum class ErrorCode : int {
  invalid_input = 1,
  hypothesis_failed = 2,
  horizon_too_large = 3,
  too_large = 4,
  conditioning = 5,
  no_positive_rate = 6,
  wrong_model = 7,
  degenerate_parameters = 8,
  precondition = 9,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a bound hypothesis is not met. Carries the violated
/// threshold when the hypothesis is a numeric inequality.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string which, std::optional<double> threshold,
                  const std::string& message)
      : Error(ErrorCode::hypothesis_failed, message),
        which_(std::move(which)),
        threshold_(threshold) {}

  const std::string& which() const noexcept { return which_; }
  std::optional<double> threshold() const noexcept { return threshold_; }

 private:
  std::string which_;
  std::optional<double> threshold_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::invalid_input, message);
}

}  // namespace reclab
