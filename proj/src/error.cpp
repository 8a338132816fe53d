#include "reclab/error.hpp"

namespace reclab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::hypothesis_failed: return "hypothesis-failed";
    case ErrorCode::horizon_too_large: return "horizon-too-large";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::conditioning: return "conditioning";
    case ErrorCode::no_positive_rate: return "no-positive-rate";
    case ErrorCode::wrong_model: return "wrong-model";
    case ErrorCode::degenerate_parameters: return "degenerate-parameters";
    case ErrorCode::precondition: return "precondition";
  }
  return "unknown";
}

}  // namespace reclab
