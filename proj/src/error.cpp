#include "innoscope/error.hpp"

namespace innoscope {

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("parse_error", "line " + std::to_string(line) + ": " + message), line_(line) {}

DataError::DataError(std::size_t line, const std::string& message)
    : Error("data_error", "line " + std::to_string(line) + ": " + message), line_(line) {}

DegenerateFeatureError::DegenerateFeatureError(std::string indicator)
    : Error("degenerate_feature", "feature '" + indicator + "' has zero variance"),
      indicator_(std::move(indicator)) {}

DivergenceError::DivergenceError(int epoch, const std::string& message)
    : Error("divergence_error", "epoch " + std::to_string(epoch) + ": " + message), epoch_(epoch) {}

StageError::StageError(std::string stage, std::string cause_code, const std::string& message)
    : Error("stage_error", stage + ": " + message),
      stage_(std::move(stage)),
      cause_code_(std::move(cause_code)) {}

}  // namespace innoscope
