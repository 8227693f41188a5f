#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace innoscope {

// Base of every error raised by the library. code() is a stable machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }  // 1-based, header included

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message) : Error("schema_error", message) {}
};

class DataError : public Error {
 public:
  DataError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }  // 1-based, header included

 private:
  std::size_t line_;
};

class DegenerateFeatureError : public Error {
 public:
  explicit DegenerateFeatureError(std::string indicator);
  const std::string& indicator() const noexcept { return indicator_; }

 private:
  std::string indicator_;
};

class ClassificationError : public Error {
 public:
  explicit ClassificationError(const std::string& message)
      : Error("classification_error", message) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& message)
      : Error("insufficient_data", message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message) : Error("numeric_error", message) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message) : Error("argument_error", message) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& message) : Error("range_error", message) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& message) : Error("lookup_error", message) {}
};

class StratificationError : public Error {
 public:
  explicit StratificationError(const std::string& message)
      : Error("stratification_error", message) {}
};

class BalanceError : public Error {
 public:
  explicit BalanceError(const std::string& message) : Error("balance_error", message) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, const std::string& message);
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

// Wraps a failure inside a pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string cause_code, const std::string& message);
  const std::string& stage() const noexcept { return stage_; }
  const std::string& cause_code() const noexcept { return cause_code_; }

 private:
  std::string stage_;
  std::string cause_code_;
};

}  // namespace innoscope
