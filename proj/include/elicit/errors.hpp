#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elicit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ELICIT_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

ELICIT_DEFINE_ERROR(InvalidCoordinate);
ELICIT_DEFINE_ERROR(EmptySampleSet);
ELICIT_DEFINE_ERROR(DegenerateTarget);
ELICIT_DEFINE_ERROR(MalformedAnswer);
ELICIT_DEFINE_ERROR(RespondentFailure);
ELICIT_DEFINE_ERROR(TransportError);
ELICIT_DEFINE_ERROR(ReplayDivergence);
ELICIT_DEFINE_ERROR(ReplayExhausted);
ELICIT_DEFINE_ERROR(GridMismatch);
ELICIT_DEFINE_ERROR(MissingReference);
ELICIT_DEFINE_ERROR(EmptyTrace);
ELICIT_DEFINE_ERROR(InsufficientChains);

#undef ELICIT_DEFINE_ERROR

/// Configuration problem; `field()` is the dotted path of the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Chain log parse failure at a 1-based line number.
class LogError : public Error {
 public:
  LogError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace elicit
