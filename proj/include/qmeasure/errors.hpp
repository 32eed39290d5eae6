#pragma once

#include <stdexcept>
#include <string>

namespace qmeasure {

/// Base of every error thrown by the library. `code()` is a stable,
/// machine-readable identifier used by the CLI error envelope.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define QMEASURE_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(Code, what) {}           \
  }

/// A caller broke an operation precondition (length mismatch, foreign event).
QMEASURE_DEFINE_ERROR(ContractViolation, "contract_violation");
/// Invalid or missing configuration value.
QMEASURE_DEFINE_ERROR(ConfigError, "config_error");
/// Optical netlist references an unknown, duplicated or dangling port.
QMEASURE_DEFINE_ERROR(WiringError, "wiring_error");
/// Numeric input outside the domain of an operation.
QMEASURE_DEFINE_ERROR(InputError, "input_error");
/// Data that makes a statistic undefined (zero spread, nothing accepted).
QMEASURE_DEFINE_ERROR(DegenerateDataError, "degenerate_data");
/// Data that is usable in principle but fails a quality threshold.
QMEASURE_DEFINE_ERROR(DataQualityError, "data_quality");
/// Malformed user-supplied value (history strings, labels).
QMEASURE_DEFINE_ERROR(ValidationError, "validation_error");
/// Malformed document (JSON, CSV).
QMEASURE_DEFINE_ERROR(ParseError, "parse_error");
/// File system failure.
QMEASURE_DEFINE_ERROR(IoError, "io_error");

#undef QMEASURE_DEFINE_ERROR

}  // namespace qmeasure
