#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace qcaas {

enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  NonBijectiveMapping,
  MalformedCircuit,
  NothingToSample,
  NumericalFailure,
  UnknownBackend,
  CapacityExceeded,
  NotFound,
  DuplicateCharge,
  InvalidN,
  NoNontrivialFactors,
  AttemptsExhausted,
  UnknownService,
  MalformedManifest,
  QsrViolation,
  BackendFailure,
  StorageFailure,
};

/// Stable wire identifier for an error code (e.g. "malformed_circuit").
const char* to_string(ErrorCode code);

/// Platform exception type. Carries a machine-readable code and, optionally,
/// structured details (diagnostic lists, workflow traces) for API responses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Error(ErrorCode code, const std::string& message, nlohmann::json details)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  nlohmann::json details_;
};

}  // namespace qcaas
