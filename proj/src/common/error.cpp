#include "qcaas/common/error.hpp"

namespace qcaas {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:      return "invalid_argument";
    case ErrorCode::IndexOutOfRange:      return "index_out_of_range";
    case ErrorCode::NonBijectiveMapping:  return "non_bijective_mapping";
    case ErrorCode::MalformedCircuit:     return "malformed_circuit";
    case ErrorCode::NothingToSample:      return "nothing_to_sample";
    case ErrorCode::NumericalFailure:     return "numerical_failure";
    case ErrorCode::UnknownBackend:       return "unknown_backend";
    case ErrorCode::CapacityExceeded:     return "capacity_exceeded";
    case ErrorCode::NotFound:             return "not_found";
    case ErrorCode::DuplicateCharge:      return "duplicate_charge";
    case ErrorCode::InvalidN:             return "invalid_n";
    case ErrorCode::NoNontrivialFactors:  return "no_nontrivial_factors";
    case ErrorCode::AttemptsExhausted:    return "attempts_exhausted";
    case ErrorCode::UnknownService:       return "unknown_service";
    case ErrorCode::MalformedManifest:    return "malformed_manifest";
    case ErrorCode::QsrViolation:         return "qsr_violation";
    case ErrorCode::BackendFailure:       return "backend_failure";
    case ErrorCode::StorageFailure:       return "storage_failure";
  }
  return "unknown_error";
}

}  // namespace qcaas
