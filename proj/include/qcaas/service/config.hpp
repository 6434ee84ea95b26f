#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qcaas/lifecycle/artifacts.hpp"
#include "qcaas/service/job.hpp"

namespace qcaas::service {

/// Service configuration. Loaded from a JSON file; QCAAS_PORT and
/// QCAAS_DATA_DIR environment variables override the file.
struct ServiceConfig {
  std::uint16_t port = 7747;
  std::filesystem::path data_dir = "data";
  std::uint32_t simulator_max_qubits = qsim::kMaxQubits;
  std::uint32_t worker_threads = 2;
  std::vector<BackendDescriptor> backends;
  std::string default_backend_id = "local-sim-fast";
  std::optional<lifecycle::QSRManifest> qsr_manifest;
  std::optional<lifecycle::DeploymentDescriptor> deployment;

  /// Two local simulator tiers, no lifecycle artifacts.
  static ServiceConfig defaults();

  /// Parses the file, resolves manifest paths relative to it, applies
  /// environment overrides, and validates (backend caps within the
  /// simulator cap, unique backend ids, deployment consistent with the
  /// built-in service classification).
  static ServiceConfig load(const std::filesystem::path& file);

  /// Validation shared by defaults() and load(); throws on violations.
  void validate() const;
};

}  // namespace qcaas::service
