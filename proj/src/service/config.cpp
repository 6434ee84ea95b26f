#include "qcaas/service/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include "qcaas/common/error.hpp"

namespace qcaas::service {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw Error(ErrorCode::StorageFailure, "cannot open " + file.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::StorageFailure, file.string() + ": " + e.what());
  }
  return doc;
}

std::filesystem::path resolve_relative(const std::filesystem::path& base,
                                       const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

}  // namespace

ServiceConfig ServiceConfig::defaults() {
  ServiceConfig config;
  config.backends = {
      BackendDescriptor{"local-sim-fast", qsim::kMaxQubits, 3, "Local statevector simulator, fast tier"},
      BackendDescriptor{"local-sim-small", 12, 1, "Local statevector simulator, small tier"},
  };
  config.validate();
  return config;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& file) {
  const json doc = read_json_file(file);
  if (!doc.is_object()) {
    throw Error(ErrorCode::StorageFailure, file.string() + ": config must be a JSON object");
  }
  ServiceConfig config = defaults();
  const std::filesystem::path base = file.has_parent_path() ? file.parent_path() : ".";

  if (doc.contains("port")) {
    config.port = doc.at("port").get<std::uint16_t>();
  }
  if (doc.contains("data_dir")) {
    config.data_dir = resolve_relative(base, doc.at("data_dir").get<std::string>());
  }
  if (doc.contains("simulator_max_qubits")) {
    config.simulator_max_qubits = doc.at("simulator_max_qubits").get<std::uint32_t>();
  }
  if (doc.contains("worker_threads")) {
    config.worker_threads = doc.at("worker_threads").get<std::uint32_t>();
  }
  if (doc.contains("backends")) {
    if (!doc.at("backends").is_array() || doc.at("backends").empty()) {
      throw Error(ErrorCode::StorageFailure, "config 'backends' must be a non-empty array");
    }
    config.backends.clear();
    for (const json& entry : doc.at("backends")) {
      config.backends.push_back(backend_from_json(entry));
    }
  }
  if (doc.contains("default_backend_id")) {
    config.default_backend_id = doc.at("default_backend_id").get<std::string>();
  }
  if (doc.contains("qsr_manifest")) {
    const auto path = resolve_relative(base, doc.at("qsr_manifest").get<std::string>());
    config.qsr_manifest = lifecycle::parse_qsr_manifest(read_json_file(path));
  }
  if (doc.contains("deployment_descriptor")) {
    const auto path = resolve_relative(base, doc.at("deployment_descriptor").get<std::string>());
    config.deployment = lifecycle::parse_deployment_descriptor(read_json_file(path));
  }

  if (const char* port_env = std::getenv("QCAAS_PORT")) {
    config.port = static_cast<std::uint16_t>(std::stoul(port_env));
  }
  if (const char* data_env = std::getenv("QCAAS_DATA_DIR")) {
    config.data_dir = data_env;
  }

  config.validate();
  return config;
}

void ServiceConfig::validate() const {
  if (simulator_max_qubits < 1 || simulator_max_qubits > qsim::kMaxQubits) {
    throw Error(ErrorCode::InvalidArgument,
                "simulator_max_qubits must be in [1, " + std::to_string(qsim::kMaxQubits) + "]");
  }
  if (backends.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one backend must be configured");
  }
  std::set<std::string> ids;
  for (const BackendDescriptor& backend : backends) {
    if (backend.id.empty()) {
      throw Error(ErrorCode::InvalidArgument, "backend ids must be non-empty");
    }
    if (!ids.insert(backend.id).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate backend id '" + backend.id + "'");
    }
    if (backend.max_qubits < 1 || backend.max_qubits > simulator_max_qubits) {
      throw Error(ErrorCode::InvalidArgument,
                  "backend '" + backend.id + "' cap " + std::to_string(backend.max_qubits) +
                      " outside [1, " + std::to_string(simulator_max_qubits) + "]");
    }
  }
  if (!ids.contains(default_backend_id)) {
    throw Error(ErrorCode::UnknownBackend,
                "default backend '" + default_backend_id + "' is not configured");
  }
  if (deployment) {
    const auto report = lifecycle::validate_deployment(*deployment,
                                                       lifecycle::workflow_classifications());
    if (!report.passed) {
      std::string joined;
      for (const std::string& v : report.violations) {
        joined += (joined.empty() ? "" : "; ") + v;
      }
      throw Error(ErrorCode::MalformedManifest, "deployment descriptor rejected: " + joined);
    }
  }
}

}  // namespace qcaas::service
