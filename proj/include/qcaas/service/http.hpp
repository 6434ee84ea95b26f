#pragma once

#include <cstdint>
#include <memory>
#include <thread>

#include "qcaas/service/job_service.hpp"

namespace httplib {
class Server;
}

namespace qcaas::service {

/// HTTP face of the service. Thin adapter: every route parses the request,
/// calls the corresponding JobService method and maps errors to statuses
/// (malformed_circuit 422; unknown_backend, not_found 404; invalid
/// arguments, invalid_n, capacity_exceeded, qsr_violation 400). Error
/// bodies are {"error": {"code", "message", "details"}}.
///
/// Routes:
///   POST /v1/jobs             submit a circuit, 201 {"job_id"}
///   GET  /v1/jobs/{id}        job document with status, result, cost
///   GET  /v1/backends         available backends
///   GET  /v1/billing/{tenant} per-tenant billing summary
///   POST /v1/factorize        start a workflow, 202 {"workflow_id"}
///   GET  /v1/factorize/{id}   workflow document with trace and result
class HttpApi {
 public:
  explicit HttpApi(JobService& service);
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Binds and serves on a background thread. port 0 picks a free port.
  /// Returns the bound port.
  int start(std::uint16_t port);
  void stop();
  int port() const { return port_; }

 private:
  void register_routes();

  JobService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace qcaas::service
