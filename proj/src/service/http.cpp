#include "qcaas/service/http.hpp"

#include <functional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "qcaas/common/error.hpp"

namespace qcaas::service {
namespace {

using nlohmann::json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedCircuit:
    case ErrorCode::MalformedManifest:
    case ErrorCode::NoNontrivialFactors:
      return 422;
    case ErrorCode::UnknownBackend:
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::DuplicateCharge:
      return 409;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidN:
    case ErrorCode::CapacityExceeded:
    case ErrorCode::QsrViolation:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::NonBijectiveMapping:
    case ErrorCode::NothingToSample:
    case ErrorCode::UnknownService:
      return 400;
    default:
      return 500;
  }
}

void write_error(httplib::Response& res, int status, const std::string& code,
                 const std::string& message, const json& details) {
  res.status = status;
  res.set_content(json{{"error", {{"code", code}, {"message", message}, {"details", details}}}}
                      .dump(),
                  "application/json");
}

void write_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs a handler body and turns exceptions into the wire error shape.
void guarded(httplib::Response& res, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    write_error(res, status_for(e.code()), to_string(e.code()), e.what(), e.details());
  } catch (const json::exception& e) {
    write_error(res, 400, "invalid_argument", e.what(), json::object());
  } catch (const std::exception& e) {
    write_error(res, 500, "internal", e.what(), json::object());
  }
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  }
  return body;
}

std::string want_string(const json& body, const char* key) {
  if (!body.contains(key) || !body.at(key).is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a string");
  }
  return body.at(key).get<std::string>();
}

std::uint64_t want_u64(const json& body, const char* key) {
  if (!body.contains(key) || !body.at(key).is_number_unsigned()) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a non-negative integer");
  }
  return body.at(key).get<std::uint64_t>();
}

std::optional<std::uint64_t> optional_u64(const json& body, const char* key) {
  if (!body.contains(key)) {
    return std::nullopt;
  }
  if (!body.at(key).is_number_unsigned()) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a non-negative integer");
  }
  return body.at(key).get<std::uint64_t>();
}

}  // namespace

HttpApi::HttpApi(JobService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  register_routes();
}

HttpApi::~HttpApi() { stop(); }

void HttpApi::register_routes() {
  server_->Post("/v1/jobs", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      const std::string tenant = want_string(body, "tenant");
      const std::string backend_id = body.contains("backend_id")
                                         ? want_string(body, "backend_id")
                                         : service_.config().default_backend_id;
      const std::uint64_t shots = want_u64(body, "shots");
      if (!body.contains("circuit")) {
        throw Error(ErrorCode::MalformedCircuit, "circuit is required",
                    {{"problems", json::array({"$.circuit: missing"})}});
      }
      const std::string job_id =
          service_.submit_job(tenant, body.at("circuit"), shots, backend_id,
                              optional_u64(body, "seed"));
      write_json(res, 201, json{{"job_id", job_id}});
    });
  });

  server_->Get("/v1/jobs/([A-Za-z0-9_.-]+)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   write_json(res, 200, to_json(service_.job(req.matches[1].str())));
                 });
               });

  server_->Get("/v1/backends", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      json list = json::array();
      for (const BackendDescriptor& backend : service_.backends()) {
        list.push_back(to_json(backend));
      }
      write_json(res, 200, json{{"backends", list}});
    });
  });

  server_->Get("/v1/billing/([A-Za-z0-9_.-]+)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   write_json(res, 200, to_json(service_.billing(req.matches[1].str())));
                 });
               });

  server_->Post("/v1/factorize", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      const std::string tenant = want_string(body, "tenant");
      JobService::FactorizeOptions options;
      options.n = want_u64(body, "n");
      if (auto v = optional_u64(body, "max_attempts")) {
        options.max_attempts = static_cast<std::uint32_t>(*v);
      }
      options.shots_per_attempt = optional_u64(body, "shots_per_attempt");
      if (body.contains("backend_id")) {
        options.backend_id = want_string(body, "backend_id");
      }
      options.seed = optional_u64(body, "seed");
      write_json(res, 202, json{{"workflow_id", service_.start_factorization(tenant, options)}});
    });
  });

  server_->Get("/v1/factorize/([A-Za-z0-9_.-]+)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   write_json(res, 200, to_json(service_.workflow(req.matches[1].str())));
                 });
               });

  // Unmatched routes and bodyless error statuses get the wire error shape.
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) {
      return;
    }
    write_error(res, res.status == 0 ? 404 : res.status, res.status == 404 ? "not_found" : "error",
                "no such route", json::object());
  });
}

int HttpApi::start(std::uint16_t port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
  } else {
    if (!server_->bind_to_port("0.0.0.0", port)) {
      throw Error(ErrorCode::BackendFailure, "could not bind port " + std::to_string(port));
    }
    port_ = port;
  }
  if (port_ <= 0) {
    throw Error(ErrorCode::BackendFailure, "could not bind a listening port");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpApi::stop() {
  if (server_) {
    server_->stop();
  }
  if (thread_.joinable()) {
    thread_.join();
  }
}

}  // namespace qcaas::service
