#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qcaas/common/error.hpp"
#include "qcaas/lifecycle/artifacts.hpp"
#include "qcaas/service/config.hpp"
#include "qcaas/service/http.hpp"
#include "qcaas/service/job_service.hpp"

using namespace qcaas;
using namespace qcaas::service;
using nlohmann::json;

namespace {

std::atomic<std::uint64_t> temp_counter{0};

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("qcaas_http_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(temp_counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// A service plus its HTTP face on an ephemeral port.
struct TestServer {
  TempDir tmp;
  JobService service;
  HttpApi api;
  httplib::Client client;

  explicit TestServer(std::optional<lifecycle::QSRManifest> manifest = std::nullopt)
      : service(make_config(tmp.path, std::move(manifest))),
        api(service),
        client("127.0.0.1", api.start(0)) {
    client.set_connection_timeout(5);
    client.set_read_timeout(60);
  }
  ~TestServer() {
    api.stop();
    service.stop(false);
  }

  static ServiceConfig make_config(const std::filesystem::path& data_dir,
                                   std::optional<lifecycle::QSRManifest> manifest) {
    ServiceConfig config = ServiceConfig::defaults();
    config.data_dir = data_dir;
    config.qsr_manifest = std::move(manifest);
    return config;
  }

  json post(const std::string& route, const json& body, int expected_status) {
    auto res = client.Post(route, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expected_status);
    return json::parse(res->body);
  }

  json get(const std::string& route, int expected_status) {
    auto res = client.Get(route);
    REQUIRE(res);
    CHECK(res->status == expected_status);
    return json::parse(res->body);
  }

  // Polls a document route until its status leaves "queued"/"running".
  json poll(const std::string& route) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
    while (std::chrono::steady_clock::now() < deadline) {
      json doc = get(route, 200);
      const std::string status = doc.at("status");
      if (status != "queued" && status != "running") {
        return doc;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    FAIL("document at " << route << " never reached a terminal status");
    return json();
  }
};

json bell_circuit() {
  return json::parse(R"({
    "num_qubits": 2, "num_clbits": 2,
    "ops": [
      {"gate": "h", "target": 0},
      {"gate": "cperm", "controls": [0], "targets": [1], "mapping": [1, 0]},
      {"gate": "measure", "qubit": 0, "clbit": 0},
      {"gate": "measure", "qubit": 1, "clbit": 1}
    ]
  })");
}

}  // namespace

TEST_CASE("a job travels submit, poll, result, billing over HTTP") {
  TestServer server;

  json submitted = server.post(
      "/v1/jobs",
      json{{"tenant", "acme"}, {"circuit", bell_circuit()}, {"shots", 256}, {"seed", 11}}, 201);
  const std::string job_id = submitted.at("job_id");
  CHECK(job_id == "job-00000001");

  json job = server.poll("/v1/jobs/" + job_id);
  CHECK(job.at("status") == "done");
  CHECK(job.at("tenant") == "acme");
  CHECK(job.at("backend_id") == "local-sim-fast");
  CHECK(job.at("shots") == 256);
  CHECK(job.at("seed") == 11);
  CHECK(job.at("cost") == 256 * 3);
  REQUIRE(job.contains("result"));
  std::uint64_t total = 0;
  for (const auto& [bits, count] : job.at("result").at("counts").items()) {
    CHECK((bits == "00" || bits == "11"));
    total += count.get<std::uint64_t>();
  }
  CHECK(total == 256);

  json billing = server.get("/v1/billing/acme", 200);
  CHECK(billing.at("tenant") == "acme");
  CHECK(billing.at("total") == 256 * 3);
  REQUIRE(billing.at("entries").size() == 1);
  CHECK(billing.at("entries")[0].at("job_id") == job_id);
  CHECK(billing.at("entries")[0].at("cost") == 256 * 3);

  // Unknown tenants simply have an empty summary.
  json empty = server.get("/v1/billing/nobody", 200);
  CHECK(empty.at("total") == 0);
  CHECK(empty.at("entries").empty());
}

TEST_CASE("identical seeds give identical counts over HTTP") {
  TestServer server;
  json first = server.post(
      "/v1/jobs",
      json{{"tenant", "acme"}, {"circuit", bell_circuit()}, {"shots", 512}, {"seed", 99}}, 201);
  json second = server.post(
      "/v1/jobs",
      json{{"tenant", "acme"}, {"circuit", bell_circuit()}, {"shots", 512}, {"seed", 99}}, 201);
  json a = server.poll("/v1/jobs/" + first.at("job_id").get<std::string>());
  json b = server.poll("/v1/jobs/" + second.at("job_id").get<std::string>());
  CHECK(a.at("result").at("counts") == b.at("result").at("counts"));
}

TEST_CASE("backends listing carries prices and capacities") {
  TestServer server;
  json doc = server.get("/v1/backends", 200);
  REQUIRE(doc.at("backends").size() == 2);
  CHECK(doc.at("backends")[0].at("id") == "local-sim-fast");
  CHECK(doc.at("backends")[0].at("max_qubits") == 26);
  CHECK(doc.at("backends")[0].at("price_per_shot") == 3);
  CHECK(doc.at("backends")[1].at("id") == "local-sim-small");
}

TEST_CASE("malformed circuits come back as 422 with pointer diagnostics") {
  TestServer server;
  json bad = bell_circuit();
  bad["ops"][0]["target"] = -1;
  bad["ops"][1]["mapping"] = json::array({0, 0});

  json body = server.post(
      "/v1/jobs", json{{"tenant", "acme"}, {"circuit", bad}, {"shots", 10}}, 422);
  CHECK(body.at("error").at("code") == "malformed_circuit");
  REQUIRE(body.at("error").contains("details"));
  const json& details = body.at("error").at("details");
  REQUIRE(details.is_array());
  bool has_pointer = false;
  for (const auto& problem : details) {
    if (problem.get<std::string>().rfind("$.ops[0]", 0) == 0) {
      has_pointer = true;
    }
  }
  CHECK(has_pointer);

  // A structurally invalid circuit (measure then gate) is also 422.
  json reordered = json::parse(R"({
    "num_qubits": 1, "num_clbits": 1,
    "ops": [{"gate": "measure", "qubit": 0, "clbit": 0}, {"gate": "h", "target": 0}]
  })");
  json second = server.post(
      "/v1/jobs", json{{"tenant", "acme"}, {"circuit", reordered}, {"shots", 10}}, 422);
  CHECK(second.at("error").at("code") == "malformed_circuit");

  // Missing circuit field entirely.
  json third = server.post("/v1/jobs", json{{"tenant", "acme"}, {"shots", 10}}, 422);
  CHECK(third.at("error").at("code") == "malformed_circuit");
}

TEST_CASE("gateway rejections map to stable HTTP statuses") {
  TestServer server;

  json unknown = server.post(
      "/v1/jobs",
      json{{"tenant", "acme"}, {"circuit", bell_circuit()}, {"shots", 10}, {"backend_id", "hal"}},
      404);
  CHECK(unknown.at("error").at("code") == "unknown_backend");

  json zero_shots = server.post(
      "/v1/jobs", json{{"tenant", "acme"}, {"circuit", bell_circuit()}, {"shots", 0}}, 400);
  CHECK(zero_shots.at("error").at("code") == "invalid_argument");

  json negative_shots = server.post(
      "/v1/jobs", json{{"tenant", "acme"}, {"circuit", bell_circuit()}, {"shots", -4}}, 400);
  CHECK(negative_shots.at("error").at("code") == "invalid_argument");

  json no_tenant = server.post(
      "/v1/jobs", json{{"circuit", bell_circuit()}, {"shots", 10}}, 400);
  CHECK(no_tenant.at("error").at("code") == "invalid_argument");

  auto raw = server.client.Post("/v1/jobs", "this is not json", "application/json");
  REQUIRE(raw);
  CHECK(raw->status == 400);
  CHECK(json::parse(raw->body).at("error").at("code") == "invalid_argument");

  json wide = bell_circuit();
  wide["num_qubits"] = 30;
  json capacity = server.post(
      "/v1/jobs", json{{"tenant", "acme"}, {"circuit", wide}, {"shots", 10}}, 400);
  CHECK(capacity.at("error").at("code") == "capacity_exceeded");

  json missing = server.get("/v1/jobs/job-99999999", 404);
  CHECK(missing.at("error").at("code") == "not_found");

  json no_route = server.get("/v1/teleport", 404);
  CHECK(no_route.at("error").at("code") == "not_found");

  CHECK(server.service.simulator_invocations() == 0);
}

TEST_CASE("factorization over HTTP succeeds with a full trace") {
  TestServer server;
  json accepted = server.post(
      "/v1/factorize", json{{"tenant", "acme"}, {"n", 15}, {"seed", 42}}, 202);
  const std::string wf = accepted.at("workflow_id");
  CHECK(wf == "wf-00000001");

  json doc = server.poll("/v1/factorize/" + wf);
  CHECK(doc.at("status") == "succeeded");
  CHECK(doc.at("n") == 15);
  REQUIRE(doc.contains("result"));
  CHECK(doc.at("result").at("p") == 3);
  CHECK(doc.at("result").at("q") == 5);
  const std::uint64_t total_shots = doc.at("result").at("total_shots");
  CHECK(doc.at("total_cost") == total_shots * 3);
  REQUIRE(doc.at("trace").is_array());
  CHECK(doc.at("trace").size() == doc.at("result").at("attempts_used"));

  // Each workflow job is fetchable as a normal job document.
  for (const auto& job_id : doc.at("job_ids")) {
    json job = server.get("/v1/jobs/" + job_id.get<std::string>(), 200);
    CHECK(job.at("status") == "done");
    CHECK(job.at("tenant") == "acme");
  }

  // And billing matches the workflow cost.
  json billing = server.get("/v1/billing/acme", 200);
  CHECK(billing.at("total") == doc.at("total_cost"));
}

TEST_CASE("factorizing a prime fails the workflow without charges") {
  TestServer server;
  json accepted = server.post("/v1/factorize", json{{"tenant", "acme"}, {"n", 13}}, 202);
  json doc = server.poll("/v1/factorize/" + accepted.at("workflow_id").get<std::string>());
  CHECK(doc.at("status") == "failed");
  REQUIRE(doc.contains("error"));
  CHECK(doc.at("error").at("code") == "no_nontrivial_factors");
  CHECK(doc.at("total_cost") == 0);
  CHECK_FALSE(doc.contains("result"));
  CHECK(server.get("/v1/billing/acme", 200).at("total") == 0);
}

TEST_CASE("factorization input errors are synchronous") {
  TestServer server;

  json too_big = server.post(
      "/v1/factorize", json{{"tenant", "acme"}, {"n", 1048576}}, 400);
  CHECK(too_big.at("error").at("code") == "invalid_n");

  json too_small = server.post("/v1/factorize", json{{"tenant", "acme"}, {"n", 2}}, 400);
  CHECK(too_small.at("error").at("code") == "invalid_n");

  json bad_backend = server.post(
      "/v1/factorize", json{{"tenant", "acme"}, {"n", 15}, {"backend_id", "hal"}}, 404);
  CHECK(bad_backend.at("error").at("code") == "unknown_backend");

  json missing_wf = server.get("/v1/factorize/wf-99999999", 404);
  CHECK(missing_wf.at("error").at("code") == "not_found");
}

TEST_CASE("the QSR manifest gate reports violations over HTTP") {
  lifecycle::QSRManifest manifest = lifecycle::parse_qsr_manifest(json{
      {"functional", json::array({json{{"name", "factorization"}}})},
      {"quality", json::array({json{{"name", "qubit_budget"}, {"bound", 8}}})},
  });
  TestServer server(manifest);

  json rejected = server.post("/v1/factorize", json{{"tenant", "acme"}, {"n", 15}}, 400);
  CHECK(rejected.at("error").at("code") == "qsr_violation");
  REQUIRE(rejected.at("error").at("details").contains("report"));
  CHECK(rejected.at("error").at("details").at("report").at("passed") == false);
  CHECK(server.service.simulator_invocations() == 0);
}
