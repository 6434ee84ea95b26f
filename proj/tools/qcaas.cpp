#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "qcaas/common/error.hpp"
#include "qcaas/qsim/simulator.hpp"
#include "qcaas/qsim/wire.hpp"

namespace {

using nlohmann::json;

// Exit codes, also documented in --help and the README:
//   0 success          5 invalid n
//   1 runtime failure  6 no nontrivial factors (prime input)
//   2 usage error      7 attempts exhausted
//   3 connection       8 malformed circuit
//   4 not found        9 capacity exceeded
enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kConnection = 3,
  kNotFound = 4,
  kInvalidN = 5,
  kNoFactors = 6,
  kExhausted = 7,
  kMalformed = 8,
  kCapacity = 9,
};

struct CliFailure {
  int exit_code;
  std::string message;
  json wire = nullptr;  // error document for structured mode, when available
};

int exit_code_for(const std::string& error_code) {
  if (error_code == "invalid_n") return kInvalidN;
  if (error_code == "no_nontrivial_factors") return kNoFactors;
  if (error_code == "attempts_exhausted") return kExhausted;
  if (error_code == "malformed_circuit") return kMalformed;
  if (error_code == "capacity_exceeded") return kCapacity;
  if (error_code == "not_found" || error_code == "unknown_backend") return kNotFound;
  return kFailure;
}

struct Options {
  std::string endpoint = "http://127.0.0.1:7747";
  std::string tenant = "default";
  std::string output = "human";
  std::optional<std::uint64_t> seed;

  bool structured() const { return output == "structured"; }
};

class ApiClient {
 public:
  explicit ApiClient(const Options& options) : options_(options) {}

  json get(const std::string& path) {
    httplib::Client client = make();
    httplib::Result res = client.Get(path);
    return unwrap(std::move(res), path);
  }

  json post(const std::string& path, const json& body) {
    httplib::Client client = make();
    httplib::Result res = client.Post(path, body.dump(), "application/json");
    return unwrap(std::move(res), path);
  }

 private:
  httplib::Client make() {
    httplib::Client client(options_.endpoint);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(60, 0);
    return client;
  }

  json unwrap(httplib::Result res, const std::string& path) {
    if (!res) {
      throw CliFailure{kConnection,
                       "cannot reach " + options_.endpoint + " (" + to_string(res.error()) + ")"};
    }
    json body = json::parse(res->body, nullptr, false);
    if (res->status >= 400) {
      std::string code = "internal";
      std::string message = "request failed with status " + std::to_string(res->status);
      if (body.is_object() && body.contains("error")) {
        code = body["error"].value("code", code);
        message = body["error"].value("message", message);
      }
      throw CliFailure{exit_code_for(code), message, body};
    }
    if (body.is_discarded()) {
      throw CliFailure{kFailure, "server returned a non-JSON response for " + path};
    }
    return body;
  }

  const Options& options_;
};

void print_json(const json& doc) { std::printf("%s\n", doc.dump(2).c_str()); }

json load_circuit_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    throw CliFailure{kFailure, "cannot open " + file};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) {
    throw CliFailure{kMalformed, file + " is not valid JSON"};
  }
  return doc;
}

void print_counts(const json& result) {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  for (const auto& [bits, count] : result.at("counts").items()) {
    rows.emplace_back(bits, count.get<std::uint64_t>());
  }
  std::sort(rows.begin(), rows.end());
  std::printf("counts (%llu shots, seed %llu):\n",
              static_cast<unsigned long long>(result.at("shots").get<std::uint64_t>()),
              static_cast<unsigned long long>(result.at("seed").get<std::uint64_t>()));
  for (const auto& [bits, count] : rows) {
    std::printf("  %s  %llu\n", bits.c_str(), static_cast<unsigned long long>(count));
  }
}

json poll(ApiClient& client, const std::string& path, const std::string& running_status,
          int timeout_seconds) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::seconds(timeout_seconds);
  auto delay = std::chrono::milliseconds(100);
  for (;;) {
    json doc = client.get(path);
    if (doc.value("status", "") != running_status) {
      return doc;
    }
    if (timeout_seconds > 0 && clock::now() + delay > deadline) {
      throw CliFailure{kFailure, "timed out waiting for " + path};
    }
    std::this_thread::sleep_for(delay);
    delay = std::min(delay * 2, std::chrono::milliseconds(5000));
  }
}

int cmd_factor(const Options& options, std::uint64_t n, std::optional<std::uint64_t> attempts,
               std::optional<std::uint64_t> shots, const std::string& backend,
               int timeout_seconds) {
  ApiClient client(options);
  json request{{"tenant", options.tenant}, {"n", n}};
  if (attempts) request["max_attempts"] = *attempts;
  if (shots) request["shots_per_attempt"] = *shots;
  if (!backend.empty()) request["backend_id"] = backend;
  if (options.seed) request["seed"] = *options.seed;

  const json started = client.post("/v1/factorize", request);
  const std::string id = started.at("workflow_id").get<std::string>();
  const json doc = poll(client, "/v1/factorize/" + id, "running", timeout_seconds);

  if (options.structured()) {
    print_json(doc);
  }
  if (doc.value("status", "") == "succeeded") {
    const json& result = doc.at("result");
    if (!options.structured()) {
      std::printf("%llu = %llu × %llu\n", static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>(result.at("p").get<std::uint64_t>()),
                  static_cast<unsigned long long>(result.at("q").get<std::uint64_t>()));
      std::printf("attempts: %llu, shots: %llu, cost: %llu micro-credits\n",
                  static_cast<unsigned long long>(result.at("attempts_used").get<std::uint64_t>()),
                  static_cast<unsigned long long>(result.at("total_shots").get<std::uint64_t>()),
                  static_cast<unsigned long long>(doc.value("total_cost", 0ull)));
    }
    return kOk;
  }
  const std::string code = doc.contains("error") ? doc["error"].value("code", "") : "";
  const std::string message = doc.contains("error") ? doc["error"].value("message", "") : "";
  if (!options.structured()) {
    if (code == "no_nontrivial_factors") {
      std::printf("%llu is prime\n", static_cast<unsigned long long>(n));
    } else {
      std::fprintf(stderr, "factorization failed: %s\n", message.c_str());
    }
  }
  return exit_code_for(code);
}

int cmd_backends(const Options& options) {
  ApiClient client(options);
  const json doc = client.get("/v1/backends");
  if (options.structured()) {
    print_json(doc);
    return kOk;
  }
  std::printf("%-18s %-12s %-12s %s\n", "id", "max_qubits", "price/shot", "name");
  for (const json& backend : doc.at("backends")) {
    std::printf("%-18s %-12u %-12llu %s\n", backend.at("id").get<std::string>().c_str(),
                backend.at("max_qubits").get<std::uint32_t>(),
                static_cast<unsigned long long>(backend.at("price_per_shot").get<std::uint64_t>()),
                backend.value("display_name", "").c_str());
  }
  return kOk;
}

int cmd_job(const Options& options, const std::string& job_id) {
  ApiClient client(options);
  const json doc = client.get("/v1/jobs/" + job_id);
  if (options.structured()) {
    print_json(doc);
    return kOk;
  }
  std::printf("job %s on %s: %s\n", doc.at("job_id").get<std::string>().c_str(),
              doc.at("backend_id").get<std::string>().c_str(),
              doc.at("status").get<std::string>().c_str());
  std::printf("tenant %s, shots %llu, cost %llu micro-credits\n",
              doc.at("tenant").get<std::string>().c_str(),
              static_cast<unsigned long long>(doc.at("shots").get<std::uint64_t>()),
              static_cast<unsigned long long>(doc.at("cost").get<std::uint64_t>()));
  if (doc.contains("result")) {
    print_counts(doc.at("result"));
  }
  if (doc.contains("error")) {
    std::printf("error: %s\n", doc.at("error").get<std::string>().c_str());
  }
  return kOk;
}

int cmd_billing(const Options& options) {
  ApiClient client(options);
  const json doc = client.get("/v1/billing/" + options.tenant);
  if (options.structured()) {
    print_json(doc);
    return kOk;
  }
  std::printf("tenant %s: %llu micro-credits across %zu charges\n",
              doc.at("tenant").get<std::string>().c_str(),
              static_cast<unsigned long long>(doc.at("total").get<std::uint64_t>()),
              doc.at("entries").size());
  for (const json& entry : doc.at("entries")) {
    std::printf("  %s  %llu shots × %llu = %llu\n", entry.at("job_id").get<std::string>().c_str(),
                static_cast<unsigned long long>(entry.at("shots").get<std::uint64_t>()),
                static_cast<unsigned long long>(entry.at("price_per_shot").get<std::uint64_t>()),
                static_cast<unsigned long long>(entry.at("cost").get<std::uint64_t>()));
  }
  return kOk;
}

int cmd_simulate(const Options& options, const std::string& file, std::uint64_t shots) {
  const json wire = load_circuit_file(file);
  try {
    const qcaas::qsim::Circuit circuit = qcaas::qsim::circuit_from_wire(wire);
    const std::uint64_t seed = options.seed.value_or(1);
    const qcaas::qsim::ShotResult result = qcaas::qsim::run_circuit(circuit, shots, seed);
    const json doc = qcaas::qsim::shot_result_to_wire(result);
    if (options.structured()) {
      print_json(doc);
    } else {
      print_counts(doc);
    }
    return kOk;
  } catch (const qcaas::Error& e) {
    json details = e.details();
    std::string message = e.what();
    if (details.contains("problems")) {
      for (const json& problem : details["problems"]) {
        message += "\n  " + problem.get<std::string>();
      }
    }
    throw CliFailure{e.code() == qcaas::ErrorCode::MalformedCircuit ? kMalformed : kFailure,
                     message};
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options options;
  if (const char* env = std::getenv("QCAAS_ENDPOINT")) {
    options.endpoint = env;
  }
  if (const char* env = std::getenv("QCAAS_TENANT")) {
    options.tenant = env;
  }

  CLI::App app{"qcaas: client for the quantum computing service"};
  app.require_subcommand(1);
  app.add_option("--endpoint", options.endpoint, "service URL (env QCAAS_ENDPOINT)");
  app.add_option("--tenant", options.tenant, "tenant identifier (env QCAAS_TENANT)");
  app.add_option("--output", options.output, "output mode")
      ->check(CLI::IsMember({"human", "structured"}));
  std::uint64_t seed_flag = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "seed for reproducible runs");
  app.footer(
      "exit codes: 0 ok, 1 failure, 2 usage, 3 connection, 4 not found,\n"
      "            5 invalid n, 6 prime input, 7 attempts exhausted,\n"
      "            8 malformed circuit, 9 capacity exceeded");

  std::uint64_t n = 0;
  std::optional<std::uint64_t> attempts;
  std::optional<std::uint64_t> shots_per_attempt;
  std::string factor_backend;
  int timeout_seconds = 300;
  CLI::App* factor = app.add_subcommand("factor", "factor an integer through the service");
  factor->add_option("n", n, "integer to factor")->required();
  factor->add_option("--attempts", attempts, "maximum workflow attempts");
  factor->add_option("--shots", shots_per_attempt, "shots per attempt");
  factor->add_option("--backend", factor_backend, "backend id");
  factor->add_option("--timeout", timeout_seconds, "polling timeout in seconds (0 = no limit)");

  CLI::App* backends = app.add_subcommand("backends", "list available backends");

  std::string job_id;
  CLI::App* job = app.add_subcommand("job", "show a job document");
  job->add_option("id", job_id, "job id")->required();

  CLI::App* billing = app.add_subcommand("billing", "show the tenant's billing summary");

  std::string circuit_file;
  std::uint64_t simulate_shots = 1000;
  CLI::App* simulate = app.add_subcommand("simulate", "run a circuit file locally, no server");
  simulate->add_option("file", circuit_file, "circuit wire-format JSON file")->required();
  simulate->add_option("--shots", simulate_shots, "number of shots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (seed_opt->count() > 0) {
    options.seed = seed_flag;
  }

  try {
    if (factor->parsed()) {
      return cmd_factor(options, n, attempts, shots_per_attempt, factor_backend, timeout_seconds);
    }
    if (backends->parsed()) {
      return cmd_backends(options);
    }
    if (job->parsed()) {
      return cmd_job(options, job_id);
    }
    if (billing->parsed()) {
      return cmd_billing(options);
    }
    if (simulate->parsed()) {
      return cmd_simulate(options, circuit_file, simulate_shots);
    }
  } catch (const CliFailure& failure) {
    if (options.structured() && !failure.wire.is_null()) {
      print_json(failure.wire);
    }
    std::fprintf(stderr, "qcaas: %s\n", failure.message.c_str());
    return failure.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qcaas: %s\n", e.what());
    return kFailure;
  }
  return kUsage;
}
