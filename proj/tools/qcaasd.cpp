#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qcaas/common/error.hpp"
#include "qcaas/service/config.hpp"
#include "qcaas/service/http.hpp"
#include "qcaas/service/job_service.hpp"

namespace {

std::atomic<int> g_signal{0};

void handle_signal(int signum) { g_signal.store(signum); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcaasd: quantum computing service daemon"};
  std::string config_path;
  int port = -1;
  std::string data_dir;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--port", port, "listen port, overrides config (0 picks a free port)")
      ->check(CLI::Range(0, 65535));
  app.add_option("--data-dir", data_dir, "event log directory, overrides config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    qcaas::service::ServiceConfig config = config_path.empty()
                                               ? qcaas::service::ServiceConfig::defaults()
                                               : qcaas::service::ServiceConfig::load(config_path);
    if (port >= 0) {
      config.port = static_cast<std::uint16_t>(port);
    }
    if (!data_dir.empty()) {
      config.data_dir = data_dir;
    }

    qcaas::service::JobService service(config);
    qcaas::service::HttpApi api(service);
    const int bound = api.start(config.port);
    std::printf("qcaasd listening on port %d, event log in %s\n", bound,
                service.config().data_dir.string().c_str());
    std::fflush(stdout);

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (g_signal.load() == 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }

    std::printf("shutting down\n");
    api.stop();
    // Running jobs finish; queued jobs stay in the log and resume next start.
    service.stop(false);
    return 0;
  } catch (const qcaas::Error& e) {
    std::fprintf(stderr, "qcaasd: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qcaasd: %s\n", e.what());
    return 1;
  }
}
