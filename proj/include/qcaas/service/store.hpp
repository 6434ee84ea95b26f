#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <vector>

#include <json.hpp>

namespace qcaas::service {

/// Append-only, line-delimited JSON event log under data_dir. Every state
/// change is appended and flushed before it is acknowledged; startup replay
/// rebuilds jobs and ledger from the log.
class EventLog {
 public:
  explicit EventLog(const std::filesystem::path& data_dir);

  /// Reads back all events currently in the log. A torn final line (crash
  /// mid-write) is dropped; corruption anywhere else is an error.
  std::vector<nlohmann::json> replay();

  /// Appends one event as a single line and flushes it.
  void append(const nlohmann::json& event);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

}  // namespace qcaas::service
