#include "qcaas/service/store.hpp"

#include <string>

#include "qcaas/common/error.hpp"

namespace qcaas::service {

namespace {

// A crash mid-append leaves a partial record with no trailing newline.
// Appending after it would glue the next record onto the torn bytes, so
// recovery drops the incomplete tail, back to the last complete line.
void truncate_torn_tail(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) {
    return;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return;
  }
  in.seekg(-1, std::ios::end);
  char last = '\0';
  in.get(last);
  if (last == '\n') {
    return;
  }
  std::uintmax_t keep = 0;
  std::string line;
  in.seekg(0);
  while (std::getline(in, line)) {
    if (in.eof()) {
      break;  // final line had no newline: everything before it survives
    }
    keep += line.size() + 1;
  }
  in.close();
  std::filesystem::resize_file(path, keep, ec);
  if (ec) {
    throw Error(ErrorCode::StorageFailure,
                "cannot drop torn tail of event log " + path.string() + ": " + ec.message());
  }
}

}  // namespace

EventLog::EventLog(const std::filesystem::path& data_dir) : path_(data_dir / "jobs.log") {
  std::error_code ec;
  std::filesystem::create_directories(data_dir, ec);
  if (ec) {
    throw Error(ErrorCode::StorageFailure,
                "cannot create data directory " + data_dir.string() + ": " + ec.message());
  }
  if (std::filesystem::exists(path_, ec)) {
    truncate_torn_tail(path_);
  }
  out_.open(path_, std::ios::app);
  if (!out_) {
    throw Error(ErrorCode::StorageFailure, "cannot open event log " + path_.string());
  }
}

std::vector<nlohmann::json> EventLog::replay() {
  std::vector<nlohmann::json> events;
  std::ifstream in(path_);
  if (!in) {
    return events;
  }
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      lines.push_back(line);
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json event = nlohmann::json::parse(lines[i], nullptr, false);
    if (event.is_discarded()) {
      if (i + 1 == lines.size()) {
        // Torn tail from an interrupted write; everything before it is intact.
        break;
      }
      throw Error(ErrorCode::StorageFailure,
                  "corrupt event log " + path_.string() + " at line " + std::to_string(i + 1));
    }
    events.push_back(std::move(event));
  }
  return events;
}

void EventLog::append(const nlohmann::json& event) {
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << event.dump() << '\n';
  out_.flush();
  if (!out_) {
    throw Error(ErrorCode::StorageFailure, "write to event log " + path_.string() + " failed");
  }
}

}  // namespace qcaas::service
