#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "lmscreen/report.hpp"

namespace lmscreen::cli {

/// Parses a newline-delimited verdict log. A final line without its newline
/// is an interrupted append and is dropped with a warning; any other bad line
/// throws MalformedDocument. A missing file is an empty log.
std::vector<ReviewVerdict> read_verdict_log(const std::filesystem::path& path,
                                            std::vector<std::string>* warnings = nullptr);

/// Append-only verdict log. Each append is written and fsync'd before
/// returning; appends are serialized through one mutex.
class VerdictStore {
 public:
  explicit VerdictStore(std::filesystem::path path);
  ~VerdictStore();
  VerdictStore(const VerdictStore&) = delete;
  VerdictStore& operator=(const VerdictStore&) = delete;

  void append(const ReviewVerdict& verdict);
  std::vector<ReviewVerdict> verdicts() const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mutex_;
  std::vector<ReviewVerdict> verdicts_;
  std::vector<std::string> warnings_;
};

}  // namespace lmscreen::cli
