#include "verdict_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lmscreen/error.hpp"
#include "lmscreen/io.hpp"

namespace fs = std::filesystem;

namespace lmscreen::cli {

namespace {

std::runtime_error os_error(const std::string& what, const fs::path& path) {
  return std::runtime_error(what + " " + path.string() + ": " + std::strerror(errno));
}

struct LogScan {
  std::vector<ReviewVerdict> verdicts;
  std::size_t complete_bytes = 0;
};

LogScan scan_log(const std::string& bytes, std::vector<std::string>* warnings) {
  LogScan scan;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < bytes.size()) {
    ++line_no;
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) {
      if (warnings) {
        warnings->push_back("dropped incomplete verdict at line " + std::to_string(line_no));
      }
      break;
    }
    const std::string_view line(bytes.data() + pos, nl - pos);
    pos = nl + 1;
    scan.complete_bytes = pos;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      scan.verdicts.push_back(verdict_from_json(line));
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedDocument, "invalid verdict record", line_no);
    }
  }
  return scan;
}

}  // namespace

std::vector<ReviewVerdict> read_verdict_log(const fs::path& path, std::vector<std::string>* warnings) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  return scan_log(io::read_file(path), warnings).verdicts;
}

VerdictStore::VerdictStore(fs::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (fs::exists(path_, ec)) {
    const std::string bytes = io::read_file(path_);
    LogScan scan = scan_log(bytes, &warnings_);
    verdicts_ = std::move(scan.verdicts);
    if (scan.complete_bytes < bytes.size()) {
      fs::resize_file(path_, scan.complete_bytes);
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw os_error("cannot open verdict log", path_);
}

VerdictStore::~VerdictStore() {
  if (fd_ >= 0) ::close(fd_);
}

void VerdictStore::append(const ReviewVerdict& verdict) {
  const std::string line = verdict_to_json_line(verdict);
  std::lock_guard lock(mutex_);
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw os_error("cannot append to", path_);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw os_error("cannot sync", path_);
  verdicts_.push_back(verdict);
}

std::vector<ReviewVerdict> VerdictStore::verdicts() const {
  std::lock_guard lock(mutex_);
  return verdicts_;
}

}  // namespace lmscreen::cli
