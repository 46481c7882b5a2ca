#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmscreen/report.hpp"
#include "verdict_store.hpp"

namespace httplib {
class Server;
}

namespace lmscreen::cli {

struct QueueItem {
  std::string case_id;
  std::string landmark_id;
};

/// Blinded review queue: every flagged landmark (outlier or isolated) plus up
/// to `mix` unflagged landmarks per case drawn with a seeded generator, then
/// shuffled as a whole.
std::vector<QueueItem> build_queue(const ReportDocument& doc, std::size_t mix, std::uint64_t seed);

/// HTTP API over one report document and its verdict log.
class ReviewServer {
 public:
  ReviewServer(ReportDocument doc, const std::filesystem::path& verdicts, std::size_t mix,
               std::uint64_t seed, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds host:port (port 0 picks a free port) and returns the bound port.
  /// Throws std::runtime_error("PortInUse ...") when the port is taken.
  int bind(const std::string& host, int port);
  /// Serves on the bound socket until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

  /// Report with the current verdict log merged into its review field.
  ReportDocument merged_document() const;
  const std::vector<QueueItem>& queue() const { return queue_; }
  const VerdictStore& store() const { return store_; }

 private:
  void routes();

  ReportDocument doc_;
  VerdictStore store_;
  std::vector<QueueItem> queue_;
  std::optional<std::filesystem::path> ui_dir_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace lmscreen::cli
