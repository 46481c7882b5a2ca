#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lmscreen/model.hpp"
#include "lmscreen/report.hpp"
#include "lmscreen/synth.hpp"

namespace lmscreen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitFlagsFound = 3;

/// Entry point shared by main() and in-process tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One resolved screening input: a single file or a fixed/moving fcsv pair.
struct InputSpec {
  std::filesystem::path path;
  std::optional<std::filesystem::path> moving;
};

/// Expands files, directories (recursive *.csv and *.tag, sorted), simple
/// filename globs and "fixed.fcsv,moving.fcsv" pairs. Unresolvable entries
/// are reported to err and skipped.
std::vector<InputSpec> resolve_inputs(const std::vector<std::string>& inputs, std::ostream& err);

struct ScreenOptions {
  std::vector<std::string> inputs;
  std::optional<SourceFormat> format;
  std::filesystem::path out_dir = "lmscreen-out";
  ScreeningConfig config;
  std::optional<std::string> timestamp;
  std::optional<std::string> dataset;
  bool fail_on_flags = false;
};

int cmd_screen(const ScreenOptions& options, std::ostream& out, std::ostream& err);

struct SynthOptions {
  synth::SynthSpec spec;
  std::optional<std::size_t> inject_global;
  std::optional<Vec3> offset;
  std::optional<std::size_t> inject_local;
  ScreeningConfig config;
  std::optional<std::filesystem::path> output;
};

/// Blob layout with `count` centers spaced along x through the cube center.
synth::Blobs blob_layout(const synth::SynthSpec& spec, std::size_t count, double sigma);

int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

/// Verdict log written beside a report: "<report>.verdicts.ndjson".
std::filesystem::path default_verdict_path(const std::filesystem::path& report);

/// Keeps the last verdict per (case, landmark, reviewer), in first-seen order.
std::vector<ReviewVerdict> latest_verdicts(const std::vector<ReviewVerdict>& log);

/// Appends the log to the review field of doc, keeps the latest verdict per
/// (case, landmark, reviewer) and rebuilds the summary. An empty log returns
/// doc unchanged.
ReportDocument merge_verdicts(ReportDocument doc, const std::vector<ReviewVerdict>& log);

/// Writes bytes to path through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

int cmd_finalize(const std::filesystem::path& report, const std::filesystem::path& verdicts,
                 const std::filesystem::path& output, std::ostream& out, std::ostream& err);

struct ReviewOptions {
  std::filesystem::path report;
  std::filesystem::path verdicts;
  std::string host = "127.0.0.1";
  int port = 8787;
  std::size_t mix = 2;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> ui_dir;
};

/// Serves until SIGINT or SIGTERM, then merges verdicts into the report.
int cmd_review(const ReviewOptions& options, std::ostream& out, std::ostream& err);

}  // namespace lmscreen::cli
