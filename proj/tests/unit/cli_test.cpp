#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "lmscreen/io.hpp"
#include "lmscreen/report.hpp"
#include "test_support.hpp"

using namespace lmscreen;
namespace fs = std::filesystem;
using testing_support::fixture;
using testing_support::TempDir;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

ReportDocument load_report(const fs::path& path) { return read_report_json(io::read_file(path)); }

}  // namespace

TEST(CliScreen, WritesReportAndArtifacts) {
  TempDir tmp;
  const auto r = run_cli({"screen", fixture("screen/p01.csv").string(), "-o", tmp.path().string(),
                          "--timestamp", "2026-01-01T00:00:00Z"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  ASSERT_TRUE(fs::exists(tmp / "report.json"));
  for (const char* name : {"cloud.csv", "variogram.svg", "field_xy.svg"}) {
    EXPECT_TRUE(fs::exists(tmp.path() / "p01" / name)) << name;
  }
  const auto doc = load_report(tmp / "report.json");
  ASSERT_EQ(doc.cases.size(), 1u);
  EXPECT_EQ(doc.cases[0].case_id, "p01");
  EXPECT_EQ(doc.cases[0].dataset, "screen");
  EXPECT_EQ(doc.generated_at, "2026-01-01T00:00:00Z");
  EXPECT_NE(r.out.find("screened 1 case(s)"), std::string::npos);
}

TEST(CliScreen, DirectoryInputFindsKnownFlags) {
  TempDir tmp;
  const auto r = run_cli({"screen", fixture("screen").string(), "-o", tmp.path().string(),
                          "--timestamp", "x"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto doc = load_report(tmp / "report.json");
  EXPECT_EQ(doc.cases.size(), 4u);
  ASSERT_EQ(doc.summary.datasets.size(), 1u);
  const auto& row = doc.summary.datasets[0];
  EXPECT_NE(std::find(row.global.begin(), row.global.end(), "p02(5)"), row.global.end());
  const auto* p04 = find_case(doc, "p04");
  ASSERT_NE(p04, nullptr);
  EXPECT_EQ(p04->source_format, SourceFormat::MniTag);
  EXPECT_EQ(p04->outliers_skipped, "");
}

TEST(CliScreen, MalformedFileAmongValidOnes) {
  TempDir tmp;
  const auto r = run_cli({"screen", fixture("screen/p01.csv").string(),
                          fixture("malformed/bad_float.csv").string(),
                          fixture("screen/p02.csv").string(), "-o", tmp.path().string()});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("bad_float.csv"), std::string::npos);
  EXPECT_NE(r.err.find("at 5"), std::string::npos) << r.err;
  EXPECT_EQ(load_report(tmp / "report.json").cases.size(), 2u);
}

TEST(CliScreen, ThresholdOverrideEchoed) {
  TempDir tmp;
  const auto r = run_cli({"screen", fixture("screen/p01.csv").string(), "-o", tmp.path().string(),
                          "--tau-global", "2.0"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_DOUBLE_EQ(load_report(tmp / "report.json").cases[0].config.tau_global, 2.0);
}

TEST(CliScreen, InvalidConfigIsUsageError) {
  TempDir tmp;
  EXPECT_EQ(run_cli({"screen", fixture("screen/p01.csv").string(), "-o", tmp.path().string(),
                     "--local-h-quantile", "1.5"})
                .code,
            cli::kExitUsage);
}

TEST(CliScreen, NoInputsResolved) {
  TempDir tmp;
  const auto r = run_cli({"screen", (tmp / "missing.csv").string(), "-o", (tmp / "o").string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("no such file"), std::string::npos);
}

TEST(CliScreen, ByteIdenticalAcrossRuns) {
  TempDir a;
  TempDir b;
  for (const auto* dir : {&a, &b}) {
    ASSERT_EQ(run_cli({"screen", fixture("screen").string(), "-o", dir->path().string(),
                       "--timestamp", "2026-01-01T00:00:00Z"})
                  .code,
              cli::kExitOk);
  }
  for (const char* rel : {"report.json", "p02/cloud.csv", "p02/variogram.svg", "p03/field_xy.svg"}) {
    EXPECT_EQ(io::read_file(a / rel), io::read_file(b / rel)) << rel;
  }
}

TEST(CliScreen, FailOnFlags) {
  TempDir tmp;
  EXPECT_EQ(run_cli({"screen", fixture("screen/p02.csv").string(), "-o", tmp.path().string(),
                     "--fail-on-flags"})
                .code,
            cli::kExitFlagsFound);
  TempDir clean;
  EXPECT_EQ(run_cli({"screen", fixture("screen/p01.csv").string(), "-o", clean.path().string(),
                     "--fail-on-flags"})
                .code,
            cli::kExitOk);
}

TEST(CliScreen, FcsvPairInput) {
  TempDir tmp;
  const std::string pair =
      fixture("ras_fixed.fcsv").string() + "," + fixture("ras_moving.fcsv").string();
  const auto r = run_cli({"screen", pair, "-o", tmp.path().string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto doc = load_report(tmp / "report.json");
  EXPECT_EQ(doc.cases[0].source_format, SourceFormat::SlicerFcsvPair);
  EXPECT_EQ(doc.cases[0].outliers_skipped, kSkippedTooFew);
}

TEST(CliSynth, DeterministicOutput) {
  const auto a = run_cli({"synth", "--seed", "5", "-k", "25"});
  const auto b = run_cli({"synth", "--seed", "5", "-k", "25"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run_cli({"synth", "--seed", "6", "-k", "25"}).out);
  EXPECT_EQ(io::parse_csv(a.out, "s").field.size(), 25u);
}

TEST(CliSynth, InjectedGlobalScreensAsGlobal) {
  TempDir tmp;
  const fs::path csv = tmp / "inj.csv";
  ASSERT_EQ(run_cli({"synth", "--seed", "9", "--inject-global", "3", "-o", csv.string()}).code,
            cli::kExitOk);
  const auto r = run_cli({"screen", csv.string(), "-o", (tmp / "out").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto doc = load_report(tmp.path() / "out" / "report.json");
  std::vector<std::string> global;
  for (const auto& f : doc.cases[0].outliers) {
    if (f.kind == OutlierKind::Global) global.push_back(f.landmark_id);
  }
  EXPECT_EQ(global, std::vector<std::string>{"4"});
}

TEST(CliSynth, BadArguments) {
  EXPECT_NE(run_cli({"synth", "--inject-global", "99"}).code, cli::kExitOk);
  EXPECT_NE(run_cli({"synth", "-k", "1"}).code, cli::kExitOk);
  EXPECT_NE(run_cli({"synth", "--offset", "1,2,3"}).code, cli::kExitOk);
  EXPECT_NE(run_cli({"synth", "--layout", "spiral"}).code, cli::kExitOk);
}

TEST(CliSynth, BlobLayout) {
  const auto r = run_cli({"synth", "--layout", "blobs", "--blobs", "3", "-k", "30"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto f = io::parse_csv(r.out, "b").field;
  const auto finding = detect_clusters(f, {});
  ASSERT_TRUE(finding.has_value());
  EXPECT_EQ(finding->groups.size(), 3u);
}

TEST(CliGeneral, HelpAndUnknownCommand) {
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"screen"}).code, cli::kExitUsage);
}

TEST(CliFinalize, MergesLatestVerdicts) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"screen", fixture("screen/p02.csv").string(), "-o", tmp.path().string(),
                     "--timestamp", "t"})
                .code,
            cli::kExitOk);
  const fs::path report = tmp / "report.json";
  {
    std::ofstream log(cli::default_verdict_path(report));
    log << verdict_to_json_line({"p02", "5", ReviewCategory::Certain, 4, "r"})
        << verdict_to_json_line({"p02", "5", ReviewCategory::Certain, 1, "r"})
        << verdict_to_json_line({"p02", "6", ReviewCategory::Certain, 2, "r"})
        << "{\"case_id\":\"p02\"";
  }
  const fs::path merged = tmp / "final.json";
  const auto r = run_cli({"finalize", report.string(), "-o", merged.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto doc = load_report(merged);
  ASSERT_TRUE(doc.review.has_value());
  EXPECT_EQ(doc.review->size(), 2u);
  EXPECT_DOUBLE_EQ(doc.summary.mean_score.at("certain"), 1.5);
  EXPECT_EQ(doc.cases, load_report(report).cases);
}

TEST(CliFinalize, MalformedLogIsInputError) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"screen", fixture("screen/p01.csv").string(), "-o", tmp.path().string()}).code,
            cli::kExitOk);
  const fs::path report = tmp / "report.json";
  {
    std::ofstream log(cli::default_verdict_path(report));
    log << "not json\n";
  }
  EXPECT_EQ(run_cli({"finalize", report.string()}).code, cli::kExitInputError);
}

TEST(CliVerdicts, LatestPerReviewer) {
  const std::vector<ReviewVerdict> log{{"c", "1", ReviewCategory::Normal, 4, "a"},
                                       {"c", "1", ReviewCategory::Normal, 3, "b"},
                                       {"c", "1", ReviewCategory::Unsure, 2, "a"}};
  const auto latest = cli::latest_verdicts(log);
  ASSERT_EQ(latest.size(), 2u);
  EXPECT_EQ(latest[0].score, 2);
  EXPECT_EQ(latest[1].reviewer, "b");
}
