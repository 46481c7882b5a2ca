#include <charconv>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lmscreen/error.hpp"

namespace lmscreen::cli {

namespace {

void add_threshold_options(CLI::App& app, ScreeningConfig& c) {
  app.add_option("--tau-global", c.tau_global, "Global outlier threshold (robust z-score)")
      ->capture_default_str();
  app.add_option("--tau-local", c.tau_local, "Local outlier threshold (ratio of medians)")
      ->capture_default_str();
  app.add_option("--local-h-quantile", c.local_h_quantile,
                 "Quantile of h defining the local neighbourhood")
      ->capture_default_str();
  app.add_option("--local-min-pairs", c.local_min_pairs,
                 "Minimum small-h pairs for a local score")
      ->capture_default_str();
  app.add_option("--cluster-link-factor", c.cluster_link_factor,
                 "Linkage distance as a multiple of the median nearest-neighbour distance")
      ->capture_default_str();
  app.add_option("--cluster-min-size", c.cluster_min_size, "Minimum members per cluster")
      ->capture_default_str();
  app.add_option("--isolated-factor", c.isolated_factor,
                 "Isolation threshold as a multiple of the median nearest-neighbour distance")
      ->capture_default_str();
  app.add_option("--n-bins", c.n_bins, "Bins of the variogram trend line")->capture_default_str();
}

std::optional<Vec3> parse_vec3(const std::string& text) {
  Vec3 v;
  std::size_t start = 0;
  for (int a = 0; a < 3; ++a) {
    const std::size_t end = a < 2 ? text.find(',', start) : text.size();
    if (end == std::string::npos) return std::nullopt;
    const char* first = text.data() + start;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, v[a]);
    if (ec != std::errc() || ptr != last || !std::isfinite(v[a])) return std::nullopt;
    start = end + 1;
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Landmark correspondence screening with variogram clouds", "lmscreen"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lmscreen 0.1.0");

  ScreenOptions screen;
  std::string screen_format;
  auto* s = app.add_subcommand("screen", "Screen landmark files and write report.json plus figures");
  s->add_option("inputs", screen.inputs,
                "Landmark files, directories, globs, or FIXED.fcsv,MOVING.fcsv pairs")
      ->required();
  s->add_option("--format", screen_format, "Force input format: csv or tag")
      ->check(CLI::IsMember({"csv", "tag", "mni_tag"}));
  s->add_option("-o,--out", screen.out_dir, "Output directory")->capture_default_str();
  std::string timestamp;
  s->add_option("--timestamp", timestamp, "Pin generated_at (for reproducible output)");
  std::string dataset;
  s->add_option("--dataset", dataset, "Dataset label (default: parent directory name)");
  s->add_flag("--fail-on-flags", screen.fail_on_flags, "Exit 3 when anything is flagged");
  add_threshold_options(*s, screen.config);

  SynthOptions synth_opts;
  std::string layout = "uniform";
  std::size_t blob_count = 2;
  double blob_sigma = 2.0;
  std::size_t inject_global = 0;
  std::size_t inject_local = 0;
  std::string offset;
  std::string synth_out;
  auto* y = app.add_subcommand("synth", "Generate a synthetic displacement field as landmark CSV");
  y->add_option("--seed", synth_opts.spec.seed, "Random seed")->capture_default_str();
  y->add_option("-k,--landmarks", synth_opts.spec.k, "Number of landmarks")->capture_default_str();
  y->add_option("--extent", synth_opts.spec.extent, "Cube edge length (mm)")->capture_default_str();
  y->add_option("--amp", synth_opts.spec.deform_amp, "Deformation amplitude (mm)")
      ->capture_default_str();
  y->add_option("--wavelength", synth_opts.spec.deform_wavelength, "Deformation wavelength (mm)")
      ->capture_default_str();
  y->add_option("--noise", synth_opts.spec.noise_sigma, "Displacement noise sigma (mm)")
      ->capture_default_str();
  y->add_option("--layout", layout, "Point layout")
      ->check(CLI::IsMember({"uniform", "grid", "blobs"}))
      ->capture_default_str();
  y->add_option("--blobs", blob_count, "Blob count for --layout blobs")->capture_default_str();
  y->add_option("--blob-sigma", blob_sigma, "Blob spread (mm)")->capture_default_str();
  auto* ig = y->add_option("--inject-global", inject_global, "Landmark index (0-based) to displace");
  y->add_option("--offset", offset, "Global injection offset X,Y,Z in mm (default 10x std along x)")
      ->needs(ig);
  auto* il = y->add_option("--inject-local", inject_local,
                           "Landmark index (0-based) to reverse against its neighbours");
  y->add_option("-o,--output", synth_out, "Output CSV path (default: stdout)");
  add_threshold_options(*y, synth_opts.config);

  ReviewOptions review;
  std::string review_verdicts;
  std::string ui_dir;
  auto* r = app.add_subcommand("review", "Serve the blinded review UI and verdict API");
  r->add_option("report", review.report, "report.json to review")->required()->check(CLI::ExistingFile);
  r->add_option("--host", review.host, "Listen address")->capture_default_str();
  r->add_option("--port", review.port, "Listen port")->capture_default_str();
  r->add_option("--verdicts", review_verdicts, "Verdict log (default: <report>.verdicts.ndjson)");
  r->add_option("--mix", review.mix, "Unflagged landmarks mixed in per case")->capture_default_str();
  r->add_option("--seed", review.seed, "Seed for the review mix and order")->capture_default_str();
  r->add_option("--ui-dir", ui_dir, "Directory of built UI assets served at /")
      ->check(CLI::ExistingDirectory);

  std::string fin_report;
  std::string fin_verdicts;
  std::string fin_out;
  auto* f = app.add_subcommand("finalize", "Merge the verdict log into the report");
  f->add_option("report", fin_report, "report.json")->required()->check(CLI::ExistingFile);
  f->add_option("--verdicts", fin_verdicts, "Verdict log (default: <report>.verdicts.ndjson)");
  f->add_option("-o,--out", fin_out, "Output path (default: overwrite the report)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (s->parsed()) {
    if (!screen_format.empty()) {
      screen.format = screen_format == "csv" ? SourceFormat::Csv : SourceFormat::MniTag;
    }
    if (!timestamp.empty()) screen.timestamp = timestamp;
    if (!dataset.empty()) screen.dataset = dataset;
    try {
      screen.config.validate();
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return cmd_screen(screen, out, err);
  }
  if (y->parsed()) {
    if (layout == "grid") {
      synth_opts.spec.layout = synth::Grid{};
    } else if (layout == "blobs") {
      synth_opts.spec.layout = blob_layout(synth_opts.spec, blob_count, blob_sigma);
    }
    if (ig->count() > 0) synth_opts.inject_global = inject_global;
    if (il->count() > 0) synth_opts.inject_local = inject_local;
    if (!offset.empty()) {
      synth_opts.offset = parse_vec3(offset);
      if (!synth_opts.offset) {
        err << "error: --offset expects X,Y,Z\n";
        return kExitUsage;
      }
    }
    if (!synth_out.empty()) synth_opts.output = synth_out;
    return cmd_synth(synth_opts, out, err);
  }
  if (r->parsed()) {
    review.verdicts =
        review_verdicts.empty() ? default_verdict_path(review.report) : std::filesystem::path(review_verdicts);
    if (!ui_dir.empty()) review.ui_dir = ui_dir;
    return cmd_review(review, out, err);
  }
  const std::filesystem::path report(fin_report);
  const std::filesystem::path verdicts =
      fin_verdicts.empty() ? default_verdict_path(report) : std::filesystem::path(fin_verdicts);
  const std::filesystem::path output = fin_out.empty() ? report : std::filesystem::path(fin_out);
  return cmd_finalize(report, verdicts, output, out, err);
}

}  // namespace lmscreen::cli
