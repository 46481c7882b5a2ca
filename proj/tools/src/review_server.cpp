#include "review_server.hpp"

#include <pthread.h>
#include <sys/socket.h>

#include <algorithm>
#include <csignal>
#include <iostream>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "fallback_page.hpp"
#include "lmscreen/error.hpp"
#include "lmscreen/io.hpp"
#include "lmscreen/render.hpp"
#include "lmscreen/rng.hpp"
#include "lmscreen/variogram.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lmscreen::cli {

namespace {

constexpr const char* kJson = "application/json";

std::vector<std::string> flagged_ids(const ScreeningReport& r) {
  std::set<std::string> ids;
  for (const auto& f : r.outliers) ids.insert(f.landmark_id);
  for (const auto& f : r.findings) {
    if (f.kind == FindingKind::Isolated) {
      for (const auto& id : f.groups.front()) ids.insert(id);
    }
  }
  std::vector<std::string> ordered;
  for (const auto& lm : r.landmarks) {
    if (ids.count(lm.id)) ordered.push_back(lm.id);
  }
  return ordered;
}

template <class T>
void shuffle(std::vector<T>& items, CounterRng& rng) {
  for (std::size_t n = items.size(); n > 1; --n) {
    std::swap(items[n - 1], items[rng.below(n)]);
  }
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), kJson);
}

json case_payload(const ScreeningReport& report, bool blind) {
  json payload = json::parse(write_case_json(report));
  const DisplacementField field = field_of(report);
  const VariogramCloud cloud = compute_cloud(field);
  json pairs = json::array();
  for (const auto& p : cloud.points) {
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"h_mm", p.h}, {"eps_mm2", p.eps}});
  }
  payload["pairs"] = std::move(pairs);
  if (blind) {
    for (const char* key : {"outliers", "findings", "scores"}) payload.erase(key);
  }
  const std::vector<OutlierFlag> none;
  const std::span<const OutlierFlag> flags =
      blind ? std::span<const OutlierFlag>(none) : std::span<const OutlierFlag>(report.outliers);
  payload["svg"] = {
      {"variogram", render_variogram_svg(field, cloud, flags, binned_trend(cloud, report.config.n_bins))},
      {"xy", render_field_svg(field, flags, Plane::XY)},
      {"xz", render_field_svg(field, flags, Plane::XZ)},
      {"yz", render_field_svg(field, flags, Plane::YZ)}};
  return payload;
}

}  // namespace

std::vector<QueueItem> build_queue(const ReportDocument& doc, std::size_t mix, std::uint64_t seed) {
  std::vector<QueueItem> queue;
  for (const auto& r : doc.cases) {
    const auto flagged = flagged_ids(r);
    for (const auto& id : flagged) queue.push_back({r.case_id, id});
    std::vector<std::string> others;
    for (const auto& lm : r.landmarks) {
      if (std::find(flagged.begin(), flagged.end(), lm.id) == flagged.end()) others.push_back(lm.id);
    }
    CounterRng rng(seed ^ fnv1a(r.case_id.data(), r.case_id.size()));
    shuffle(others, rng);
    others.resize(std::min(mix, others.size()));
    for (auto& id : others) queue.push_back({r.case_id, std::move(id)});
  }
  CounterRng rng(seed);
  shuffle(queue, rng);
  return queue;
}

ReviewServer::ReviewServer(ReportDocument doc, const fs::path& verdicts, std::size_t mix,
                           std::uint64_t seed, std::optional<fs::path> ui_dir)
    : doc_(std::move(doc)),
      store_(verdicts),
      queue_(build_queue(doc_, mix, seed)),
      ui_dir_(std::move(ui_dir)),
      server_(std::make_unique<httplib::Server>()) {
  // Exclusive bind so a second server on the same port fails instead of sharing it.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  routes();
}

ReviewServer::~ReviewServer() { stop(); }

ReportDocument ReviewServer::merged_document() const {
  return merge_verdicts(doc_, store_.verdicts());
}

void ReviewServer::routes() {
  auto& s = *server_;

  s.Get("/api/report", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(write_report_json(merged_document()), kJson);
  });

  s.Get(R"(/api/case/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    const ScreeningReport* report = find_case(doc_, req.matches[1].str());
    if (!report) return reply_error(res, 404, "unknown case");
    const bool blind = req.has_param("blind") && req.get_param_value("blind") != "0";
    res.set_content(case_payload(*report, blind).dump(), kJson);
  });

  s.Get("/api/queue", [this](const httplib::Request&, httplib::Response& res) {
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& v : store_.verdicts()) done.emplace(v.case_id, v.landmark_id);
    json items = json::array();
    std::size_t reviewed = 0;
    for (const auto& item : queue_) {
      const bool r = done.count({item.case_id, item.landmark_id}) > 0;
      reviewed += r ? 1 : 0;
      items.push_back({{"case_id", item.case_id}, {"landmark_id", item.landmark_id}, {"reviewed", r}});
    }
    res.set_content(json{{"items", std::move(items)}, {"total", queue_.size()}, {"reviewed", reviewed}}
                        .dump(),
                    kJson);
  });

  s.Post("/api/verdict", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return reply_error(res, 400, "body is not valid JSON");
    }
    ReviewVerdict verdict;
    try {
      verdict = verdict_from_json(body.dump());
    } catch (const Error& e) {
      return reply_error(res, 422, e.what());
    }
    const ScreeningReport* report = find_case(doc_, verdict.case_id);
    if (!report) return reply_error(res, 422, "unknown case_id");
    const bool known = std::any_of(report->landmarks.begin(), report->landmarks.end(),
                                   [&](const Landmark& lm) { return lm.id == verdict.landmark_id; });
    if (!known) return reply_error(res, 422, "unknown landmark_id");
    try {
      store_.append(verdict);
    } catch (const std::exception& e) {
      return reply_error(res, 500, e.what());
    }
    res.status = 204;
  });

  if (ui_dir_) {
    s.set_mount_point("/", ui_dir_->string());
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kFallbackPage, "text/html; charset=utf-8");
    });
  }
}

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("PortInUse: no free port on " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("PortInUse: cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ReviewServer::listen() { server_->listen_after_bind(); }

void ReviewServer::stop() {
  if (server_) server_->stop();
}

void ReviewServer::wait_until_ready() const { server_->wait_until_ready(); }

int cmd_review(const ReviewOptions& options, std::ostream& out, std::ostream& err) {
  if (options.port < 1024 || options.port > 65535) {
    err << "error: port must be in [1024, 65535]\n";
    return kExitUsage;
  }
  ReportDocument doc;
  try {
    doc = read_report_json(io::read_file(options.report));
  } catch (const std::exception& e) {
    err << "error: MalformedReport: " << options.report.string() << ": " << e.what() << "\n";
    return kExitInputError;
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<ReviewServer> server;
  try {
    server = std::make_unique<ReviewServer>(doc, options.verdicts, options.mix, options.seed,
                                            options.ui_dir);
    for (const auto& w : server->store().warnings()) {
      err << "warning: " << options.verdicts.string() << ": " << w << "\n";
    }
    server->bind(options.host, options.port);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  out << "serving " << options.report.string() << " on http://" << options.host << ":"
      << options.port << "/ (" << server->queue().size() << " queue items; Ctrl-C to stop)\n"
      << std::flush;
  std::thread worker([&] { server->listen(); });
  int sig = 0;
  sigwait(&signals, &sig);
  server->stop();
  worker.join();

  const auto log = server->store().verdicts();
  if (log.empty()) {
    out << "no verdicts recorded\n";
    return kExitOk;
  }
  try {
    write_file_atomic(options.report, write_report_json(server->merged_document()));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  out << "merged " << latest_verdicts(log).size() << " verdict(s) into " << options.report.string()
      << "\n";
  return kExitOk;
}

}  // namespace lmscreen::cli
