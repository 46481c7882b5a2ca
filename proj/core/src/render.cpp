#include "lmscreen/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "lmscreen/error.hpp"
#include "text.hpp"

namespace lmscreen {

std::string_view to_string(Plane plane) {
  switch (plane) {
    case Plane::XY: return "xy";
    case Plane::XZ: return "xz";
    case Plane::YZ: return "yz";
  }
  return "xy";
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;
constexpr int kTicks = 5;

constexpr const char* kStyle =
    "<style>"
    ".pt{fill:#9a9a9a;fill-opacity:0.7}"
    ".pt.global{fill:#1f77b4;fill-opacity:1}"
    ".pt.local{fill:#2ca02c;fill-opacity:1}"
    ".trend{fill:none;stroke:#d62728;stroke-width:1.5}"
    ".vec{stroke:#9a9a9a;stroke-width:1.2;marker-end:url(#arrow)}"
    ".vec.global{stroke:#1f77b4}"
    ".vec.local{stroke:#2ca02c}"
    ".vec-dot{fill:#9a9a9a}"
    ".vec-dot.global{fill:#1f77b4}"
    ".vec-dot.local{fill:#2ca02c}"
    ".axis{stroke:#000;stroke-width:1}"
    "text{font-family:sans-serif;font-size:11px}"
    "</style>";

std::string fmt(double v) { return text::format_fixed(v, 2); }

std::string tick_label(double v) { return text::format_sig9(text::round_sig9(v)); }

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const {
    const double span = hi - lo;
    if (span <= 0.0) return (px_lo + px_hi) / 2.0;
    return px_lo + (v - lo) / span * (px_hi - px_lo);
  }
};

std::vector<std::string> flag_classes(const DisplacementField& field,
                                      std::span<const OutlierFlag> flags) {
  std::vector<std::string> cls(field.size());
  for (const auto& f : flags) {
    const std::size_t k = field.index_of(f.landmark_id);
    if (k >= field.size()) continue;
    if (f.kind == OutlierKind::Global) {
      cls[k] = "global";
    } else if (cls[k].empty()) {
      cls[k] = "local";
    }
  }
  return cls;
}

void open_svg(std::ostringstream& os, const std::string& title, bool arrow) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<title>" << text::xml_escape(title) << "</title>\n";
  os << "<defs>" << kStyle;
  if (arrow) {
    os << "<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
          "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" "
          "fill=\"context-stroke\"/></marker>";
  }
  os << "</defs>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

void draw_axes(std::ostringstream& os, const Axis& x, const Axis& y, std::string_view xlabel,
               std::string_view ylabel) {
  os << "<line class=\"axis\" x1=\"" << fmt(x.px_lo) << "\" y1=\"" << fmt(y.px_lo) << "\" x2=\""
     << fmt(x.px_hi) << "\" y2=\"" << fmt(y.px_lo) << "\"/>\n";
  os << "<line class=\"axis\" x1=\"" << fmt(x.px_lo) << "\" y1=\"" << fmt(y.px_lo) << "\" x2=\""
     << fmt(x.px_lo) << "\" y2=\"" << fmt(y.px_hi) << "\"/>\n";
  for (int t = 0; t < kTicks; ++t) {
    const double fx = x.lo + (x.hi - x.lo) * t / (kTicks - 1);
    const double px = x.map(fx);
    os << "<line class=\"axis\" x1=\"" << fmt(px) << "\" y1=\"" << fmt(y.px_lo) << "\" x2=\""
       << fmt(px) << "\" y2=\"" << fmt(y.px_lo + 5) << "\"/>"
       << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(y.px_lo + 18)
       << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    const double fy = y.lo + (y.hi - y.lo) * t / (kTicks - 1);
    const double py = y.map(fy);
    os << "<line class=\"axis\" x1=\"" << fmt(x.px_lo - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
       << fmt(x.px_lo) << "\" y2=\"" << fmt(py) << "\"/>"
       << "<text x=\"" << fmt(x.px_lo - 8) << "\" y=\"" << fmt(py + 4)
       << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  os << "<text x=\"" << fmt((x.px_lo + x.px_hi) / 2) << "\" y=\"" << fmt(kHeight - 10)
     << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"14\" y=\"" << fmt((y.px_lo + y.px_hi) / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt((y.px_lo + y.px_hi) / 2)
     << ")\">" << ylabel << "</text>\n";
}

std::string class_attr(std::string_view base, const std::string& extra) {
  std::string out(base);
  if (!extra.empty()) {
    out += ' ';
    out += extra;
  }
  return out;
}

}  // namespace

std::string render_variogram_svg(const DisplacementField& field, const VariogramCloud& cloud,
                                 std::span<const OutlierFlag> flags, const BinnedTrend& trend) {
  if (cloud.points.empty()) throw Error(ErrorCode::EmptyCloud, "variogram cloud has no points");
  const auto cls = flag_classes(field, flags);

  double h_max = 0.0;
  double e_max = 0.0;
  for (const auto& p : cloud.points) {
    h_max = std::max(h_max, p.h);
    e_max = std::max(e_max, p.eps);
  }
  if (h_max <= 0.0) h_max = 1.0;
  if (e_max <= 0.0) e_max = 1.0;
  const Axis x{0.0, h_max, kLeft, kWidth - kRight};
  const Axis y{0.0, e_max, kHeight - kBottom, kTop};

  std::ostringstream os;
  open_svg(os, "variogram cloud " + field.case_id(), false);
  draw_axes(os, x, y, "h (mm)", "\xCE\xB5 (mm\xC2\xB2)");

  // Normal points first so flagged ones stay on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : cloud.points) {
      std::string extra;
      if (cls[p.i] == "global" || cls[p.j] == "global") {
        extra = "global";
      } else if (!cls[p.i].empty() || !cls[p.j].empty()) {
        extra = "local";
      }
      if ((pass == 0) != extra.empty()) continue;
      os << "<circle class=\"" << class_attr("pt", extra) << "\" cx=\"" << fmt(x.map(p.h))
         << "\" cy=\"" << fmt(y.map(p.eps)) << "\" r=\"2.5\"><title>"
         << text::xml_escape(field[p.i].id) << '-' << text::xml_escape(field[p.j].id)
         << "</title></circle>\n";
    }
  }

  os << "<polyline class=\"trend\" points=\"";
  bool first = true;
  for (const auto& bin : trend.bins) {
    if (!bin.eps_median) continue;
    if (!first) os << ' ';
    first = false;
    os << fmt(x.map(bin.h_center)) << ',' << fmt(y.map(*bin.eps_median));
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string render_field_svg(const DisplacementField& field, std::span<const OutlierFlag> flags,
                             Plane plane) {
  const auto cls = flag_classes(field, flags);
  const int a = plane == Plane::YZ ? 1 : 0;
  const int b = plane == Plane::XY ? 1 : 2;
  const char axis_names[3] = {'x', 'y', 'z'};

  double lo_a = 0.0, hi_a = 0.0, lo_b = 0.0, hi_b = 0.0;
  bool any = false;
  for (const auto& lm : field.landmarks()) {
    for (const Vec3* p : {&lm.fixed, &lm.moving}) {
      if (!any) {
        lo_a = hi_a = (*p)[a];
        lo_b = hi_b = (*p)[b];
        any = true;
      }
      lo_a = std::min(lo_a, (*p)[a]);
      hi_a = std::max(hi_a, (*p)[a]);
      lo_b = std::min(lo_b, (*p)[b]);
      hi_b = std::max(hi_b, (*p)[b]);
    }
  }
  // Equal aspect: one scale for both axes, centered in the plot box.
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  double span = std::max({hi_a - lo_a, (hi_b - lo_b) * plot_w / plot_h, 1e-9});
  span *= 1.05;
  const double mid_a = (lo_a + hi_a) / 2.0;
  const double mid_b = (lo_b + hi_b) / 2.0;
  const double span_b = span * plot_h / plot_w;
  const Axis x{mid_a - span / 2, mid_a + span / 2, kLeft, kWidth - kRight};
  const Axis y{mid_b - span_b / 2, mid_b + span_b / 2, kHeight - kBottom, kTop};

  std::ostringstream os;
  open_svg(os, "displacement field " + field.case_id() + " (" + std::string(to_string(plane)) + ")",
           true);
  draw_axes(os, x, y, std::string(1, axis_names[a]) + " (mm)",
            std::string(1, axis_names[b]) + " (mm)");

  for (std::size_t k = 0; k < field.size(); ++k) {
    const Landmark& lm = field[k];
    const double x1 = x.map(lm.fixed[a]);
    const double y1 = y.map(lm.fixed[b]);
    const double da = lm.moving[a] - lm.fixed[a];
    const double db = lm.moving[b] - lm.fixed[b];
    const std::string title = "<title>" + text::xml_escape(lm.id) + "</title>";
    if (std::hypot(da, db) < 1e-9) {
      os << "<circle class=\"" << class_attr("vec-dot", cls[k]) << "\" cx=\"" << fmt(x1)
         << "\" cy=\"" << fmt(y1) << "\" r=\"2\">" << title << "</circle>\n";
    } else {
      os << "<line class=\"" << class_attr("vec", cls[k]) << "\" x1=\"" << fmt(x1) << "\" y1=\""
         << fmt(y1) << "\" x2=\"" << fmt(x.map(lm.moving[a])) << "\" y2=\""
         << fmt(y.map(lm.moving[b])) << "\">" << title << "</line>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lmscreen
