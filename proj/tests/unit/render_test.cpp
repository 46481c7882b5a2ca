#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "lmscreen/error.hpp"
#include "lmscreen/render.hpp"
#include "lmscreen/synth.hpp"
#include "test_support.hpp"

using namespace lmscreen;
using testing_support::field;
using testing_support::lm;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

DisplacementField small(std::size_t k) {
  synth::SynthSpec spec;
  spec.k = k;
  spec.seed = 12;
  return synth::generate(spec);
}

std::set<std::string> titles(const std::string& svg) {
  std::set<std::string> out;
  static const std::regex re("<title>([^<]*)</title>");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    out.insert((*it)[1]);
  }
  return out;
}

}  // namespace

TEST(VariogramSvg, TenPointsOnePolyline) {
  const auto f = small(5);
  const auto cloud = compute_cloud(f);
  const std::string svg = render_variogram_svg(f, cloud, {}, binned_trend(cloud, 4));
  EXPECT_EQ(count(svg, "<circle class=\"pt"), 10u);
  EXPECT_EQ(count(svg, "<polyline class=\"trend\""), 1u);
  EXPECT_EQ(count(svg, "pt global"), 0u);
  EXPECT_NE(svg.find("h (mm)"), std::string::npos);
  EXPECT_NE(svg.find("\xCE\xB5 (mm\xC2\xB2)"), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(VariogramSvg, GlobalFlagColoursItsPairs) {
  const auto f = small(6);
  const auto cloud = compute_cloud(f);
  const std::vector<OutlierFlag> flags{{f[2].id, OutlierKind::Global, 9.0, {{0, 2}}}};
  const std::string svg = render_variogram_svg(f, cloud, flags, binned_trend(cloud, 3));
  EXPECT_EQ(count(svg, "class=\"pt global\""), 5u);
  EXPECT_EQ(count(svg, "class=\"pt local\""), 0u);
  EXPECT_EQ(count(svg, "class=\"pt\""), 10u);
}

TEST(VariogramSvg, GlobalWinsOnSharedPair) {
  const auto f = small(6);
  const auto cloud = compute_cloud(f);
  const std::vector<OutlierFlag> flags{{f[2].id, OutlierKind::Global, 9.0, {{0, 2}}},
                                       {f[4].id, OutlierKind::Local, 9.0, {{0, 4}}}};
  const std::string svg = render_variogram_svg(f, cloud, flags, binned_trend(cloud, 3));
  EXPECT_EQ(count(svg, "class=\"pt global\""), 5u);
  EXPECT_EQ(count(svg, "class=\"pt local\""), 4u);
}

TEST(VariogramSvg, DeterministicAndIdsExist) {
  const auto f = small(12);
  const auto cloud = compute_cloud(f);
  const auto trend = binned_trend(cloud, 10);
  const std::string a = render_variogram_svg(f, cloud, {}, trend);
  EXPECT_EQ(a, render_variogram_svg(f, cloud, {}, trend));
  for (const auto& t : titles(a)) {
    if (t.rfind("variogram cloud ", 0) == 0) continue;
    const auto dash = t.find('-');
    ASSERT_NE(dash, std::string::npos);
    EXPECT_LT(f.index_of(t.substr(0, dash)), f.size()) << t;
    EXPECT_LT(f.index_of(t.substr(dash + 1)), f.size()) << t;
  }
}

TEST(VariogramSvg, EmptyCloud) {
  const auto f = small(3);
  VariogramCloud empty;
  BinnedTrend trend;
  try {
    render_variogram_svg(f, empty, {}, trend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
  }
}

TEST(FieldSvg, OneArrowPerLandmark) {
  const auto f = small(9);
  for (auto plane : {Plane::XY, Plane::XZ, Plane::YZ}) {
    const std::string svg = render_field_svg(f, {}, plane);
    EXPECT_EQ(count(svg, "<line class=\"vec"), 9u);
    EXPECT_NE(svg.find("marker id=\"arrow\""), std::string::npos);
  }
  for (const auto& t : titles(render_field_svg(f, {}, Plane::XY))) {
    if (t.rfind("displacement field ", 0) == 0) continue;
    EXPECT_LT(f.index_of(t), f.size()) << t;
  }
}

TEST(FieldSvg, FlaggedArrowCarriesClass) {
  const auto f = small(7);
  const std::vector<OutlierFlag> flags{{f[1].id, OutlierKind::Local, 6.0, {{0, 1}}}};
  const std::string svg = render_field_svg(f, flags, Plane::XZ);
  EXPECT_EQ(count(svg, "class=\"vec local\""), 1u);
  EXPECT_EQ(count(svg, "class=\"vec\""), 6u);
}

TEST(FieldSvg, PureZDisplacementIsADotOnXY) {
  const auto f = field({lm("a", {0, 0, 0}, {0, 0, 5}), lm("b", {10, 0, 0}, {11, 0, 0})});
  const std::string xy = render_field_svg(f, {}, Plane::XY);
  EXPECT_EQ(count(xy, "<circle class=\"vec-dot\""), 1u);
  EXPECT_EQ(count(xy, "<line class=\"vec"), 1u);
  EXPECT_EQ(count(render_field_svg(f, {}, Plane::XZ), "vec-dot\""), 0u);
  EXPECT_EQ(to_string(Plane::YZ), "yz");
}
