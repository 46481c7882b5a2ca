#include <gtest/gtest.h>

#include <limits>

#include "lmscreen/error.hpp"
#include "lmscreen/model.hpp"
#include "test_support.hpp"

using namespace lmscreen;
using testing_support::field;
using testing_support::lm;

namespace {

std::vector<Landmark> five() {
  return {lm("a", {0, 0, 0}, {1, 0, 0}), lm("b", {10, 0, 0}, {10, 1, 0}),
          lm("c", {0, 10, 0}, {0, 10, 1}), lm("d", {0, 0, 10}, {1, 1, 10}),
          lm("e", {5, 5, 5}, {5, 5, 5})};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Displacement, ZeroForIdenticalPoints) {
  EXPECT_EQ(displacement(lm("x", {0, 0, 0}, {0, 0, 0})), Vec3(0, 0, 0));
}

TEST(Displacement, MovingMinusFixed) {
  const Vec3 fixed(1, 2, 3);
  EXPECT_EQ(displacement(lm("x", fixed, fixed + Vec3(0.5, -1, 2))), Vec3(0.5, -1, 2));
}

TEST(Displacement, HandEvaluatedMagnitude) {
  const Vec3 d = displacement(lm("x", {10, 0, 0}, {7, 4, 0}));
  EXPECT_EQ(d, Vec3(-3, 4, 0));
  EXPECT_DOUBLE_EQ(d.norm(), 5.0);
}

TEST(BuildField, KeepsOrderAndValues) {
  const auto input = five();
  const auto f = field(input, "case");
  ASSERT_EQ(f.size(), 5u);
  EXPECT_EQ(f.case_id(), "case");
  for (std::size_t n = 0; n < input.size(); ++n) {
    EXPECT_EQ(f[n], input[n]);
    EXPECT_EQ((f.displacement(n) + f[n].fixed), f[n].moving);
  }
}

TEST(BuildField, DuplicateFixedPosition) {
  auto input = five();
  input[3].fixed = input[1].fixed + Vec3(1e-7, 0, 0);
  EXPECT_EQ(code_of([&] { field(input); }), ErrorCode::DuplicateFixedPosition);
}

TEST(BuildField, TooFewLandmarks) {
  EXPECT_EQ(code_of([] { field({lm("a", {0, 0, 0}, {1, 0, 0})}); }), ErrorCode::TooFewLandmarks);
  EXPECT_EQ(code_of([] { field({}); }), ErrorCode::TooFewLandmarks);
}

TEST(BuildField, NonFiniteCoordinate) {
  auto input = five();
  input[2].moving.z() = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { field(input); }), ErrorCode::NonFiniteCoordinate);
  input = five();
  input[0].fixed.x() = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { field(input); }), ErrorCode::NonFiniteCoordinate);
}

TEST(BuildField, DuplicateAndEmptyIds) {
  auto input = five();
  input[4].id = "a";
  EXPECT_EQ(code_of([&] { field(input); }), ErrorCode::DuplicateId);
  input = five();
  input[1].id = "";
  EXPECT_EQ(code_of([&] { field(input); }), ErrorCode::EmptyId);
}

TEST(BuildField, IndexOfAndWithMoving) {
  const auto f = field(five());
  EXPECT_EQ(f.index_of("c"), 2u);
  EXPECT_EQ(f.index_of("zz"), f.size());
  const auto g = f.with_moving(2, Vec3(9, 9, 9));
  EXPECT_EQ(g[2].moving, Vec3(9, 9, 9));
  EXPECT_EQ(f[2].moving, Vec3(0, 10, 1));
  EXPECT_EQ(code_of([&] { f.with_moving(5, Vec3::Zero()); }), ErrorCode::IndexOutOfRange);
}

TEST(ScreeningConfigTest, DefaultsValidate) { EXPECT_NO_THROW(ScreeningConfig{}.validate()); }

TEST(ScreeningConfigTest, RejectsInvalidValues) {
  const auto bad = [](auto mutate) {
    ScreeningConfig c;
    mutate(c);
    return code_of([&] { c.validate(); });
  };
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.tau_global = 0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.tau_local = -1; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.local_h_quantile = 1.0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.local_h_quantile = 0.0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.local_min_pairs = 0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.cluster_min_size = 1; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.isolated_factor = 0; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad([](ScreeningConfig& c) { c.n_bins = 0; }), ErrorCode::InvalidConfig);
}

TEST(SourceFormatTest, StringRoundTrip) {
  for (auto f : {SourceFormat::Csv, SourceFormat::MniTag, SourceFormat::SlicerFcsvPair,
                 SourceFormat::Synthetic}) {
    EXPECT_EQ(source_format_from_string(to_string(f)), f);
  }
  EXPECT_FALSE(source_format_from_string("xml").has_value());
}

TEST(ErrorTest, CarriesCodeAndLocation) {
  const Error e(ErrorCode::BadFloat, "bad", 7);
  EXPECT_EQ(e.code(), ErrorCode::BadFloat);
  EXPECT_EQ(e.location(), 7u);
  EXPECT_STREQ(e.what(), "BadFloat at 7: bad");
}
