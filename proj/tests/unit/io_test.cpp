#include <gtest/gtest.h>

#include <random>

#include "lmscreen/error.hpp"
#include "lmscreen/io.hpp"
#include "lmscreen/synth.hpp"
#include "test_support.hpp"

using namespace lmscreen;
using testing_support::fixture;

namespace {

struct Failure {
  ErrorCode code;
  std::optional<std::size_t> location;
};

Failure failure_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.code(), e.location()};
  }
  ADD_FAILURE() << "expected an Error";
  return {ErrorCode::InvalidArgument, std::nullopt};
}

constexpr const char* kHeader = "id,fx,fy,fz,mx,my,mz\n";

}  // namespace

TEST(Csv, SingleRowDecodes) {
  const auto lms = io::read_csv_landmarks(std::string(kHeader) + "L1,0,0,0,1,0,0\n");
  ASSERT_EQ(lms.size(), 1u);
  EXPECT_EQ(lms[0].id, "L1");
  EXPECT_EQ(displacement(lms[0]), Vec3(1, 0, 0));
  // A one-landmark case is not a valid field.
  EXPECT_EQ(failure_of([] { io::parse_csv(std::string(kHeader) + "L1,0,0,0,1,0,0\n", "c"); }).code,
            ErrorCode::TooFewLandmarks);
}

TEST(Csv, ParsesCommentsBlankLinesAndCrlf) {
  const auto pc = io::parse_csv(
      "# exported\r\nid,fx,fy,fz,mx,my,mz\r\n\r\nA,1,2,3,4,5,6\r\n# mid\r\nB,-1e1,0.5,0,0,0,0\r\n", "case");
  ASSERT_EQ(pc.field.size(), 2u);
  EXPECT_EQ(pc.case_id(), "case");
  EXPECT_EQ(pc.source_format, SourceFormat::Csv);
  EXPECT_EQ(pc.field[1].fixed, Vec3(-10, 0.5, 0));
  EXPECT_TRUE(pc.warnings.empty());
}

TEST(Csv, EmptyIdsGetOrdinals) {
  const auto pc = io::parse_csv(std::string(kHeader) + ",0,0,0,1,0,0\nx,1,0,0,1,0,0\n,2,0,0,2,0,0\n", "c");
  EXPECT_EQ(pc.field[0].id, "1");
  EXPECT_EQ(pc.field[1].id, "x");
  EXPECT_EQ(pc.field[2].id, "3");
  EXPECT_EQ(pc.warnings.size(), 1u);
}

TEST(Csv, HeaderMustMatchExactly) {
  for (const char* header : {"id,fx ,fy,fz,mx,my,mz\n", "ID,fx,fy,fz,mx,my,mz\n",
                             "id,fx,fy,fz,mx,my\n", "id, fx,fy,fz,mx,my,mz\n"}) {
    const auto f = failure_of([&] { io::parse_csv(std::string(header) + "a,0,0,0,0,0,0\n", "c"); });
    EXPECT_EQ(f.code, ErrorCode::BadHeader) << header;
    EXPECT_EQ(f.location, 1u);
  }
  EXPECT_EQ(failure_of([] { io::parse_csv("", "c"); }).code, ErrorCode::BadHeader);
}

TEST(Csv, WrongColumnCountCarriesLine) {
  const auto f = failure_of([] { io::load_case(fixture("malformed/six_fields.csv")); });
  EXPECT_EQ(f.code, ErrorCode::WrongColumnCount);
  EXPECT_EQ(f.location, 3u);
}

TEST(Csv, BadFloatCarriesLine) {
  const auto f = failure_of([] { io::load_case(fixture("malformed/bad_float.csv")); });
  EXPECT_EQ(f.code, ErrorCode::BadFloat);
  EXPECT_EQ(f.location, 5u);
  for (const char* token : {"nan", "inf", "1e", "0x10", "", " 1"}) {
    const std::string row = std::string("a,") + token + ",0,0,0,0,0\n";
    EXPECT_EQ(failure_of([&] { io::read_csv_landmarks(std::string(kHeader) + row); }).code,
              ErrorCode::BadFloat)
        << token;
  }
}

TEST(Csv, BadHeaderFixture) {
  EXPECT_EQ(failure_of([] { io::load_case(fixture("malformed/bad_header.csv")); }).code,
            ErrorCode::BadHeader);
}

TEST(Csv, RoundTripNineDigits) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Landmark> lms;
    for (int n = 0; n < 25; ++n) {
      lms.push_back({"p" + std::to_string(n), Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))});
    }
    const auto f = DisplacementField::build("rt", lms);
    const std::string bytes = io::write_csv(f);
    const auto back = io::parse_csv(bytes, "rt");
    ASSERT_EQ(back.field.size(), f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
      EXPECT_EQ(back.field[n].id, f[n].id);
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(back.field[n].fixed[c], f[n].fixed[c], 1e-8 * std::abs(f[n].fixed[c]));
        EXPECT_NEAR(back.field[n].moving[c], f[n].moving[c], 1e-8 * std::abs(f[n].moving[c]));
      }
    }
    EXPECT_EQ(io::write_csv(back.field), bytes);
  }
}

TEST(MniTag, SampleFixture) {
  const auto pc = io::load_case(fixture("sample.tag"));
  EXPECT_EQ(pc.case_id(), "sample");
  EXPECT_EQ(pc.source_format, SourceFormat::MniTag);
  ASSERT_EQ(pc.field.size(), 5u);
  EXPECT_EQ(pc.field[0].id, "1");
  EXPECT_EQ(pc.field[0].fixed, Vec3(12.5, -30.25, 41));
  EXPECT_EQ(pc.field[0].moving, Vec3(13.1, -29.75, 40.5));
  EXPECT_EQ(pc.field[3].id, "ventricle tip");
  EXPECT_EQ(pc.field[3].fixed, Vec3(0.5, 0.25, 0.125));
  EXPECT_EQ(pc.field[4].moving, Vec3(-21.25, -14, 18.5));
  EXPECT_TRUE(pc.warnings.empty());
}

TEST(MniTag, MinimalTwoPointFile) {
  const auto pc = io::parse_mni_tag(
      "MNI Tag Point File\nVolumes = 2;\nPoints =\n 0 0 0 1 1 1 \"A\"\n 5 5 5 6 6 6 \"B\";\n", "m");
  ASSERT_EQ(pc.field.size(), 2u);
  EXPECT_EQ(pc.field[0].id, "A");
  EXPECT_EQ(pc.field[1].id, "B");
  EXPECT_EQ(pc.field.displacement(1), Vec3(1, 1, 1));
}

TEST(MniTag, AuxiliaryNumbersSkippedAndIdsAssigned) {
  const auto pc = io::load_case(fixture("aux.tag"));
  ASSERT_EQ(pc.field.size(), 3u);
  EXPECT_EQ(pc.field[1].id, "2");
  EXPECT_EQ(pc.field[1].moving, Vec3(4.5, 5, 6));
  EXPECT_EQ(pc.warnings.size(), 2u);
}

TEST(MniTag, WriterRoundTrip) {
  const auto f = synth::generate({});
  const auto back = io::parse_mni_tag(io::write_mni_tag(f), f.case_id());
  EXPECT_EQ(io::write_csv(back.field), io::write_csv(f));
}

TEST(MniTag, MalformedInputs) {
  EXPECT_EQ(failure_of([] { io::load_case(fixture("malformed/not_tag.tag")); }).code,
            ErrorCode::NotTagFile);
  EXPECT_EQ(failure_of([] { io::load_case(fixture("malformed/volumes1.tag")); }).code,
            ErrorCode::UnsupportedVolumes);
  const auto five = failure_of([] { io::load_case(fixture("malformed/five_floats.tag")); });
  EXPECT_EQ(five.code, ErrorCode::MalformedPointRecord);
  EXPECT_EQ(five.location, 2u);
  EXPECT_EQ(failure_of([] { io::load_case(fixture("malformed/unterminated.tag")); }).code,
            ErrorCode::UnterminatedBlock);
  EXPECT_EQ(failure_of([] { io::parse_mni_tag("MNI Tag Point File\nPoints = 1 2 3 4 5 6;\n", "x"); })
                .code,
            ErrorCode::NotTagFile);
  EXPECT_EQ(failure_of([] { io::parse_mni_tag("", "x"); }).code, ErrorCode::NotTagFile);
}

TEST(Fcsv, RasPair) {
  const auto pc = io::load_fcsv_pair(fixture("ras_fixed.fcsv"), fixture("ras_moving.fcsv"));
  EXPECT_EQ(pc.case_id(), "ras");
  EXPECT_EQ(pc.source_format, SourceFormat::SlicerFcsvPair);
  ASSERT_EQ(pc.field.size(), 3u);
  EXPECT_EQ(pc.field[0].id, "F-1");
  EXPECT_EQ(pc.field[0].fixed, Vec3(10.5, -20.25, 30));
  EXPECT_EQ(pc.field[0].moving, Vec3(11, -19.75, 30.5));
  EXPECT_EQ(pc.field[2].fixed, Vec3(22.125, 3, -6.5));
  EXPECT_TRUE(pc.warnings.empty());
}

TEST(Fcsv, LpsMovingConvertedToRas) {
  const auto ras = io::load_fcsv_pair(fixture("ras_fixed.fcsv"), fixture("ras_moving.fcsv"));
  const auto mixed = io::load_fcsv_pair(fixture("ras_fixed.fcsv"), fixture("lps_moving.fcsv"));
  ASSERT_EQ(mixed.field.size(), 3u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(mixed.field[n].moving, ras.field[n].moving);
  ASSERT_EQ(mixed.warnings.size(), 1u);
  EXPECT_NE(mixed.warnings[0].find("LPS"), std::string::npos);
}

TEST(Fcsv, DefaultColumnsWithoutHeaders) {
  const std::string a = "p,0,0,0,0,0,0,1,1,1,0,A,,\nq,1,0,0,0,0,0,1,1,1,0,,,\n";
  const std::string b = "p,0,0,1,0,0,0,1,1,1,0,A,,\nq,1,0,1,0,0,0,1,1,1,0,B,,\n";
  const auto pc = io::parse_fcsv_pair(a, b, "c");
  EXPECT_EQ(pc.field[0].id, "A");
  EXPECT_EQ(pc.field[1].id, "2");
  EXPECT_EQ(pc.warnings.size(), 2u);
}

TEST(Fcsv, MalformedInputs) {
  const auto fixed = io::read_file(fixture("ras_fixed.fcsv"));
  const auto moving = io::read_file(fixture("ras_moving.fcsv"));
  EXPECT_EQ(failure_of([&] {
              io::parse_fcsv_pair(io::read_file(fixture("malformed/four_rows_fixed.fcsv")), moving, "c");
            }).code,
            ErrorCode::PointCountMismatch);
  EXPECT_EQ(failure_of([&] {
              io::parse_fcsv_pair(fixed, io::read_file(fixture("malformed/no_header_moving.fcsv")), "c");
            }).code,
            ErrorCode::CoordinateSystemMismatchUnresolvable);
  const auto bad = failure_of([&] {
    io::parse_fcsv_pair(io::read_file(fixture("malformed/bad_row.fcsv")), moving, "c");
  });
  EXPECT_EQ(bad.code, ErrorCode::MalformedRow);
  EXPECT_EQ(bad.location, 4u);
  EXPECT_EQ(failure_of([&] {
              io::parse_fcsv_pair("# CoordinateSystem = IJK\n" + fixed, moving, "c");
            }).code,
            ErrorCode::MalformedRow);
}

TEST(Files, FormatAndCaseIdFromPath) {
  EXPECT_EQ(io::format_from_extension("a/b.csv"), SourceFormat::Csv);
  EXPECT_EQ(io::format_from_extension("a/Case1-US.tag"), SourceFormat::MniTag);
  EXPECT_FALSE(io::format_from_extension("a/b.fcsv").has_value());
  EXPECT_EQ(io::case_id_from_path("dir/Case1-US.tag"), "Case1-US");
  EXPECT_THROW(io::read_file("/nonexistent/file.csv"), std::runtime_error);
}
