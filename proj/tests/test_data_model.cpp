#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "larvest/data_model.hpp"
#include "larvest/errors.hpp"

using namespace larvest;

namespace {

ExperimentalDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experimental_csv(in);
}

TemperatureProfile parse_profile(const std::string& text) {
  std::istringstream in(text);
  return parse_temperature_csv(in);
}

} // namespace

TEST_CASE("grouping by temperature and time") {
  const auto ds = parse("temperature_c,time_h,length_mm\n15,0,2.1\n15,0,2.3\n15,24,5.0\n");
  REQUIRE(ds.batches.size() == 1);
  CHECK(ds.batches[0].temperature_c == 15.0);
  REQUIRE(ds.batches[0].observations.size() == 2);
  CHECK(ds.batches[0].observations[0].time_h == 0.0);
  CHECK(ds.batches[0].observations[0].replicate_count() == 2);
  CHECK(ds.batches[0].observations[1].time_h == 24.0);
}

TEST_CASE("batches sort by temperature even when rows interleave") {
  const auto ds = parse(
      "temperature_c,time_h,length_mm\n"
      "20,0,2.0\n15,0,2.1\n20,24,6.0\n15,24,5.0\n");
  REQUIRE(ds.batches.size() == 2);
  CHECK(ds.batches[0].temperature_c == 15.0);
  CHECK(ds.batches[1].temperature_c == 20.0);
}

TEST_CASE("missing hatching row is an invariant violation") {
  CHECK_THROWS_WITH_AS(parse("temperature_c,time_h,length_mm\n15,24,5.0\n"),
                       doctest::Contains("first observation time"), Error);
}

TEST_CASE("malformed and empty inputs") {
  CHECK_THROWS_AS(parse("temperature_c,time_h,length_mm\n15,x,5.0\n"), Error);
  try {
    parse("temperature_c,time_h,length_mm\n");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDataset);
  }
  try {
    parse("temp,time,len\n15,0,5.0\n");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateHeaderMismatch);
  }
}

TEST_CASE("crlf line endings are accepted") {
  const auto ds = parse("temperature_c,time_h,length_mm\r\n15,0,2.1\r\n15,12,3\r\n");
  CHECK(ds.batches.size() == 1);
  CHECK(ds.batches[0].observations.size() == 2);
}

TEST_CASE("round trip is identical and grouping is order independent") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> noise(0.1, 9.9);
  std::vector<std::string> rows;
  for (double temp : {12.5, 17.0, 21.25})
    for (double time : {0.0, 12.0, 24.0, 48.5})
      for (int rep = 0; rep < 3; ++rep) {
        std::ostringstream row;
        row << temp << ',' << time << ',' << noise(gen);
        rows.push_back(row.str());
      }

  auto to_csv = [&](const std::vector<std::string>& rs) {
    std::string text = "temperature_c,time_h,length_mm\n";
    for (const auto& r : rs) text += r + "\n";
    return text;
  };

  const auto ds = parse(to_csv(rows));
  std::ostringstream out;
  write_experimental_csv(out, ds);
  const auto ds2 = parse(out.str());
  std::ostringstream out2;
  write_experimental_csv(out2, ds2);
  CHECK(out.str() == out2.str());

  std::shuffle(rows.begin(), rows.end(), gen);
  const auto ds_shuffled = parse(to_csv(rows));
  std::ostringstream out3;
  write_experimental_csv(out3, ds_shuffled);
  CHECK(out.str() == out3.str());
}

TEST_CASE("temperature profile parsing and interpolation") {
  const auto profile = parse_profile("time_h,temp_c\n-200,10\n0,10\n");
  CHECK(profile.span_begin() == -200.0);
  CHECK(profile.span_end() == 0.0);
  CHECK(profile.at(-123.4) == doctest::Approx(10.0));

  const auto ramp = parse_profile("time_h,temp_c\n-10,0\n0,20\n");
  CHECK(ramp.at(-5.0) == doctest::Approx(10.0));
  CHECK(ramp.at(-10.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(ramp.at(-10.5), Error);
}

TEST_CASE("profile rejects disorder and tiny inputs") {
  try {
    parse_profile("time_h,temp_c\n0,10\n-5,12\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotoneTime);
  }
  try {
    parse_profile("time_h,temp_c\n-10,8\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSamples);
  }
}

TEST_CASE("case validation") {
  const auto profile = parse_profile("time_h,temp_c\n-371,12\n0,12\n");
  CaseObservation obs;
  obs.lengths_mm = {14.0, 15.5};
  obs.t_star_h = 0.0;
  obs.t_a_h = -371.0;
  CHECK_NOTHROW(validate_case(obs, profile));

  obs.t_a_h = -400.0;
  try {
    validate_case(obs, profile);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProfileCoverageGap);
  }

  obs.t_a_h = 0.0; // t_a == t*
  try {
    validate_case(obs, profile);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadTimeOrder);
  }
}

TEST_CASE("lengths csv") {
  std::istringstream in("length_mm\n12.5\n13\n14.25\n");
  const auto lengths = parse_lengths_csv(in);
  REQUIRE(lengths.size() == 3);
  CHECK(lengths[1] == 13.0);
}
