#include "ndd/csv.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

using namespace ndd;

namespace {

constexpr const char* kHeader =
    "timestamp,driver_id,trip_id,v_e,a_e,delta_v,delta_d,lane_change,cut_in";

}  // namespace

TEST_CASE("a minimal well-formed file parses to one record") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t1,20,0,0,30,0,0\n");
  const auto res = csv::parse_log(in);
  CHECK(res.row_errors.empty());
  CHECK(res.rows_total == 1);
  REQUIRE(res.records.size() == 1);
  const auto& r = res.records[0];
  CHECK(r.timestamp == 0.0);
  CHECK(r.driver_id == "d1");
  CHECK(r.trip_id == "t1");
  CHECK(r.v_e == 20.0);
  CHECK(r.a_e == 0.0);
  CHECK(r.delta_v == 0.0);
  REQUIRE(r.delta_d.has_value());
  CHECK(*r.delta_d == 30.0);
  CHECK(!r.lane_change);
  CHECK(!r.cut_in);
}

TEST_CASE("a non-numeric cell is a row error, the rest still parses") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t1,20,0,0,30,0,0\n"
                        "0.1,d1,t1,abc,0,0,30,0,0\n"
                        "0.2,d1,t1,21,0,0,30,0,0\n");
  const auto res = csv::parse_log(in);
  CHECK(res.records.size() == 2);
  CHECK(res.rows_total == 3);
  REQUIRE(res.row_errors.size() == 1);
  CHECK(res.row_errors[0].line == 3);
  CHECK(res.row_errors[0].message.find("abc") != std::string::npos);
  CHECK(res.row_errors[0].message.find("v_e") != std::string::npos);
}

TEST_CASE("a missing required column is fatal") {
  std::istringstream in("timestamp,driver_id,trip_id,v_e,a_e,delta_v\n");
  CHECK_THROWS_AS(csv::parse_log(in), ConfigError);
}

TEST_CASE("an empty stream is fatal") {
  std::istringstream in("");
  CHECK_THROWS_AS(csv::parse_log(in), ConfigError);
}

TEST_CASE("write then read preserves values to 1e-9") {
  std::vector<SampleRecord> records;
  for (int i = 0; i < 3; ++i) {
    SampleRecord r;
    r.timestamp = i * 0.1;
    r.driver_id = "d7";
    r.trip_id = "t3";
    r.v_e = 20.123456789 + i;
    r.a_e = -0.87654321 * i;
    r.delta_v = 3.14159265358979 - i;
    r.delta_d = 55.5 + 0.000123456 * i;
    r.lane_change = i == 1;
    r.cut_in = i == 2;
    records.push_back(std::move(r));
  }

  std::ostringstream out;
  csv::write_log(out, records);
  std::istringstream in(out.str());
  const auto res = csv::parse_log(in);
  CHECK(res.row_errors.empty());
  REQUIRE(res.records.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = res.records[i];
    CHECK(std::abs(a.timestamp - b.timestamp) <= 1e-9);
    CHECK(std::abs(a.v_e - b.v_e) <= 1e-9);
    CHECK(std::abs(a.a_e - b.a_e) <= 1e-9);
    CHECK(std::abs(a.delta_v - b.delta_v) <= 1e-9);
    CHECK(std::abs(*a.delta_d - *b.delta_d) <= 1e-9);
    CHECK(a.driver_id == b.driver_id);
    CHECK(a.trip_id == b.trip_id);
    CHECK(a.lane_change == b.lane_change);
    CHECK(a.cut_in == b.cut_in);
  }
}

TEST_CASE("an empty delta_d means no tracked target") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t1,20,0,0,,0,0\n");
  const auto res = csv::parse_log(in);
  REQUIRE(res.records.size() == 1);
  CHECK(!res.records[0].delta_d.has_value());
}

TEST_CASE("tab-delimited input is accepted") {
  std::istringstream in(
      "timestamp\tdriver_id\ttrip_id\tv_e\ta_e\tdelta_v\tdelta_d\tlane_change\tcut_in\n"
      "0.0\td1\tt1\t20\t0\t0\t30\t0\t1\n");
  const auto res = csv::parse_log(in);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].cut_in);
}

TEST_CASE("columns can be remapped and reordered") {
  std::istringstream in(
      "speed,accel,t,rel_v,rel_d,lc,ci,drv,trip\n"
      "21.5,0.2,1.5,-0.3,44,0,0,dx,ty\n");
  csv::ColumnMapping mapping{
      {"timestamp", "t"},  {"driver_id", "drv"}, {"trip_id", "trip"},
      {"v_e", "speed"},    {"a_e", "accel"},     {"delta_v", "rel_v"},
      {"delta_d", "rel_d"}, {"lane_change", "lc"}, {"cut_in", "ci"}};
  const auto res = csv::parse_log(in, mapping);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].timestamp == 1.5);
  CHECK(res.records[0].v_e == 21.5);
  CHECK(res.records[0].driver_id == "dx");
}

TEST_CASE("negative distances are row errors") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t1,20,0,0,-3,0,0\n");
  const auto res = csv::parse_log(in);
  CHECK(res.records.empty());
  REQUIRE(res.row_errors.size() == 1);
  CHECK(res.row_errors[0].message.find("negative") != std::string::npos);
}

TEST_CASE("nan and inf cells are row errors, not numbers") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t1,20,nan,0,30,0,0\n"
                        "0.1,d1,t1,20,0,inf,30,0,0\n"
                        "0.2,d1,t1,20,0,0,30,0,0\n");
  const auto res = csv::parse_log(in);
  CHECK(res.records.size() == 1);
  CHECK(res.row_errors.size() == 2);
}

TEST_CASE("flags must be 0 or 1") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t1,20,0,0,30,2,0\n");
  const auto res = csv::parse_log(in);
  CHECK(res.records.empty());
  REQUIRE(res.row_errors.size() == 1);
  CHECK(res.row_errors[0].message.find("lane_change") != std::string::npos);
}

TEST_CASE("short rows are row errors") {
  std::istringstream in(std::string(kHeader) + "\n0.0,d1,t1,20\n");
  const auto res = csv::parse_log(in);
  CHECK(res.records.empty());
  CHECK(res.row_errors.size() == 1);
}

TEST_CASE("interleaved trips are grouped, file order kept within a group") {
  std::istringstream in(std::string(kHeader) +
                        "\n0.0,d1,t2,20,0,0,30,0,0\n"
                        "0.0,d1,t1,21,0,0,30,0,0\n"
                        "0.1,d1,t2,22,0,0,30,0,0\n"
                        "0.1,d1,t1,23,0,0,30,0,0\n");
  const auto res = csv::parse_log(in);
  REQUIRE(res.records.size() == 4);
  CHECK(res.records[0].trip_id == "t1");
  CHECK(res.records[0].v_e == 21.0);
  CHECK(res.records[1].v_e == 23.0);
  CHECK(res.records[2].trip_id == "t2");
  CHECK(res.records[2].v_e == 20.0);
  CHECK(res.records[3].v_e == 22.0);
}
