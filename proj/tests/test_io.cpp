#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "optdes/io.hpp"

using namespace optdes;

namespace {

namespace fs = std::filesystem;

fs::path scratch_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "optdes_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 eng(8);
  for (int i = 0; i < 2000; ++i) {
    const double v = 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(-1.0) == "-1");
}

TEST_CASE("parse_double rejects junk and partial tokens") {
  CHECK_THROWS_AS(parse_double("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}

TEST_CASE("design CSV round-trips with header") {
  Eigen::MatrixXd pts(3, 2);
  pts << -1.0, 0.25, 0.0, -0.333333333333333315, 1.0, 1.0;
  const Design d{pts};
  const fs::path p = scratch_file("roundtrip.csv");
  write_design_csv(p.string(), d);
  const Design back = read_design_csv(p.string(), 2);
  REQUIRE(back.runs() == 3);
  REQUIRE(back.factors() == 2);
  CHECK((back.points.array() == pts.array()).all());
}

TEST_CASE("design CSV accepts headerless files") {
  const fs::path p = scratch_file("noheader.csv");
  write_text(p, "-1\n0\n1\n");
  const Design d = read_design_csv(p.string(), 1);
  REQUIRE(d.runs() == 3);
  CHECK(d.points(0, 0) == -1.0);
  CHECK(d.points(2, 0) == 1.0);
}

TEST_CASE("design CSV errors carry line and column") {
  const fs::path bounds = scratch_file("bounds.csv");
  write_text(bounds, "x1\n-1\n1.5\n0\n");
  try {
    read_design_csv(bounds.string(), 1);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);
    CHECK(msg.find("outside [-1,1]") != std::string::npos);
  }

  const fs::path shape = scratch_file("shape.csv");
  write_text(shape, "0.5,0.5\n0.1,0.2\n");
  try {
    read_design_csv(shape.string(), 1);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("expected 1 columns") != std::string::npos);
    CHECK(msg.find("line 1") != std::string::npos);
  }

  const fs::path junk = scratch_file("junk.csv");
  write_text(junk, "0.5\nhello\n");
  try {
    read_design_csv(junk.string(), 1);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("cannot parse") != std::string::npos);
  }

  const fs::path empty = scratch_file("empty.csv");
  write_text(empty, "x1\n");
  CHECK_THROWS_AS(read_design_csv(empty.string(), 1), std::runtime_error);

  CHECK_THROWS_AS(read_design_csv("/nonexistent/nowhere.csv", 1),
                  std::runtime_error);
}
