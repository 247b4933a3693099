#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "wsp/field_io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("save/load round-trips every bit") {
  wsp::Grid g(2, 5, 1.0);
  wsp::GridField u(g, 3);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (double& v : u.values) v = dist(rng);
  u.values[0] = 0.1;                 // not exactly representable
  u.values[1] = 1e-300;              // subnormal territory
  u.values[2] = -0.0;

  const fs::path p = temp_file("wsp_io_roundtrip.field");
  wsp::save_field(u, p);
  wsp::GridField v = wsp::load_field(p);

  CHECK(v.grid.m == g.m);
  CHECK(v.grid.n == g.n);
  CHECK(v.grid.half_width == g.half_width);
  CHECK(v.nu == u.nu);
  REQUIRE(v.values.size() == u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(v.values[i] == u.values[i]);
  fs::remove(p);
}

TEST_CASE("save leaves no temporary behind") {
  wsp::GridField u(wsp::Grid(1, 4, 1.0), 1, 1.5);
  const fs::path p = temp_file("wsp_io_clean.field");
  wsp::save_field(u, p);
  CHECK(fs::exists(p));
  CHECK(!fs::exists(p.string() + ".tmp"));
  fs::remove(p);
}

TEST_CASE("malformed inputs are rejected with FormatError") {
  const fs::path p = temp_file("wsp_io_bad.field");

  SUBCASE("bad header arity") {
    write_text(p, "1 4 1\n0\n0\n0\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("trailing junk in header") {
    write_text(p, "1 4 1 1.0 extra\n0\n0\n0\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("wrong row count") {
    write_text(p, "1 4 1 1.0\n0\n0\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("wrong column count") {
    write_text(p, "1 2 2 1.0\n0 0\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("non-finite value") {
    write_text(p, "1 2 1 1.0\nnan\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("garbage token") {
    write_text(p, "1 2 1 1.0\n0.5x\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("nonpositive dimensions") {
    write_text(p, "0 2 1 1.0\n0\n0\n");
    CHECK_THROWS_AS(wsp::load_field(p), wsp::FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(wsp::load_field(temp_file("wsp_io_nonexistent.field")),
                    wsp::FormatError);
  }
  fs::remove(p);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 2.5e300, 0.0}) {
    CHECK(std::stod(wsp::format_double(v)) == v);
  }
}
