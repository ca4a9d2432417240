#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "osclab/error.hpp"
#include "osclab/io.hpp"
#include "osclab/testfunctions.hpp"

using namespace osclab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "osclab_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("csv parsing infers the depth from the count") {
  const auto d = parse_cells_csv("# header\n1\n2\n\n3\n4\n", 1);
  CHECK(d.depth == 2);
  CHECK(d.row_major == std::vector<double>{1, 2, 3, 4});
  CHECK(parse_cells_csv("1,\n2,\n3,\n4,\n", 2).depth == 1);
}

TEST_CASE("csv parse errors carry the line number") {
  try {
    parse_cells_csv("1\n2\nthree\n4\n", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_cells_csv("1\n2\n3\n", 1), Error);
  CHECK_THROWS_AS(parse_cells_csv("1\n2\n3\n4\n", 3), Error);
  CHECK_THROWS_AS(parse_cells_csv("1\n2\ninf\n4\n", 1), Error);
}

TEST_CASE("csv and binary files round trip bit-exactly") {
  const Grid g(2, 3);
  const auto f = random_step(g, 21);
  const auto rm = f.to_row_major();

  const auto csv = scratch("f.csv");
  write_cells_csv(csv, rm);
  const auto back = load_function(csv, 2);
  CHECK(std::vector<double>(back.values().begin(), back.values().end()) ==
        std::vector<double>(f.values().begin(), f.values().end()));

  const auto bin = scratch("f.bin");
  write_cells_binary(bin, 2, 3, rm);
  const auto d = read_cells(bin, 1);  // the header overrides the dimension argument
  CHECK(d.dimension == 2);
  CHECK(d.depth == 3);
  CHECK(d.row_major == rm);
}

TEST_CASE("binary reader rejects truncated files") {
  const auto bin = scratch("short.bin");
  write_cells_binary(bin, 1, 3, std::vector<double>(8, 1.0));
  fs::resize_file(bin, fs::file_size(bin) - 4);
  CHECK_THROWS_AS(read_cells_binary(bin), Error);
}

TEST_CASE("missing files are io errors") {
  try {
    read_cells(scratch("does-not-exist.csv"), 1);
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}

TEST_CASE("negative masses are rejected when loading a measure") {
  const auto csv = scratch("neg.csv");
  std::ofstream(csv) << "1\n-1\n1\n1\n";
  CHECK_THROWS_AS(load_measure(csv, 1), Error);
}
