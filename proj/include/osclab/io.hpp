#pragma once

// Cell data on disk. Both formats store values in row-major cell order.
//
// CSV: one value per line; blank lines and lines starting with '#' are
// skipped. The depth is inferred from the value count, which must be 2^(n*D).
//
// Binary: a 16-byte header (magic "OSCL", u32 dimension, u32 depth, u32
// reserved = 0) followed by little-endian IEEE doubles.

#include <filesystem>
#include <string_view>
#include <span>
#include <vector>

#include "osclab/grid.hpp"

namespace osclab {

struct CellData {
  int dimension = 1;
  int depth = 0;
  std::vector<double> row_major;

  Grid grid() const { return Grid(dimension, depth); }
};

/// Parses CSV text; throws ParseError with a 1-based line number.
CellData parse_cells_csv(std::string_view text, int dimension);
CellData read_cells_csv(const std::filesystem::path& path, int dimension);
void write_cells_csv(const std::filesystem::path& path, std::span<const double> row_major);

CellData read_cells_binary(const std::filesystem::path& path);
void write_cells_binary(const std::filesystem::path& path, int dimension, int depth,
                        std::span<const double> row_major);

/// Dispatches on the file content: the "OSCL" magic selects the binary reader.
CellData read_cells(const std::filesystem::path& path, int dimension);

CellFunction load_function(const std::filesystem::path& path, int dimension);
CellMeasure load_measure(const std::filesystem::path& path, int dimension);

}  // namespace osclab
