#include "osclab/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "osclab/error.hpp"

namespace osclab {

namespace {

constexpr char kMagic[4] = {'O', 'S', 'C', 'L'};

int depth_for_count(std::size_t count, int dimension) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw Error(ErrorKind::parameter, "dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
  }
  for (int depth = 0; dimension * depth <= 26; ++depth) {
    const std::size_t expected = std::size_t{1} << (dimension * depth);
    if (expected == count) return depth;
    if (expected > count) break;
  }
  throw Error(ErrorKind::parse, std::to_string(count) + " values is not 2^(" +
                                    std::to_string(dimension) + "*depth)");
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint32_t load_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

void store_u32(char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
}

double load_f64(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<double>(bits);
}

void store_f64(char* p, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) p[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

CellData parse_cells_csv(std::string_view text, int dimension) {
  CellData out;
  out.dimension = dimension;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;
    if (line.back() == ',') line.remove_suffix(1);
    if (!line.empty() && line.front() == '+') line.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || end != line.data() + line.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + std::string(line) + "'",
                       line_no);
    }
    if (!std::isfinite(v)) {
      throw ParseError("line " + std::to_string(line_no) + ": value is not finite", line_no);
    }
    out.row_major.push_back(v);
  }
  if (out.row_major.empty()) throw ParseError("no values found", line_no);
  out.depth = depth_for_count(out.row_major.size(), dimension);
  return out;
}

CellData read_cells_csv(const std::filesystem::path& path, int dimension) {
  try {
    return parse_cells_csv(slurp(path), dimension);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_cells_csv(const std::filesystem::path& path, std::span<const double> row_major) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  char buf[32];
  for (double v : row_major) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
    out.put('\n');
  }
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

CellData read_cells_binary(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorKind::parse, path.string() + ": missing OSCL header");
  }
  CellData out;
  out.dimension = static_cast<int>(load_u32(bytes.data() + 4));
  out.depth = static_cast<int>(load_u32(bytes.data() + 8));
  if (out.dimension < 1 || out.dimension > kMaxDimension || out.depth < 0 ||
      out.dimension * out.depth > 26) {
    throw Error(ErrorKind::parse, path.string() + ": header dimension/depth out of range");
  }
  const std::size_t count = std::size_t{1} << (out.dimension * out.depth);
  if (bytes.size() != 16 + 8 * count) {
    throw Error(ErrorKind::parse, path.string() + ": expected " + std::to_string(count) +
                                      " doubles after the header");
  }
  out.row_major.resize(count);
  for (std::size_t i = 0; i < count; ++i) out.row_major[i] = load_f64(bytes.data() + 16 + 8 * i);
  return out;
}

void write_cells_binary(const std::filesystem::path& path, int dimension, int depth,
                        std::span<const double> row_major) {
  std::string bytes(16 + 8 * row_major.size(), '\0');
  std::memcpy(bytes.data(), kMagic, 4);
  store_u32(bytes.data() + 4, static_cast<std::uint32_t>(dimension));
  store_u32(bytes.data() + 8, static_cast<std::uint32_t>(depth));
  for (std::size_t i = 0; i < row_major.size(); ++i) store_f64(bytes.data() + 16 + 8 * i, row_major[i]);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

CellData read_cells(const std::filesystem::path& path, int dimension) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  char head[4] = {};
  in.read(head, 4);
  if (in.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0) return read_cells_binary(path);
  return read_cells_csv(path, dimension);
}

CellFunction load_function(const std::filesystem::path& path, int dimension) {
  const CellData data = read_cells(path, dimension);
  return CellFunction::from_row_major(data.grid(), data.row_major);
}

CellMeasure load_measure(const std::filesystem::path& path, int dimension) {
  const CellData data = read_cells(path, dimension);
  return CellMeasure::from_row_major(data.grid(), data.row_major);
}

}  // namespace osclab
