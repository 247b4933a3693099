#include "wsp/field_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace wsp {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write_text(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("atomic rename failed for: " + path.string());
  }
}

namespace {

/// Parses one double token; rejects non-finite values and trailing garbage.
double parse_double_token(const std::string& tok, std::size_t line_no) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError("field file line " + std::to_string(line_no) +
                      ": bad numeric token '" + tok + "'");
  }
  if (!std::isfinite(v)) {
    throw FormatError("field file line " + std::to_string(line_no) +
                      ": non-finite entry '" + tok + "'");
  }
  return v;
}

}  // namespace

GridField load_field(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open field file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw FormatError("field file is empty: " + path.string());

  long m = 0, n = 0, nu = 0;
  double r = 0.0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> m >> n >> nu >> r) || (hs >> extra)) {
      throw FormatError("malformed header (want 'm N nu R'): '" + line + "'");
    }
  }
  if (m < 1 || n < 1 || nu < 1 || !(r > 0.0) || !std::isfinite(r)) {
    throw FormatError("header values out of range: '" + line + "'");
  }

  Grid grid(static_cast<int>(m), static_cast<int>(n), r);
  GridField u(grid, static_cast<int>(nu));
  const std::size_t rows = grid.node_count();

  std::size_t row = 0;
  std::size_t line_no = 1;
  std::string tok;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::size_t col = 0;
    while (ls >> tok) {
      if (row >= rows || col >= static_cast<std::size_t>(nu)) {
        throw FormatError("field file has more entries than the header declares (line " +
                          std::to_string(line_no) + ")");
      }
      u.values[row * static_cast<std::size_t>(nu) + col] = parse_double_token(tok, line_no);
      ++col;
    }
    if (col == 0) continue;  // blank line
    if (col != static_cast<std::size_t>(nu)) {
      throw FormatError("field file line " + std::to_string(line_no) + ": expected " +
                        std::to_string(nu) + " components, got " + std::to_string(col));
    }
    ++row;
  }
  if (row != rows) {
    throw FormatError("field file row count mismatch: header declares " +
                      std::to_string(rows) + " nodes, file has " + std::to_string(row));
  }
  return u;
}

void save_field(const GridField& u, const fs::path& path) {
  std::string out;
  out.reserve(u.values.size() * 20 + 64);
  out += std::to_string(u.grid.m);
  out += ' ';
  out += std::to_string(u.grid.n);
  out += ' ';
  out += std::to_string(u.nu);
  out += ' ';
  out += format_double(u.grid.half_width);
  out += '\n';
  const std::size_t count = u.node_count();
  for (std::size_t node = 0; node < count; ++node) {
    auto v = u.at(node);
    for (int a = 0; a < u.nu; ++a) {
      if (a) out += ' ';
      out += format_double(v[static_cast<std::size_t>(a)]);
    }
    out += '\n';
  }
  atomic_write_text(path, out);
}

}  // namespace wsp
