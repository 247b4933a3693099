#pragma once

#include <filesystem>
#include <string>

#include "wsp/grid.hpp"

namespace wsp {

/// Reads a field file: one header line "m N nu R", then N^m lines of nu
/// space-separated decimal floats in lexicographic node order.  Throws
/// FormatError on a malformed header, wrong row/column counts, or any
/// non-finite entry.
GridField load_field(const std::filesystem::path& path);

/// Writes `u` in the load_field format with 17 significant digits, which
/// round-trips doubles bit-exactly.  The file is written to a temporary
/// sibling and renamed into place, so readers never observe a partial file.
void save_field(const GridField& u, const std::filesystem::path& path);

/// Atomically replaces `path` with `content` (write temp + rename); used for
/// every text artifact the library emits (fields, CSV tables, manifests).
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// Formats a double with 17 significant digits (shortest exact form used
/// across all emitted files).
std::string format_double(double v);

}  // namespace wsp
