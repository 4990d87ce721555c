#pragma once

#include <filesystem>
#include <string>

namespace qm {

/// Writes content to path atomically (temp file in the same directory,
/// then rename), so interrupted runs never leave truncated files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Shortest decimal form that round-trips a double ("%.17g").
std::string fmt_double(double v);

/// Compact form for file names ("%g": 0.1 -> "0.1").
std::string fmt_compact(double v);

} // namespace qm
