#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace leocdn {

/// Splits one CSV record. Supports double-quoted fields with "" escapes.
/// Throws std::invalid_argument on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string csv_field(std::string_view value);

/// Streams to `<path>.tmp` and renames onto `path` once `body` returns, so a
/// failure never leaves a partial file behind. Throws IoError.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& body,
                           bool binary = false);

/// Shortest round-trip representation of a double.
std::string format_double(double value);

}  // namespace leocdn
