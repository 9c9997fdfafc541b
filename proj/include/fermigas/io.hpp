#pragma once

#include <string>
#include <string_view>

namespace fermigas::io {

/// Shortest round-trip decimal representation, independent of the C locale.
std::string format_double(double x);

/// Writes `contents` to `path` through a temporary file in the same directory
/// followed by rename, so readers never observe a partial file.
void atomic_write(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

}  // namespace fermigas::io
