#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace wqed::io {

// Lossless decimal form of a double (17 significant digits).
std::string fmt_double(double x);

void write_text(const std::filesystem::path& path, std::string_view contents);
std::string read_text(const std::filesystem::path& path);

// Hex-encoded SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace wqed::io
