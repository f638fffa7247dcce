#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace darkpat {

std::uint32_t crc32(std::string_view bytes);
std::string sha256_hex(std::string_view bytes);
// Throws IoError if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace darkpat
