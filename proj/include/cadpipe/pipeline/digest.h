#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cadpipe::pipeline {

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
// Throws DataError if the file cannot be read.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace cadpipe::pipeline
