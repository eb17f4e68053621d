#pragma once

#include <filesystem>
#include <string>

namespace eegraph {

/// Lowercase hex SHA-256 of a byte string (OpenSSL-backed).
std::string sha256_hex(const std::string& bytes);

/// SHA-256 of a file's contents; throws std::runtime_error when unreadable.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace eegraph
