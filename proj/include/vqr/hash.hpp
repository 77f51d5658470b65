#pragma once

#include <cstddef>
#include <string>

namespace vqr {

/// SHA-256 digest as lowercase hex.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& bytes);

/// Digest of a file's bytes; IoError if the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace vqr
