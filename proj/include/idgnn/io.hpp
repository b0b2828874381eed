#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace idgnn::io {

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// FNV-1a, 64-bit. Used for content digests in manifests and graph hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

}  // namespace idgnn::io
