#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fleetroute::detail {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

// 64-bit FNV-1a, chainable through `seed`.
std::uint64_t fnv1a(std::string_view data,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

}  // namespace fleetroute::detail
