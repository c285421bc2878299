#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace bobylev {

// Shortest round-trip decimal form (%.17g, trimmed); keeps CSV artifacts
// byte-stable across runs so they can be hashed for determinism checks.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Writes the table to `path` and a JSON sidecar `path + ".json"` carrying the
// producing configuration plus row/column counts.  Creates parent directories.
void write_csv(const std::filesystem::path& path, const CsvTable& table,
               const nlohmann::json& config);

// FNV-1a 64-bit over the raw file bytes.
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::uint64_t fnv1a_bytes(const void* data, std::size_t n);

}  // namespace bobylev
