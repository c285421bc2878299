#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bobylev {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;   // measured value vs pinned tolerance
  double seconds = 0.0;
};

// Runs the full acceptance battery, writing artifacts under `artifact_dir`.
// Shared by the standalone acceptance binary and the `verify-all` subcommand.
std::vector<Criterion> run_acceptance(const std::filesystem::path& artifact_dir,
                                      std::uint64_t seed = 20250814);

}  // namespace bobylev
