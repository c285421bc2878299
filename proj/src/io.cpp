#include "bobylev/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bobylev {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // %.17g always round-trips; shorten when fewer digits already do.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
    double back;
    std::sscanf(shorter, "%lf", &back);
    if (back == x) return shorter;
  }
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table,
               const nlohmann::json& config) {
  if (table.header.empty()) throw std::invalid_argument("csv needs a header");
  std::filesystem::create_directories(path.parent_path());
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) csv << ',';
    csv << table.header[i];
  }
  csv << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("csv row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) csv << ',';
      csv << format_double(row[i]);
    }
    csv << '\n';
  }
  csv.close();

  nlohmann::json sidecar;
  sidecar["config"] = config;
  sidecar["rows"] = table.rows.size();
  sidecar["columns"] = table.header.size();
  sidecar["artifact"] = path.filename().string();
  std::ofstream side(path.string() + ".json");
  if (!side) throw std::runtime_error("cannot open sidecar for " + path.string());
  side << sidecar.dump(2) << '\n';
}

std::uint64_t fnv1a_bytes(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    hash ^= p[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::uint64_t hash = 14695981039346656037ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
    if (!in) break;
  }
  return hash;
}

}  // namespace bobylev
