#pragma once

// Output plumbing for the CLI: deterministic CSV rendering, FNV-1a content
// hashes, metadata sidecars naming units, and the per-run manifest.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace irspaoi {

inline std::uint64_t fnv1a_64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t fnv1a_64(const std::string& s) {
  return fnv1a_64(s.data(), s.size());
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

// Fixed shortest-round-trip-ish formatting; locale-independent because the
// process never changes the C locale.
inline std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

struct CsvColumn {
  std::string name;
  std::string unit;  // "1" for dimensionless, "" for text
};

struct CsvTable {
  std::vector<CsvColumn> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
      throw std::invalid_argument("row width does not match column count");
    rows.push_back(std::move(cells));
  }

  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      out += columns[i].name;
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
      }
      out += '\n';
    }
    return out;
  }
};

struct WrittenFile {
  std::string path;
  std::string hash_hex;
};

inline WrittenFile write_file_hashed(const std::filesystem::path& path,
                                     const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path.string());
  f.write(content.data(), std::streamsize(content.size()));
  f.close();
  if (!f) throw std::runtime_error("failed writing output file: " + path.string());
  return WrittenFile{path.string(), hex64(fnv1a_64(content))};
}

// Writes <stem>.csv plus a <stem>.meta.json sidecar naming the units.
inline std::vector<WrittenFile> write_csv_with_sidecar(
    const std::filesystem::path& dir, const std::string& stem,
    const CsvTable& table, const std::string& description) {
  std::vector<WrittenFile> out;
  out.push_back(write_file_hashed(dir / (stem + ".csv"), table.render()));
  nlohmann::json meta;
  meta["description"] = description;
  meta["columns"] = nlohmann::json::array();
  for (const auto& c : table.columns)
    meta["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
  meta["rows"] = table.rows.size();
  out.push_back(
      write_file_hashed(dir / (stem + ".meta.json"), meta.dump(2) + "\n"));
  return out;
}

struct RunManifest {
  std::string schema_version = "1";
  std::string subcommand;
  std::string config_path;
  std::string config_hash_hex;
  std::uint64_t seed = 0;
  std::string kernel_mode;
  std::string leg_convention;
  double wall_time_s = 0.0;
  std::vector<WrittenFile> outputs;
  std::vector<std::string> warnings;
};

inline WrittenFile write_manifest(const std::filesystem::path& dir,
                                  const RunManifest& m) {
  nlohmann::json j;
  j["schema_version"] = m.schema_version;
  j["subcommand"] = m.subcommand;
  j["config_path"] = m.config_path;
  j["config_hash"] = m.config_hash_hex;
  j["seed"] = m.seed;
  j["kernel_mode"] = m.kernel_mode;
  j["leg_convention"] = m.leg_convention;
  j["wall_time_s"] = m.wall_time_s;
  j["outputs"] = nlohmann::json::array();
  for (const auto& f : m.outputs)
    j["outputs"].push_back({{"path", f.path}, {"fnv1a_64", f.hash_hex}});
  j["warnings"] = m.warnings;
  return write_file_hashed(dir / ("manifest_" + m.subcommand + ".json"),
                           j.dump(2) + "\n");
}

}  // namespace irspaoi
