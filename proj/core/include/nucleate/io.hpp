#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nucleate {

// All CSV output goes through these helpers: '.' decimal point, 17 significant
// digits, so re-running a seeded command reproduces files byte for byte.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(std::span<const double> values);
  void add_row(std::span<const std::string> values);

  const std::string& content() const { return buffer_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t n_cols_;
  std::string buffer_;
};

// FNV-1a 64-bit content digest, hex-encoded; used by run manifests to pin
// emitted artifacts.
std::uint64_t fnv1a64(std::span<const char> bytes);
std::string digest_hex(std::span<const char> bytes);
std::string digest_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;  // every flag, defaults included
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;
  std::map<std::string, std::string> output_digests;  // file name -> digest

  // Pretty-printed JSON with lexicographically sorted keys.
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

// Minimal CSV reader (no quoting; our own files only).
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 if absent
  std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace nucleate
