#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qdspin/spectrum.hpp"

// Deterministic text output: fixed "%.12g" number formatting, no locale,
// no timestamps. Identical inputs produce byte-identical files.

namespace qdspin {

/// Compact, locale-independent representation of a double.
std::string format_double(double v);

/// Tabular data with unit-carrying column names (e.g. "fss_ueV"). Cells may
/// be empty (sparse columns such as oracle cross-checks).
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  /// Pre-formatted cells; empty strings render as empty CSV cells.
  void add_raw_row(std::vector<std::string> cells);
  std::string to_csv() const;
  /// Array-of-objects rendering of the same table.
  std::string to_json() const;
};

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Spectrum CSV (columns x, y and sigma when present).
std::string spectrum_to_csv(const Spectrum& spectrum);
/// Reads a Spectrum back from CSV with columns x,y[,sigma] (header line
/// required, names free-form).
Spectrum spectrum_from_csv(const std::string& text);

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint configurations.
std::string fnv1a_hex(std::string_view data);

}  // namespace qdspin
