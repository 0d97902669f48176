#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "json.hpp"
#include "qdspin/errors.hpp"

// Schema-checking view over a JSON object: every physical quantity is a
// {"value": <number>, "unit": "<string>"} pair checked against the units
// admissible for its dimension, missing/unknown keys are ConfigErrors and
// every error carries the JSON pointer of the offending element.

namespace qdspin::detail {

enum class Dim {
  Energy,       // canonical ueV
  Rate,         // 1/ps
  Time,         // ps
  Field,        // kV/cm
  Intensity,    // kW/cm^2 (scenario axis unit)
  Voltage,      // V
  FssSlope,     // ueV cm/kV
  Photocurrent  // pA
};

class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& j, std::string pointer);

  bool has(const std::string& key) const;
  std::string pointer(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string_or(const std::string& key, const std::string& dflt);
  double get_number(const std::string& key);
  double get_number_or(const std::string& key, double dflt);
  int get_int(const std::string& key);
  int get_int_or(const std::string& key, int dflt);
  bool get_bool_or(const std::string& key, bool dflt);
  std::uint64_t get_seed_or(const std::string& key, std::uint64_t dflt);

  /// {"value": .., "unit": ..} in the canonical unit of the dimension.
  double get_quantity(const std::string& key, Dim dim);
  double get_quantity_or(const std::string& key, Dim dim, double dflt);

  ConfigReader object(const std::string& key);
  /// Raw access for arrays; the key is marked consumed.
  const nlohmann::json& raw(const std::string& key);

  /// Rejects any key that was never consumed.
  void done() const;

 private:
  const nlohmann::json& require(const std::string& key);

  const nlohmann::json& json_;
  std::string pointer_;
  std::set<std::string> consumed_;
};

/// Standalone quantity parser for array elements.
double parse_quantity(const nlohmann::json& j, const std::string& pointer,
                      Dim dim);

}  // namespace qdspin::detail
