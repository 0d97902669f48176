#include "config_reader.hpp"

#include <array>
#include <cmath>

namespace qdspin::detail {
namespace {

struct UnitEntry {
  const char* name;
  double to_canonical;
};

struct UnitTable {
  const char* dimension;
  std::array<UnitEntry, 3> units;  // unused slots have name == nullptr
};

const UnitTable& unit_table(Dim dim) {
  static const UnitTable tables[] = {
      {"energy", {{{"ueV", 1.0}, {"meV", 1e3}, {nullptr, 0}}}},
      {"rate", {{{"1/ps", 1.0}, {"ps^-1", 1.0}, {nullptr, 0}}}},
      {"time", {{{"ps", 1.0}, {"ns", 1e3}, {nullptr, 0}}}},
      {"field", {{{"kV/cm", 1.0}, {nullptr, 0}, {nullptr, 0}}}},
      {"intensity", {{{"kW/cm^2", 1.0}, {"W/um^2", 1e5}, {nullptr, 0}}}},
      {"voltage", {{{"V", 1.0}, {nullptr, 0}, {nullptr, 0}}}},
      {"fss-field slope",
       {{{"ueV cm/kV", 1.0}, {"ueV/(kV/cm)", 1.0}, {nullptr, 0}}}},
      {"photocurrent", {{{"pA", 1.0}, {nullptr, 0}, {nullptr, 0}}}},
  };
  return tables[static_cast<int>(dim)];
}

}  // namespace

double parse_quantity(const nlohmann::json& j, const std::string& pointer,
                      Dim dim) {
  if (!j.is_object()) {
    throw ConfigError(pointer,
                      "expected a {\"value\": .., \"unit\": ..} object");
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "value" && key != "unit") {
      throw ConfigError(pointer + "/" + key, "unknown key in quantity");
    }
  }
  if (!j.contains("value") || !j["value"].is_number()) {
    throw ConfigError(pointer + "/value", "missing or non-numeric value");
  }
  if (!j.contains("unit") || !j["unit"].is_string()) {
    throw ConfigError(pointer + "/unit", "missing or non-string unit");
  }
  const double value = j["value"].get<double>();
  const std::string unit = j["unit"].get<std::string>();
  const UnitTable& table = unit_table(dim);
  for (const UnitEntry& entry : table.units) {
    if (entry.name != nullptr && unit == entry.name) {
      return value * entry.to_canonical;
    }
  }
  std::string allowed;
  for (const UnitEntry& entry : table.units) {
    if (entry.name != nullptr) {
      if (!allowed.empty()) allowed += ", ";
      allowed += entry.name;
    }
  }
  throw ConfigError(pointer + "/unit", "'" + unit + "' is not a valid " +
                                           table.dimension +
                                           " unit (expected one of: " +
                                           allowed + ")");
}

ConfigReader::ConfigReader(const nlohmann::json& j, std::string pointer)
    : json_(j), pointer_(std::move(pointer)) {
  if (!json_.is_object()) {
    throw ConfigError(pointer_.empty() ? "/" : pointer_,
                      "expected a JSON object");
  }
}

bool ConfigReader::has(const std::string& key) const {
  return json_.contains(key);
}

std::string ConfigReader::pointer(const std::string& key) const {
  return pointer_ + "/" + key;
}

const nlohmann::json& ConfigReader::require(const std::string& key) {
  if (!json_.contains(key)) {
    throw ConfigError(pointer(key), "missing required field");
  }
  consumed_.insert(key);
  return json_[key];
}

std::string ConfigReader::get_string(const std::string& key) {
  const nlohmann::json& v = require(key);
  if (!v.is_string()) throw ConfigError(pointer(key), "expected a string");
  return v.get<std::string>();
}

std::string ConfigReader::get_string_or(const std::string& key,
                                        const std::string& dflt) {
  return has(key) ? get_string(key) : dflt;
}

double ConfigReader::get_number(const std::string& key) {
  const nlohmann::json& v = require(key);
  if (!v.is_number()) throw ConfigError(pointer(key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(pointer(key), "non-finite number");
  return d;
}

double ConfigReader::get_number_or(const std::string& key, double dflt) {
  return has(key) ? get_number(key) : dflt;
}

int ConfigReader::get_int(const std::string& key) {
  const nlohmann::json& v = require(key);
  if (!v.is_number_integer()) {
    throw ConfigError(pointer(key), "expected an integer");
  }
  return v.get<int>();
}

int ConfigReader::get_int_or(const std::string& key, int dflt) {
  return has(key) ? get_int(key) : dflt;
}

bool ConfigReader::get_bool_or(const std::string& key, bool dflt) {
  if (!has(key)) return dflt;
  const nlohmann::json& v = require(key);
  if (!v.is_boolean()) throw ConfigError(pointer(key), "expected a boolean");
  return v.get<bool>();
}

std::uint64_t ConfigReader::get_seed_or(const std::string& key,
                                        std::uint64_t dflt) {
  if (!has(key)) return dflt;
  const nlohmann::json& v = require(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ConfigError(pointer(key), "expected a non-negative integer seed");
  }
  if (v.is_number_integer() && v.get<long long>() < 0) {
    throw ConfigError(pointer(key), "seed must be non-negative");
  }
  return v.get<std::uint64_t>();
}

double ConfigReader::get_quantity(const std::string& key, Dim dim) {
  return parse_quantity(require(key), pointer(key), dim);
}

double ConfigReader::get_quantity_or(const std::string& key, Dim dim,
                                     double dflt) {
  return has(key) ? get_quantity(key, dim) : dflt;
}

ConfigReader ConfigReader::object(const std::string& key) {
  const nlohmann::json& v = require(key);
  if (!v.is_object()) throw ConfigError(pointer(key), "expected an object");
  return ConfigReader(v, pointer(key));
}

const nlohmann::json& ConfigReader::raw(const std::string& key) {
  return require(key);
}

void ConfigReader::done() const {
  for (const auto& [key, _] : json_.items()) {
    if (!consumed_.contains(key)) {
      throw ConfigError(pointer_ + "/" + key, "unknown key");
    }
  }
}

}  // namespace qdspin::detail
