#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Scenario runner: executes a JSON-configured sweep (fidelity vs FSS,
// fidelity vs field, FSS vs drive intensity, fidelity vs drive intensity,
// beat fitting, spectrum synthesis, generic curve fits) and emits a data
// table, a vector plot and JSON run metadata.

namespace qdspin {

inline constexpr std::string_view kConfigSchema = "qdspin/v1";

/// Recorded in every run's metadata: the sign convention used for the
/// optical-Stark FSS shift.
inline constexpr std::string_view kOseSignConvention =
    "delta_omega = (s/2)(sqrt(Delta_CW^2 + (hbar*Omega)^2) - Delta_CW) with "
    "s = +1 for H and -1 for V; a V-polarized drive reduces the FSS";

/// Sampled electron/hole tunneling rates on a monotone field axis.
struct RateTable {
  std::vector<double> field_kv_cm;
  std::vector<double> gamma_e_per_ps;
  std::vector<double> gamma_h_per_ps;

  void validate() const;

  /// Gamma(E) = amplitude * exp(-barrier/E) sampled on a uniform field
  /// grid; a phenomenological generator for synthetic tables.
  static RateTable phenomenological(double amp_e, double barrier_e,
                                    double amp_h, double barrier_h,
                                    double field_min_kv_cm,
                                    double field_max_kv_cm, int n_rows);

  /// Illustrative built-in table for a low-FSS dot ("qd-a-like"): electron
  /// tunneling 8.1e-3..2.7e-2 /ps over 52..80 kV/cm, hole lifetimes from
  /// 25.2 ns down to ~0.2 ns.
  static RateTable builtin_qd_a_like();
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  ///< overrides the config's seed
  bool verify = false;  ///< re-check closed forms against the integrator
  std::string format = "csv";  ///< data file format: "csv" or "json"
  bool svg = true;
  /// When set (CLI subcommands), the config's scenario id must match.
  std::optional<std::string> expect_scenario;
};

struct ScenarioResult {
  std::string scenario;
  std::filesystem::path data_path;
  std::filesystem::path svg_path;  ///< empty when svg output is disabled
  std::filesystem::path meta_path;
};

/// Runs a scenario from raw JSON text. Throws ConfigError on schema
/// violations, NumericError on numerical failures, IoError on I/O failures.
ScenarioResult run_scenario(const std::string& config_text,
                            const RunOptions& options = {});

/// File-based entry point used by the CLI: loads the config, runs it and
/// prints a one-line diagnostic on failure. Returns the process exit code:
/// 0 success, 2 config schema violation, 3 numerical failure, 4 I/O.
int run_scenario_file(const std::filesystem::path& config_path,
                      const RunOptions& options, std::ostream& diagnostics);

}  // namespace qdspin
