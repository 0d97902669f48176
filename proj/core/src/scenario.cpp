#include "qdspin/scenario.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "json.hpp"
#include "qdspin/errors.hpp"
#include "qdspin/io.hpp"
#include "scenario_internal.hpp"

namespace qdspin {

void RateTable::validate() const {
  const std::size_t n = field_kv_cm.size();
  if (n < 2 || gamma_e_per_ps.size() != n || gamma_h_per_ps.size() != n) {
    throw std::invalid_argument(
        "RateTable: need >= 2 rows with matched column lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(field_kv_cm[i] > field_kv_cm[i - 1])) {
      throw std::invalid_argument(
          "RateTable: field axis must be strictly increasing");
    }
    if (!(gamma_e_per_ps[i] > 0.0) || !(gamma_h_per_ps[i] > 0.0)) {
      throw std::invalid_argument("RateTable: rates must be > 0");
    }
    if (!(gamma_e_per_ps[i] > gamma_h_per_ps[i])) {
      throw std::invalid_argument(
          "RateTable: gamma_e must exceed gamma_h at every row");
    }
  }
}

RateTable RateTable::phenomenological(double amp_e, double barrier_e,
                                      double amp_h, double barrier_h,
                                      double field_min_kv_cm,
                                      double field_max_kv_cm, int n_rows) {
  if (!(field_min_kv_cm > 0.0) || !(field_max_kv_cm > field_min_kv_cm) ||
      n_rows < 2) {
    throw std::invalid_argument(
        "RateTable::phenomenological: need 0 < field_min < field_max and "
        ">= 2 rows");
  }
  RateTable t;
  t.field_kv_cm = detail::linspace(field_min_kv_cm, field_max_kv_cm, n_rows);
  for (double e : t.field_kv_cm) {
    t.gamma_e_per_ps.push_back(amp_e * std::exp(-barrier_e / e));
    t.gamma_h_per_ps.push_back(amp_h * std::exp(-barrier_h / e));
  }
  t.validate();
  return t;
}

RateTable RateTable::builtin_qd_a_like() {
  // Anchored at 0.021/ps electron tunneling at 72 kV/cm, a 123 ps
  // initialization time at 52 kV/cm and a 25.2 ns hole lifetime at the
  // low-field end. Illustrative, not a measurement.
  return phenomenological(0.247622, 177.651, 62.177, 741.759, 52.0, 80.0, 15);
}

namespace detail {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out[std::size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
  }
  return out;
}

}  // namespace detail

namespace {

using detail::ConfigReader;
using detail::RunContext;
using detail::ScenarioArtifacts;

using Runner = std::function<ScenarioArtifacts(ConfigReader&,
                                               const RunContext&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"fig3", detail::run_fig3},     {"fig4", detail::run_fig4},
      {"fig5b", detail::run_fig5b},   {"fig5c", detail::run_fig5c},
      {"beats", detail::run_beats},   {"spectrum", detail::run_spectrum},
      {"fit", detail::run_fit},
  };
  return table;
}

}  // namespace

ScenarioResult run_scenario(const std::string& config_text,
                            const RunOptions& options) {
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }

  ConfigReader root(config, "");
  const std::string schema = root.get_string("schema");
  if (schema != kConfigSchema) {
    throw ConfigError("/schema", "expected \"" + std::string(kConfigSchema) +
                                     "\", got \"" + schema + "\"");
  }
  const std::string scenario = root.get_string("scenario");
  const auto it = runners().find(scenario);
  if (it == runners().end()) {
    throw ConfigError("/scenario", "unknown scenario '" + scenario + "'");
  }
  if (options.expect_scenario && scenario != *options.expect_scenario) {
    throw ConfigError("/scenario", "config is for '" + scenario +
                                       "' but the '" +
                                       *options.expect_scenario +
                                       "' subcommand was invoked");
  }
  if (options.format != "csv" && options.format != "json") {
    throw ConfigError("/", "unsupported output format '" + options.format +
                               "' (csv|json)");
  }
  const std::string stem = root.get_string_or("output_stem", scenario);
  RunContext ctx{options, 0};
  ctx.seed = options.seed.value_or(root.get_seed_or("seed", 0));

  ScenarioArtifacts artifacts = it->second(root, ctx);
  root.done();

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" +
                  options.out_dir.string() + "': " + ec.message());
  }

  ScenarioResult result;
  result.scenario = scenario;
  result.data_path =
      options.out_dir / (stem + (options.format == "csv" ? ".csv" : ".json"));
  write_text_file(result.data_path, options.format == "csv"
                                        ? artifacts.table.to_csv()
                                        : artifacts.table.to_json());
  if (options.svg && artifacts.plot) {
    result.svg_path = options.out_dir / (stem + ".svg");
    write_text_file(result.svg_path, artifacts.plot->render());
  }

  nlohmann::json meta;
  meta["schema"] = kConfigSchema;
  meta["scenario"] = scenario;
  meta["generator"] = "qdspin";
  meta["config_hash"] = "fnv1a:" + fnv1a_hex(config.dump());
  meta["seed"] = ctx.seed;
  meta["ose_sign_convention"] = kOseSignConvention;
  meta["columns"] = artifacts.table.columns;
  meta["outputs"] = {{"data", result.data_path.filename().string()}};
  if (!result.svg_path.empty()) {
    meta["outputs"]["svg"] = result.svg_path.filename().string();
  }
  if (!options.verify && !artifacts.extra_meta.contains("verify")) {
    meta["verify"] = "not-requested";
  }
  for (const auto& [key, value] : artifacts.extra_meta.items()) {
    meta[key] = value;
  }
  result.meta_path = options.out_dir / (stem + ".meta.json");
  write_text_file(result.meta_path, meta.dump(2) + "\n");
  return result;
}

int run_scenario_file(const std::filesystem::path& config_path,
                      const RunOptions& options, std::ostream& diagnostics) {
  try {
    const std::string text = read_text_file(config_path);
    const ScenarioResult result = run_scenario(text, options);
    diagnostics << "wrote " << result.data_path.string();
    if (!result.svg_path.empty()) {
      diagnostics << ", " << result.svg_path.string();
    }
    diagnostics << ", " << result.meta_path.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    diagnostics << "config error at " << e.json_pointer() << ": " << e.what()
                << "\n";
    return 2;
  } catch (const IoError& e) {
    diagnostics << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const NumericError& e) {
    diagnostics << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    diagnostics << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    diagnostics << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qdspin
