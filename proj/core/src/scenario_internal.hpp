#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "config_reader.hpp"
#include "json.hpp"
#include "qdspin/io.hpp"
#include "qdspin/scenario.hpp"
#include "qdspin/svg.hpp"

namespace qdspin::detail {

struct ScenarioArtifacts {
  DataTable table;
  std::optional<SvgPlot> plot;
  nlohmann::json extra_meta = nlohmann::json::object();
};

/// Shared context: resolved options plus the effective RNG seed
/// (CLI override > config > 0).
struct RunContext {
  const RunOptions& options;
  std::uint64_t seed = 0;
};

std::vector<double> linspace(double lo, double hi, int n);

ScenarioArtifacts run_fig3(ConfigReader& cfg, const RunContext& ctx);
ScenarioArtifacts run_fig4(ConfigReader& cfg, const RunContext& ctx);
ScenarioArtifacts run_fig5b(ConfigReader& cfg, const RunContext& ctx);
ScenarioArtifacts run_fig5c(ConfigReader& cfg, const RunContext& ctx);
ScenarioArtifacts run_beats(ConfigReader& cfg, const RunContext& ctx);
ScenarioArtifacts run_spectrum(ConfigReader& cfg, const RunContext& ctx);
ScenarioArtifacts run_fit(ConfigReader& cfg, const RunContext& ctx);

}  // namespace qdspin::detail
