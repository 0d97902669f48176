#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qdspin/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "qdspin: simulation and analysis of optically initialized "
      "quantum-dot hole-spin qubits"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool verify = false;
  bool no_svg = false;

  const std::vector<std::pair<std::string, std::string>> scenarios = {
      {"fig3", "fidelity vs fine-structure splitting"},
      {"fig4", "fidelity, initialization time and hole lifetime vs DC field"},
      {"fig5b", "fine-structure splitting vs CW drive intensity"},
      {"fig5c", "fidelity vs CW drive intensity"},
      {"beats", "exciton spin beats and damped-sine fits"},
      {"spectrum", "two-color spectrum synthesis and fidelity extraction"},
      {"fit", "fit a named model to a CSV data file"},
  };
  for (const auto& [name, description] : scenarios) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config, "JSON scenario configuration file")
        ->required();
    sub->add_option("--out-dir", out_dir, "output directory (default: .)");
    sub->add_option("--seed", seed, "override the config's RNG seed");
    sub->add_flag("--verify", verify,
                  "re-check closed-form sweep values against the integrator");
    sub->add_option("--format", format, "data file format (default: csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--no-svg", no_svg, "skip the SVG plot output");
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  qdspin::RunOptions options;
  options.out_dir = out_dir;
  options.format = format;
  options.verify = verify;
  options.svg = !no_svg;
  options.expect_scenario = sub->get_name();
  if (sub->count("--seed") > 0) options.seed = seed;

  return qdspin::run_scenario_file(config, options, std::cout);
}
