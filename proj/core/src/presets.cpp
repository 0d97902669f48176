#include "qdspin/presets.hpp"

#include <mutex>
#include <stdexcept>

#include "json.hpp"

namespace qdspin {
namespace {

// Measured CW-drive fit parameters for the FSS-vs-intensity scans (first
// table) and the fidelity-vs-intensity scan (second table), kept as data so
// downstream tooling can consume the same rows the code does.
constexpr std::string_view kPresetsJson = R"json({
  "fss_vs_intensity_fits": {
    "columns": ["name", "polarization", "fss_zero_ueV", "s",
                "a_meV2_um2_per_W", "delta_cw_zero_ueV", "k_eV_um2_per_W"],
    "rows": [
      ["qd-c-fss-scan-h", "H", 13.2, 1, 275.0, 76.6, 8.4],
      ["qd-c-fss-scan-v", "V", 13.2, -1, 275.0, 63.4, 8.4]
    ]
  },
  "fidelity_vs_intensity_fits": {
    "columns": ["name", "polarization", "fss_zero_ueV", "s",
                "a_meV2_um2_per_W", "delta_cw_zero_ueV", "k_eV_um2_per_W",
                "gamma_diff_per_ps"],
    "rows": [
      ["qd-c-fidelity-scan", "V", 13.2, -1, 275.0, 33.4, 3.5, 0.021]
    ]
  }
})json";

Polarization parse_polarization(const std::string& s) {
  if (s == "H") return Polarization::H;
  if (s == "V") return Polarization::V;
  throw std::invalid_argument("presets: unknown polarization '" + s + "'");
}

OsePreset parse_row(const nlohmann::json& row, bool with_gamma) {
  OsePreset p;
  p.name = row.at(0).get<std::string>();
  p.polarization = parse_polarization(row.at(1).get<std::string>());
  p.fss_zero = Energy::micro_ev(row.at(2).get<double>());
  p.s = row.at(3).get<int>();
  p.a_dipole_mev2_um2_per_w = row.at(4).get<double>();
  p.delta_cw_zero = Energy::micro_ev(row.at(5).get<double>());
  p.k_screen_ev_um2_per_w = row.at(6).get<double>();
  if (with_gamma) p.gamma_diff = Rate::per_ps(row.at(7).get<double>());

  const int expected_s = p.polarization == Polarization::H ? 1 : -1;
  if (p.s != expected_s) {
    throw std::logic_error("presets: sign column disagrees with polarization");
  }
  return p;
}

std::vector<OsePreset> load_presets() {
  const nlohmann::json tables = nlohmann::json::parse(kPresetsJson);
  std::vector<OsePreset> out;
  for (const auto& row : tables.at("fss_vs_intensity_fits").at("rows")) {
    out.push_back(parse_row(row, false));
  }
  for (const auto& row : tables.at("fidelity_vs_intensity_fits").at("rows")) {
    out.push_back(parse_row(row, true));
  }
  return out;
}

}  // namespace

std::string_view presets_json() { return kPresetsJson; }

const std::vector<OsePreset>& ose_presets() {
  static const std::vector<OsePreset> presets = load_presets();
  return presets;
}

const OsePreset& find_preset(std::string_view name) {
  for (const OsePreset& p : ose_presets()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace qdspin
