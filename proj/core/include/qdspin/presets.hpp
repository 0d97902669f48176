#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdspin/models.hpp"

namespace qdspin {

/// One row of the built-in CW-drive parameter tables. `s` mirrors the table
/// column (+1 for H, -1 for V); production code derives the sign from the
/// polarization, and load-time validation checks the two agree.
struct OsePreset {
  std::string name;
  Polarization polarization;
  Energy fss_zero;
  int s = 0;
  double a_dipole_mev2_um2_per_w = 0.0;
  Energy delta_cw_zero;
  double k_screen_ev_um2_per_w = 0.0;
  /// Gamma_X - Gamma_h, only present in the fidelity-scan table.
  std::optional<Rate> gamma_diff;

  CwDriveConfig drive(Intensity intensity) const {
    return CwDriveConfig{polarization, delta_cw_zero, a_dipole_mev2_um2_per_w,
                         k_screen_ev_um2_per_w, intensity};
  }
};

/// The raw embedded JSON preset tables (column-for-column).
std::string_view presets_json();

/// All built-in presets, parsed and validated.
const std::vector<OsePreset>& ose_presets();

/// Lookup by name ("qd-c-fss-scan-h", "qd-c-fss-scan-v",
/// "qd-c-fidelity-scan"); throws std::invalid_argument on unknown names.
const OsePreset& find_preset(std::string_view name);

}  // namespace qdspin
