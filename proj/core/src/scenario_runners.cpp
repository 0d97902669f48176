#include <algorithm>
#include <cmath>
#include <random>

#include "qdspin/dynamics.hpp"
#include "qdspin/errors.hpp"
#include "qdspin/fit.hpp"
#include "qdspin/interp.hpp"
#include "qdspin/models.hpp"
#include "qdspin/presets.hpp"
#include "qdspin/spectra.hpp"
#include "scenario_internal.hpp"

namespace qdspin::detail {
namespace {

constexpr double kVerifyTol = 1e-6;  // relative, closed form vs integrator

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                    std::uint32_t(stream), std::uint32_t(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<std::size_t> spread_indices(std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  if (n == 0 || k == 0) return out;
  k = std::min(k, n);
  for (std::size_t j = 0; j < k; ++j) {
    out.push_back(k == 1 ? 0 : j * (n - 1) / (k - 1));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct DotRates {
  double gamma_e = 0.021;
  double gamma_h = 0.0;
  double gamma_r = 0.0;

  Rate e() const { return Rate::per_ps(gamma_e); }
  Rate h() const { return Rate::per_ps(gamma_h); }
  Rate r() const { return Rate::per_ps(gamma_r); }
  double diff() const { return gamma_e + gamma_r; }  // Gamma_X - Gamma_h
};

DotRates parse_rates(ConfigReader& dot) {
  DotRates r;
  r.gamma_e = dot.get_quantity_or("gamma_e", Dim::Rate, 0.021);
  r.gamma_h = dot.get_quantity_or("gamma_h", Dim::Rate, 0.0);
  r.gamma_r = dot.get_quantity_or("gamma_r", Dim::Rate, 0.0);
  return r;
}

double closed_form_fidelity(double fss_uev, double gamma_diff) {
  return fidelity_godden(Energy::micro_ev(fss_uev),
                         Rate::per_ps(gamma_diff), Rate::per_ps(0.0))
      .value;
}

/// Beat-signal resampling onto ~n uniformly spread samples.
Spectrum resample(const Spectrum& dense, int n) {
  if (int(dense.size()) <= n) return dense;
  Spectrum out;
  out.meta = dense.meta;
  for (int j = 0; j < n; ++j) {
    const std::size_t i =
        std::size_t(std::llround(double(j) * double(dense.size() - 1) /
                                 double(n - 1)));
    out.x.push_back(dense.x[i]);
    out.y.push_back(dense.y[i]);
  }
  return out;
}

struct BeatFitOutcome {
  FitResult fit;
  double fss_recovered_uev = 0.0;
  double fss_sigma_uev = 0.0;
  double gamma_recovered = 0.0;
  bool identifiable = false;
  Spectrum noisy;
};

BeatFitOutcome fit_beat(const Spectrum& clean, double noise_frac,
                        std::uint64_t seed, std::uint64_t stream) {
  BeatFitOutcome out;
  out.noisy = clean;
  double peak = 0.0;
  for (double y : clean.y) peak = std::max(peak, std::abs(y));
  const double sigma = noise_frac * peak;
  if (sigma > 0.0) {
    auto rng = seeded_rng(seed, stream);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double& y : out.noisy.y) y += sigma * noise(rng);
    out.noisy.sigma.assign(out.noisy.size(), sigma);
  }
  out.fit = fit(model_damped_sine(), out.noisy);
  const double delta = std::abs(out.fit.value("delta"));
  const double delta_sigma = out.fit.uncertainty("delta");
  out.fss_recovered_uev =
      omega_to_energy(AngularFrequency::rad_per_ps(delta)).micro_ev();
  out.fss_sigma_uev =
      omega_to_energy(AngularFrequency::rad_per_ps(delta_sigma)).micro_ev();
  out.gamma_recovered = out.fit.value("gamma");
  // A frequency is only credible when at least one cycle fits the window
  // and the uncertainty does not swallow the value.
  const double span = clean.x.back() - clean.x.front();
  out.identifiable = out.fit.converged &&
                     delta > 2.0 * std::numbers::pi / span &&
                     delta_sigma < std::abs(delta);
  return out;
}

nlohmann::json verify_against_integrator(
    const std::vector<double>& axis, const std::vector<double>& closed,
    const std::function<double(std::size_t)>& oracle, std::size_t n_checks) {
  const std::vector<std::size_t> picks =
      spread_indices(axis.size(), std::max<std::size_t>(n_checks, 5));
  double worst = 0.0;
  for (std::size_t i : picks) {
    const double reference = oracle(i);
    const double rel =
        std::abs(closed[i] - reference) / std::max(reference, 1e-12);
    worst = std::max(worst, rel);
    if (rel > kVerifyTol) {
      throw NumericError(
          "verify: closed-form value " + format_double(closed[i]) +
          " deviates from the integrator value " + format_double(reference) +
          " by " + format_double(rel) + " (rel) at axis point " +
          format_double(axis[i]));
    }
  }
  nlohmann::json v;
  v["checked_points"] = picks.size();
  v["max_relative_deviation"] = worst;
  v["tolerance"] = kVerifyTol;
  return v;
}

}  // namespace

// Fidelity vs fine-structure splitting: the closed-form curve, integrator
// cross-check points and the per-dot markers.
ScenarioArtifacts run_fig3(ConfigReader& cfg, const RunContext& ctx) {
  const double gamma_diff = cfg.get_quantity_or("gamma_diff", Dim::Rate, 0.021);
  const double fss_min = cfg.get_quantity_or("fss_min", Dim::Energy, 0.0);
  const double fss_max = cfg.get_quantity_or("fss_max", Dim::Energy, 40.0);
  const int n_points = cfg.get_int_or("n_points", 161);
  int n_oracle = cfg.get_int_or("oracle_points", 9);
  if (n_points < 2) throw ConfigError(cfg.pointer("n_points"), "need >= 2");
  if (!(fss_max > fss_min) || fss_min < 0.0) {
    throw ConfigError(cfg.pointer("fss_max"),
                      "need 0 <= fss_min < fss_max");
  }
  if (ctx.options.verify) n_oracle = std::max(n_oracle, 5);

  struct Marker {
    std::string name;
    double fss;
    bool illustrative;
  };
  std::vector<Marker> markers;
  if (cfg.has("qd_markers")) {
    const nlohmann::json& arr = cfg.raw("qd_markers");
    if (!arr.is_array()) {
      throw ConfigError(cfg.pointer("qd_markers"), "expected an array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ConfigReader m(arr[i],
                     cfg.pointer("qd_markers") + "/" + std::to_string(i));
      Marker marker;
      marker.name = m.get_string("name");
      marker.fss = m.get_quantity("fss", Dim::Energy);
      marker.illustrative = m.get_bool_or("illustrative", false);
      m.done();
      markers.push_back(marker);
    }
  } else {
    // Only dots A, C and E have public splittings; B and D are placeholders
    // to sketch the five-dot spread.
    markers = {{"QD A", 2.01, false},
               {"QD B", 6.8, true},
               {"QD C", 13.2, false},
               {"QD D", 21.0, true},
               {"QD E", 31.2, false}};
  }

  ScenarioArtifacts art;
  art.table.columns = {"series", "label", "fss_ueV", "fidelity",
                       "illustrative"};
  const std::vector<double> axis = linspace(fss_min, fss_max, n_points);
  std::vector<double> curve;
  curve.reserve(axis.size());
  for (double fss : axis) {
    curve.push_back(closed_form_fidelity(fss, gamma_diff));
    art.table.add_raw_row({"curve", "", format_double(fss),
                           format_double(curve.back()), ""});
  }

  auto oracle_at = [&](std::size_t i) {
    QuantumDotParams qd{.fss_zero = Energy::micro_ev(axis[i]),
                        .gamma_e = Rate::per_ps(gamma_diff),
                        .gamma_h = Rate::per_ps(0.0),
                        .gamma_r = Rate::per_ps(0.0)};
    return integrate_steady_fidelity(qd).value;
  };
  std::vector<double> oracle_x, oracle_y;
  for (std::size_t i : spread_indices(axis.size(), std::size_t(n_oracle))) {
    oracle_x.push_back(axis[i]);
    oracle_y.push_back(oracle_at(i));
    art.table.add_raw_row({"oracle", "", format_double(axis[i]),
                           format_double(oracle_y.back()), ""});
  }

  std::vector<double> marker_x, marker_y;
  for (const Marker& m : markers) {
    marker_x.push_back(m.fss);
    marker_y.push_back(closed_form_fidelity(m.fss, gamma_diff));
    art.table.add_raw_row({"marker", m.name, format_double(m.fss),
                           format_double(marker_y.back()),
                           m.illustrative ? "1" : "0"});
  }

  if (ctx.options.verify) {
    art.extra_meta["verify"] = verify_against_integrator(
        axis, curve, oracle_at, std::size_t(n_oracle));
  }

  art.extra_meta["gamma_diff_per_ps"] = gamma_diff;
  nlohmann::json marker_meta = nlohmann::json::array();
  for (const Marker& m : markers) {
    marker_meta.push_back({{"name", m.name},
                           {"fss_ueV", m.fss},
                           {"illustrative", m.illustrative}});
  }
  art.extra_meta["qd_markers"] = marker_meta;

  SvgPlot plot("Initialization fidelity vs fine-structure splitting",
               "hbar*delta_FS (ueV)", "fidelity");
  plot.add_line(axis, curve, "closed form", "#c62828");
  plot.add_markers(oracle_x, oracle_y, "integrator", "#1565c0");
  plot.add_markers(marker_x, marker_y, "dots", "#2e7d32");
  art.plot = plot;
  return art;
}

// Fidelity, initialization time and hole lifetime across the DC field,
// with rates interpolated from a measured or synthetic table.
ScenarioArtifacts run_fig4(ConfigReader& cfg, const RunContext& ctx) {
  ConfigReader dot = cfg.object("dot");
  QuantumDotParams qd;
  qd.fss_zero = Energy::micro_ev(dot.get_quantity("fss_zero", Dim::Energy));
  qd.e_ref = Field::kv_per_cm(dot.get_quantity("e_ref", Dim::Field));
  qd.chi_e_uev_cm_per_kv = dot.get_quantity_or("chi_e", Dim::FssSlope, 0.0);
  const bool illustrative = dot.get_bool_or("illustrative", false);
  dot.done();

  const double gamma_r = cfg.get_quantity_or("gamma_r", Dim::Rate, 0.0);
  const double t2_star =
      cfg.get_quantity_or("t2_star", Dim::Time, 10000.0);

  RateTable table;
  std::string table_source;
  {
    ConfigReader rt = cfg.object("rate_table");
    if (rt.has("builtin")) {
      const std::string name = rt.get_string("builtin");
      if (name != "qd-a-like") {
        throw ConfigError(rt.pointer("builtin"),
                          "unknown builtin table '" + name + "'");
      }
      table = RateTable::builtin_qd_a_like();
      table_source = "builtin:" + name;
    } else if (rt.has("generator")) {
      ConfigReader gen = rt.object("generator");
      const double amp_e = gen.get_number("amp_e");
      const double barrier_e = gen.get_number("barrier_e");
      const double amp_h = gen.get_number("amp_h");
      const double barrier_h = gen.get_number("barrier_h");
      const double f_min = gen.get_quantity("field_min", Dim::Field);
      const double f_max = gen.get_quantity("field_max", Dim::Field);
      const int n_rows = gen.get_int_or("n_rows", 15);
      gen.done();
      table = RateTable::phenomenological(amp_e, barrier_e, amp_h, barrier_h,
                                          f_min, f_max, n_rows);
      table_source = "generator";
    } else if (rt.has("rows")) {
      const nlohmann::json& rows = rt.raw("rows");
      if (!rows.is_array()) {
        throw ConfigError(rt.pointer("rows"), "expected an array");
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        ConfigReader row(rows[i],
                         rt.pointer("rows") + "/" + std::to_string(i));
        table.field_kv_cm.push_back(row.get_quantity("field", Dim::Field));
        table.gamma_e_per_ps.push_back(row.get_quantity("gamma_e", Dim::Rate));
        table.gamma_h_per_ps.push_back(row.get_quantity("gamma_h", Dim::Rate));
        row.done();
      }
      table_source = "rows";
    } else {
      throw ConfigError(cfg.pointer("rate_table"),
                        "need one of: builtin, generator, rows");
    }
    rt.done();
  }
  try {
    table.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.pointer("rate_table"), e.what());
  }

  const double field_min =
      cfg.get_quantity_or("field_min", Dim::Field, table.field_kv_cm.front());
  const double field_max =
      cfg.get_quantity_or("field_max", Dim::Field, table.field_kv_cm.back());
  const int n_points = cfg.get_int_or("n_points", 57);
  if (n_points < 2) throw ConfigError(cfg.pointer("n_points"), "need >= 2");
  if (field_min < table.field_kv_cm.front() ||
      field_max > table.field_kv_cm.back() || !(field_max > field_min)) {
    throw ConfigError(cfg.pointer("field_min"),
                      "sweep range must lie inside the rate table (no "
                      "extrapolation)");
  }

  const PchipInterpolator ge_of_e(table.field_kv_cm, table.gamma_e_per_ps);
  const PchipInterpolator gh_of_e(table.field_kv_cm, table.gamma_h_per_ps);

  ScenarioArtifacts art;
  art.table.columns = {"field_kV_cm",     "fss_ueV",
                       "fss_clamped",     "gamma_e_per_ps",
                       "gamma_h_per_ps",  "init_time_ps",
                       "hole_lifetime_ps", "fidelity",
                       "lifetime_target_met"};
  const std::vector<double> axis = linspace(field_min, field_max, n_points);
  std::vector<double> fidelity, flags;
  std::vector<double> fss_values, ge_values, gh_values;
  for (double e : axis) {
    const double ge = ge_of_e(e);
    const double gh = gh_of_e(e);
    const ClampedEnergy fss = fss_at_field(qd, Field::kv_per_cm(e));
    const double f =
        fidelity_godden(fss.value, Rate::per_ps(ge + gh + gamma_r),
                        Rate::per_ps(gh))
            .value;
    const bool target_met = 2.0 / gh > t2_star;
    fidelity.push_back(f);
    flags.push_back(target_met ? 1.0 : 0.0);
    fss_values.push_back(fss.value.micro_ev());
    ge_values.push_back(ge);
    gh_values.push_back(gh);
    art.table.add_row({e, fss.value.micro_ev(), fss.clamped ? 1.0 : 0.0, ge,
                       gh, 1.0 / ge, 1.0 / gh, f, target_met ? 1.0 : 0.0});
  }

  if (ctx.options.verify) {
    auto oracle_at = [&](std::size_t i) {
      QuantumDotParams point = qd;
      point.gamma_e = Rate::per_ps(ge_values[i]);
      point.gamma_h = Rate::per_ps(gh_values[i]);
      point.gamma_r = Rate::per_ps(gamma_r);
      return integrate_steady_fidelity(point,
                                       Energy::micro_ev(fss_values[i]))
          .value;
    };
    art.extra_meta["verify"] =
        verify_against_integrator(axis, fidelity, oracle_at, 5);
  }

  art.extra_meta["dot"] = {{"fss_zero_ueV", qd.fss_zero.micro_ev()},
                           {"e_ref_kV_cm", qd.e_ref.kv_per_cm()},
                           {"chi_e_ueV_cm_per_kV", qd.chi_e_uev_cm_per_kv},
                           {"illustrative", illustrative}};
  art.extra_meta["gamma_r_per_ps"] = gamma_r;
  art.extra_meta["t2_star_ps"] = t2_star;
  art.extra_meta["rate_table"] = {{"source", table_source},
                                  {"rows", table.field_kv_cm.size()}};

  SvgPlot plot("Fidelity and lifetime target vs DC electric field",
               "field (kV/cm)", "fidelity");
  plot.add_line(axis, fidelity, "closed form", "#c62828");
  std::vector<double> flag_x, flag_y;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (flags[i] > 0.5) {
      flag_x.push_back(axis[i]);
      flag_y.push_back(fidelity[i]);
    }
  }
  plot.add_markers(flag_x, flag_y, "2*T_h > T2*", "#2e7d32");
  art.plot = plot;
  return art;
}

// FSS vs CW drive intensity for the built-in (or named) drive presets.
ScenarioArtifacts run_fig5b(ConfigReader& cfg, const RunContext&) {
  std::vector<std::string> preset_names = {"qd-c-fss-scan-v",
                                           "qd-c-fss-scan-h"};
  if (cfg.has("presets")) {
    const nlohmann::json& arr = cfg.raw("presets");
    if (!arr.is_array() || arr.empty()) {
      throw ConfigError(cfg.pointer("presets"),
                        "expected a non-empty array of preset names");
    }
    preset_names.clear();
    for (const auto& v : arr) {
      if (!v.is_string()) {
        throw ConfigError(cfg.pointer("presets"), "preset names are strings");
      }
      preset_names.push_back(v.get<std::string>());
    }
  }
  const double i_min =
      cfg.get_quantity_or("intensity_min", Dim::Intensity, 0.0);
  const double i_max =
      cfg.get_quantity_or("intensity_max", Dim::Intensity, 0.44);
  const int n_points = cfg.get_int_or("n_points", 45);
  if (n_points < 2) throw ConfigError(cfg.pointer("n_points"), "need >= 2");
  if (!(i_max > i_min) || i_min < 0.0) {
    throw ConfigError(cfg.pointer("intensity_max"),
                      "need 0 <= intensity_min < intensity_max");
  }

  ScenarioArtifacts art;
  art.table.columns = {"series",       "intensity_kW_cm2", "fss_ueV",
                       "delta_cw_ueV", "rabi_ueV",         "clamped"};
  SvgPlot plot("Fine-structure splitting vs CW drive intensity",
               "intensity (kW/cm^2)", "hbar*delta_FS (ueV)");
  const std::vector<double> axis = linspace(i_min, i_max, n_points);
  nlohmann::json preset_meta = nlohmann::json::array();
  int color_index = 0;
  for (const std::string& name : preset_names) {
    const OsePreset* preset = nullptr;
    try {
      preset = &find_preset(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cfg.pointer("presets"), e.what());
    }
    std::vector<double> fss_curve;
    for (double i_kw : axis) {
      const CwDriveConfig drive =
          preset->drive(Intensity::kw_per_cm2(i_kw));
      const ClampedEnergy fss = fss_with_ose(preset->fss_zero, drive);
      fss_curve.push_back(fss.value.micro_ev());
      art.table.add_raw_row(
          {name, format_double(i_kw), format_double(fss.value.micro_ev()),
           format_double(delta_cw_at_intensity(drive).micro_ev()),
           format_double(rabi_energy(drive).micro_ev()),
           fss.clamped ? "1" : "0"});
    }
    plot.add_line(axis, fss_curve, name,
                  color_index % 2 == 0 ? "#c62828" : "#1565c0");
    preset_meta.push_back(
        {{"name", preset->name},
         {"polarization", to_string(preset->polarization)},
         {"fss_zero_ueV", preset->fss_zero.micro_ev()},
         {"s", preset->s},
         {"a_meV2_um2_per_W", preset->a_dipole_mev2_um2_per_w},
         {"delta_cw_zero_ueV", preset->delta_cw_zero.micro_ev()},
         {"k_eV_um2_per_W", preset->k_screen_ev_um2_per_w}});
    ++color_index;
  }
  art.extra_meta["presets"] = preset_meta;
  // The dressed-state shift has no integrator analogue in this toolkit;
  // --verify records that explicitly instead of silently passing.
  art.extra_meta["verify"] = "not-applicable (no integrator analogue for "
                             "the dressed-state shift)";
  art.plot = plot;
  return art;
}

// Fidelity vs CW drive intensity with the fidelity-scan preset, optionally
// overlaid with end-to-end synthetic measurements.
ScenarioArtifacts run_fig5c(ConfigReader& cfg, const RunContext& ctx) {
  const std::string preset_name =
      cfg.get_string_or("preset", "qd-c-fidelity-scan");
  const OsePreset* preset = nullptr;
  try {
    preset = &find_preset(preset_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.pointer("preset"), e.what());
  }
  if (!preset->gamma_diff) {
    throw ConfigError(cfg.pointer("preset"),
                      "preset '" + preset_name +
                          "' carries no Gamma_X - Gamma_h; use a "
                          "fidelity-scan preset");
  }
  const double gamma_diff = preset->gamma_diff->per_ps();

  DotRates rates;
  rates.gamma_e = gamma_diff;
  if (cfg.has("dot_dynamics")) {
    ConfigReader dd = cfg.object("dot_dynamics");
    rates = parse_rates(dd);
    dd.done();
    if (std::abs(rates.diff() - gamma_diff) > 1e-12) {
      throw ConfigError(cfg.pointer("dot_dynamics"),
                        "gamma_e + gamma_r must equal the preset's "
                        "Gamma_X - Gamma_h = " +
                            format_double(gamma_diff));
    }
  }
  QuantumDotParams qd{.fss_zero = preset->fss_zero,
                      .gamma_e = rates.e(),
                      .gamma_h = rates.h(),
                      .gamma_r = rates.r()};
  qd.validate();

  const double i_min =
      cfg.get_quantity_or("intensity_min", Dim::Intensity, 0.0);
  const double i_max =
      cfg.get_quantity_or("intensity_max", Dim::Intensity, 0.3);
  const int n_points = cfg.get_int_or("n_points", 31);
  if (n_points < 2) throw ConfigError(cfg.pointer("n_points"), "need >= 2");
  if (!(i_max > i_min) || i_min < 0.0) {
    throw ConfigError(cfg.pointer("intensity_max"),
                      "need 0 <= intensity_min < intensity_max");
  }

  ScenarioArtifacts art;
  art.table.columns = {"series",   "intensity_kW_cm2",
                       "fss_ueV",  "fidelity",
                       "fidelity_sigma", "is_lower_bound"};
  const std::vector<double> axis = linspace(i_min, i_max, n_points);
  std::vector<double> curve, fss_curve;
  for (double i_kw : axis) {
    const CwDriveConfig drive = preset->drive(Intensity::kw_per_cm2(i_kw));
    const ClampedEnergy fss = fss_with_ose(preset->fss_zero, drive);
    const double f = fidelity_vs_intensity(qd, drive).value;
    curve.push_back(f);
    fss_curve.push_back(fss.value.micro_ev());
    art.table.add_raw_row({"model", format_double(i_kw),
                           format_double(fss.value.micro_ev()),
                           format_double(f), "", ""});
  }

  SvgPlot plot("Hole-spin fidelity vs CW drive intensity",
               "intensity (kW/cm^2)", "fidelity");
  plot.add_line(axis, curve, "model", "#c62828");

  if (cfg.has("overlay")) {
    ConfigReader ov = cfg.object("overlay");
    const int n_overlay = ov.get_int_or("n_points", 7);
    SpectrumConfig sc;
    sc.noise_sigma_pa =
        ov.get_quantity_or("noise_sigma", Dim::Photocurrent, 0.05);
    sc.pc_scale_pa = ov.get_quantity_or("pc_scale", Dim::Photocurrent, 10.0);
    sc.probe_delay =
        Time::ps(ov.get_quantity_or("probe_delay", Dim::Time, 1000.0));
    const double t_max =
        ov.get_quantity_or("t_max", Dim::Time, sc.probe_delay.ps() + 100.0);
    ov.done();
    if (n_overlay < 1) {
      throw ConfigError(cfg.pointer("overlay"), "need n_points >= 1");
    }

    std::vector<double> ox, oy, oerr;
    const std::vector<double> overlay_axis =
        linspace(i_min, i_max, n_overlay);
    for (int j = 0; j < n_overlay; ++j) {
      const double i_kw = overlay_axis[std::size_t(j)];
      const CwDriveConfig drive = preset->drive(Intensity::kw_per_cm2(i_kw));
      const ClampedEnergy fss = fss_with_ose(preset->fss_zero, drive);
      EvolutionSpec spec;
      spec.qd = qd;
      spec.fss_override = fss.value;
      const double fastest =
          std::max(std::abs(energy_to_omega(fss.value).rad_per_ps()),
                   qd.gamma_x().per_ps());
      spec.dt = Time::ps(std::min(0.02 / fastest, 1.0));
      spec.t_max = Time::ps(t_max);
      const Trajectory traj = evolve(spec);
      sc.rng_seed = ctx.seed + std::uint64_t(j);
      const Spectrum co =
          synth_two_color_spectrum(traj, sc, ProbePolarization::Co);
      const Spectrum cross =
          synth_two_color_spectrum(traj, sc, ProbePolarization::Cross);
      const FidelityEstimate est = extract_fidelity(co, cross, sc);
      ox.push_back(i_kw);
      oy.push_back(est.fidelity.value);
      oerr.push_back(2.0 * est.sigma);
      art.table.add_raw_row(
          {"synthetic", format_double(i_kw),
           format_double(fss.value.micro_ev()),
           format_double(est.fidelity.value), format_double(est.sigma),
           est.fidelity.is_lower_bound ? "1" : "0"});
    }
    plot.add_error_bars(ox, oy, oerr, "synthetic measurement (2 sigma)",
                        "#1565c0");
    art.extra_meta["overlay"] = {{"n_points", n_overlay},
                                 {"noise_sigma_pA", sc.noise_sigma_pa},
                                 {"probe_delay_ps", sc.probe_delay.ps()},
                                 {"seed", ctx.seed}};
  }

  if (ctx.options.verify) {
    auto oracle_at = [&](std::size_t i) {
      return integrate_steady_fidelity(
                 qd, Energy::micro_ev(fss_curve[i]))
          .value;
    };
    art.extra_meta["verify"] =
        verify_against_integrator(axis, curve, oracle_at, 5);
  }

  art.extra_meta["preset"] = {
      {"name", preset->name},
      {"polarization", to_string(preset->polarization)},
      {"fss_zero_ueV", preset->fss_zero.micro_ev()},
      {"s", preset->s},
      {"a_meV2_um2_per_W", preset->a_dipole_mev2_um2_per_w},
      {"delta_cw_zero_ueV", preset->delta_cw_zero.micro_ev()},
      {"k_eV_um2_per_W", preset->k_screen_ev_um2_per_w},
      {"gamma_diff_per_ps", gamma_diff}};
  art.plot = plot;
  return art;
}

// Exciton spin beats: evolve, resample, add noise, fit a damped sine and
// report the recovered precession parameters. With an intensity sweep the
// drive preset shifts the injected FSS per point.
ScenarioArtifacts run_beats(ConfigReader& cfg, const RunContext& ctx) {
  ConfigReader dot = cfg.object("dot");
  const double fss_uev = dot.get_quantity("fss", Dim::Energy);
  const DotRates rates = parse_rates(dot);
  dot.done();
  QuantumDotParams qd{.fss_zero = Energy::micro_ev(fss_uev),
                      .gamma_e = rates.e(),
                      .gamma_h = rates.h(),
                      .gamma_r = rates.r()};
  qd.validate();

  const double t_max = cfg.get_quantity_or("t_max", Dim::Time, 400.0);
  const double dt = cfg.get_quantity_or("dt", Dim::Time, 0.05);
  const int n_samples = cfg.get_int_or("n_samples", 200);
  const double noise_frac = cfg.get_number_or("noise_frac", 0.02);
  if (n_samples < 16) {
    throw ConfigError(cfg.pointer("n_samples"), "need >= 16 samples");
  }
  if (noise_frac < 0.0) {
    throw ConfigError(cfg.pointer("noise_frac"), "must be >= 0");
  }

  ScenarioArtifacts art;
  auto make_spec = [&](Energy fss) {
    EvolutionSpec spec;
    spec.qd = qd;
    spec.fss_override = fss;
    spec.t_max = Time::ps(t_max);
    spec.dt = Time::ps(dt);
    return spec;
  };

  if (!cfg.has("intensity_sweep")) {
    const Trajectory traj = evolve(make_spec(Energy::micro_ev(fss_uev)));
    const Spectrum clean = resample(beat_signal(traj), n_samples);
    const BeatFitOutcome outcome = fit_beat(clean, noise_frac, ctx.seed, 0);

    art.table.columns = {"time_ps", "signal", "signal_noisy", "fit"};
    std::vector<double> fit_curve(clean.size());
    const std::span<const double> p(outcome.fit.values.data(),
                                    outcome.fit.values.size());
    const FitModel model = model_damped_sine();
    for (std::size_t i = 0; i < clean.size(); ++i) {
      fit_curve[i] = model.eval(clean.x[i], p);
      art.table.add_row(
          {clean.x[i], clean.y[i], outcome.noisy.y[i], fit_curve[i]});
    }
    art.extra_meta["injected"] = {
        {"fss_ueV", fss_uev}, {"gamma_x_per_ps", qd.gamma_x().per_ps()}};
    art.extra_meta["fit"] =
        nlohmann::json::parse(fit_report_json(outcome.fit));
    art.extra_meta["recovered"] = {
        {"fss_ueV", outcome.fss_recovered_uev},
        {"fss_sigma_ueV", outcome.fss_sigma_uev},
        {"gamma_x_per_ps", outcome.gamma_recovered},
        {"frequency_identifiable", outcome.identifiable}};
    art.extra_meta["noise_frac"] = noise_frac;

    SvgPlot plot("Exciton spin beats", "time (ps)", "n_co - n_cross");
    plot.add_markers(outcome.noisy.x, outcome.noisy.y, "synthetic data",
                     "#9e9e9e");
    plot.add_line(clean.x, clean.y, "signal", "#1565c0");
    plot.add_line(clean.x, fit_curve, "damped-sine fit", "#c62828");
    art.plot = plot;
    return art;
  }

  ConfigReader sweep = cfg.object("intensity_sweep");
  const std::string preset_name =
      sweep.get_string_or("preset", "qd-c-fss-scan-v");
  const double i_min =
      sweep.get_quantity_or("intensity_min", Dim::Intensity, 0.03);
  const double i_max =
      sweep.get_quantity_or("intensity_max", Dim::Intensity, 0.44);
  const int n_points = sweep.get_int_or("n_points", 8);
  sweep.done();
  const OsePreset* preset = nullptr;
  try {
    preset = &find_preset(preset_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.pointer("intensity_sweep"), e.what());
  }
  if (n_points < 2 || !(i_max > i_min) || i_min < 0.0) {
    throw ConfigError(cfg.pointer("intensity_sweep"), "bad sweep range");
  }

  art.table.columns = {"intensity_kW_cm2",      "fss_injected_ueV",
                       "fss_recovered_ueV",     "fss_recovered_sigma_ueV",
                       "gamma_recovered_per_ps", "identifiable"};
  std::vector<double> axis = linspace(i_min, i_max, n_points);
  std::vector<double> injected, recovered;
  for (std::size_t j = 0; j < axis.size(); ++j) {
    const CwDriveConfig drive =
        preset->drive(Intensity::kw_per_cm2(axis[j]));
    const ClampedEnergy fss = fss_with_ose(preset->fss_zero, drive);
    const Trajectory traj = evolve(make_spec(fss.value));
    const Spectrum clean = resample(beat_signal(traj), n_samples);
    const BeatFitOutcome outcome =
        fit_beat(clean, noise_frac, ctx.seed, j + 1);
    injected.push_back(fss.value.micro_ev());
    recovered.push_back(outcome.fss_recovered_uev);
    art.table.add_row({axis[j], fss.value.micro_ev(),
                       outcome.fss_recovered_uev, outcome.fss_sigma_uev,
                       outcome.gamma_recovered,
                       outcome.identifiable ? 1.0 : 0.0});
  }
  art.extra_meta["preset"] = preset->name;
  art.extra_meta["noise_frac"] = noise_frac;

  SvgPlot plot("Beat frequency under the CW drive", "intensity (kW/cm^2)",
               "hbar*delta_FS (ueV)");
  plot.add_line(axis, injected, "injected", "#1565c0");
  plot.add_markers(axis, recovered, "recovered from beats", "#c62828");
  art.plot = plot;
  return art;
}

// Two-color spectrum synthesis plus fidelity extraction.
ScenarioArtifacts run_spectrum(ConfigReader& cfg, const RunContext& ctx) {
  ConfigReader dot = cfg.object("dot");
  const double fss_uev = dot.get_quantity("fss", Dim::Energy);
  const DotRates rates = parse_rates(dot);
  dot.done();
  QuantumDotParams qd{.fss_zero = Energy::micro_ev(fss_uev),
                      .gamma_e = rates.e(),
                      .gamma_h = rates.h(),
                      .gamma_r = rates.r()};
  qd.validate();

  PumpSpec pump;
  if (cfg.has("pump")) {
    ConfigReader p = cfg.object("pump");
    const std::string pol = p.get_string_or("polarization", "sigma+");
    if (pol == "sigma+") {
      pump.polarization = PumpPolarization::SigmaPlus;
    } else if (pol == "sigma-") {
      pump.polarization = PumpPolarization::SigmaMinus;
    } else {
      throw ConfigError(p.pointer("polarization"),
                        "expected \"sigma+\" or \"sigma-\"");
    }
    pump.pulse_area_rad =
        p.get_number_or("pulse_area_pi", 1.0) * std::numbers::pi;
    p.done();
  }

  SpectrumConfig sc;
  sc.rng_seed = ctx.seed;
  if (cfg.has("spectrum")) {
    ConfigReader s = cfg.object("spectrum");
    sc.pulse_fwhm =
        Energy::micro_ev(s.get_quantity_or("pulse_fwhm", Dim::Energy, 200.0));
    sc.trion_binding = Energy::micro_ev(
        s.get_quantity_or("trion_binding", Dim::Energy, 2500.0));
    sc.probe_delay =
        Time::ps(s.get_quantity_or("probe_delay", Dim::Time, 100.0));
    sc.noise_sigma_pa =
        s.get_quantity_or("noise_sigma", Dim::Photocurrent, 0.0);
    sc.pc_scale_pa = s.get_quantity_or("pc_scale", Dim::Photocurrent, 10.0);
    sc.x_min = Energy::micro_ev(s.get_quantity_or("x_min", Dim::Energy,
                                                  -1000.0));
    sc.x_max =
        Energy::micro_ev(s.get_quantity_or("x_max", Dim::Energy, 4000.0));
    sc.n_points = s.get_int_or("n_points", 501);
    s.done();
  }

  EvolutionSpec spec;
  spec.qd = qd;
  spec.pump = pump;
  const double t_max =
      cfg.get_quantity_or("t_max", Dim::Time, sc.probe_delay.ps() + 100.0);
  const double fastest = std::max(
      std::abs(energy_to_omega(qd.fss_zero).rad_per_ps()),
      qd.gamma_x().per_ps());
  spec.t_max = Time::ps(t_max);
  spec.dt = Time::ps(
      cfg.get_quantity_or("dt", Dim::Time, std::min(0.02 / fastest, 1.0)));
  const Trajectory traj = evolve(spec);

  const Spectrum co = synth_two_color_spectrum(traj, sc, ProbePolarization::Co);
  const Spectrum cross =
      synth_two_color_spectrum(traj, sc, ProbePolarization::Cross);

  ScenarioArtifacts art;
  art.table.columns = {"detuning_ueV", "pc_co_pA", "pc_cross_pA"};
  if (co.has_sigma()) art.table.columns.push_back("pc_sigma_pA");
  for (std::size_t i = 0; i < co.size(); ++i) {
    std::vector<double> row{co.x[i], co.y[i], cross.y[i]};
    if (co.has_sigma()) row.push_back(co.sigma[i]);
    art.table.add_row(row);
  }

  const FidelityEstimate est = extract_fidelity(co, cross, sc);
  art.extra_meta["extraction"] = {
      {"fidelity", est.fidelity.value},
      {"sigma", est.sigma},
      {"is_lower_bound", est.fidelity.is_lower_bound},
      {"method", est.method},
      {"n_window", est.n_window},
      {"a_co_pA", est.a_co},
      {"a_cross_pA", est.a_cross}};
  art.extra_meta["probe_delay_ps"] = sc.probe_delay.ps();
  try {
    art.extra_meta["steady_fidelity"] = integrate_steady_fidelity(qd).value;
  } catch (const NumericError&) {
    // Slow-decay configuration: the steady ratio is not reachable; the
    // extraction above still reports the ratio at the probe delay.
  }

  SvgPlot plot("Two-color photocurrent spectra", "detuning (ueV)",
               "photocurrent (pA)");
  plot.add_line(co.x, co.y, "co-polarized probe", "#212121");
  plot.add_line(cross.x, cross.y, "cross-polarized probe", "#c62828");
  art.plot = plot;
  return art;
}

// Generic curve fit of a named model against a CSV data file.
ScenarioArtifacts run_fit(ConfigReader& cfg, const RunContext&) {
  const std::string model_name = cfg.get_string("model");
  FitModel model;
  if (model_name == "damped-sine") {
    model = model_damped_sine();
  } else if (model_name == "lorentzian") {
    model = model_lorentzian();
  } else if (model_name == "gaussian") {
    model = model_gaussian();
  } else if (model_name == "sin2") {
    model = model_sin2();
  } else if (model_name == "linear") {
    model = model_linear();
  } else if (model_name == "ose-fss") {
    ConfigReader mc = cfg.object("model_config");
    const std::string pol = mc.get_string("polarization");
    if (pol != "H" && pol != "V") {
      throw ConfigError(mc.pointer("polarization"), "expected \"H\" or \"V\"");
    }
    const double fss0 = mc.get_quantity("fss_zero", Dim::Energy);
    const double dcw0 = mc.get_quantity("delta_cw_zero", Dim::Energy);
    mc.done();
    model = model_ose_fss(pol == "H" ? Polarization::H : Polarization::V,
                          Energy::micro_ev(fss0), Energy::micro_ev(dcw0));
  } else {
    throw ConfigError(cfg.pointer("model"),
                      "unknown model '" + model_name + "'");
  }

  const std::string data_path = cfg.get_string("data");
  const Spectrum data = spectrum_from_csv(read_text_file(data_path));

  std::vector<double> init;
  if (cfg.has("init")) {
    const nlohmann::json& arr = cfg.raw("init");
    if (!arr.is_array()) {
      throw ConfigError(cfg.pointer("init"), "expected an array of numbers");
    }
    for (const auto& v : arr) {
      if (!v.is_number()) {
        throw ConfigError(cfg.pointer("init"), "expected an array of numbers");
      }
      init.push_back(v.get<double>());
    }
    if (init.size() != model.n_params()) {
      throw ConfigError(cfg.pointer("init"),
                        "expected " + std::to_string(model.n_params()) +
                            " values for model '" + model_name + "'");
    }
  }

  const FitResult result = fit(model, data, init);

  ScenarioArtifacts art;
  art.table.columns = {"x", "y", "fit", "residual"};
  const std::span<const double> p(result.values.data(), result.values.size());
  std::vector<double> fit_curve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    fit_curve[i] = model.eval(data.x[i], p);
    art.table.add_row({data.x[i], data.y[i], fit_curve[i],
                       data.y[i] - fit_curve[i]});
  }
  art.extra_meta["fit"] = nlohmann::json::parse(fit_report_json(result));
  art.extra_meta["data_file"] = data_path;

  SvgPlot plot("Fit: " + model_name, "x", "y");
  plot.add_markers(data.x, data.y, "data", "#1565c0");
  plot.add_line(data.x, fit_curve, "fit", "#c62828");
  art.plot = plot;
  return art;
}

}  // namespace qdspin::detail
