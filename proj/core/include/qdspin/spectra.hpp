#pragma once

#include <cstdint>
#include <string>

#include "qdspin/dynamics.hpp"
#include "qdspin/models.hpp"
#include "qdspin/spectrum.hpp"
#include "qdspin/units.hpp"

// Synthesis of the measured observables (two-color photocurrent spectra and
// high-resolution CW line scans) with seeded Gaussian noise, plus the
// estimators that turn spectra back into fidelity numbers.

namespace qdspin {

enum class ProbePolarization { Co, Cross };

inline const char* to_string(ProbePolarization p) {
  return p == ProbePolarization::Co ? "co" : "cross";
}

struct SpectrumConfig {
  Energy pulse_fwhm = Energy::micro_ev(200.0);
  Energy trion_binding = Energy::micro_ev(2500.0);
  Time probe_delay = Time::ps(100.0);
  double noise_sigma_pa = 0.0;
  std::uint64_t rng_seed = 0;
  double pc_scale_pa = 10.0;  ///< photocurrent per unit hole population
  // Detuning grid; the defaults land both the trion peak and the
  // subtraction dip exactly on grid points.
  Energy x_min = Energy::micro_ev(-1000.0);
  Energy x_max = Energy::micro_ev(4000.0);
  int n_points = 501;

  void validate() const;
};

/// Two-color pump-probe photocurrent spectrum: a Gaussian trion peak at the
/// trion binding energy whose amplitude tracks the hole population the
/// probe addresses at the probe delay (co -> the error spin, cross -> the
/// initialized spin), and a negative dip at zero detuning from subtracting
/// the probe-only neutral-exciton peak.
Spectrum synth_two_color_spectrum(const Trajectory& traj,
                                  const SpectrumConfig& cfg,
                                  ProbePolarization probe);

struct FidelityEstimate {
  FidelityValue fidelity;
  double sigma = 0.0;       ///< 1-sigma uncertainty of the estimate
  double a_co = 0.0;        ///< fitted co-peak amplitude (pA)
  double a_co_sigma = 0.0;
  double a_cross = 0.0;     ///< fitted cross-peak amplitude (pA)
  double a_cross_sigma = 0.0;
  int n_window = 0;         ///< points inside the noise-floor window
  std::string method;       ///< "peak-ratio" or "noise-floor-bound"
};

/// Peak-amplitude fidelity estimator F = A_cross / (A_cross + A_co).
/// When the co peak is indistinguishable from noise (amplitude below twice
/// its own uncertainty), falls back to the noise-floor bound
/// epsilon = sigma/sqrt(N) over the points within one pulse FWHM of the
/// trion energy and flags the result as a lower bound.
FidelityEstimate extract_fidelity(const Spectrum& spec_co,
                                  const Spectrum& spec_cross,
                                  const SpectrumConfig& cfg);

struct CwLineConfig {
  Energy linewidth = Energy::micro_ev(40.0);  ///< Lorentzian FWHM
  Energy fss;
  double waveplate_zero_deg = 0.0;
  double amplitude_pa = 30.0;
  double noise_sigma_pa = 0.0;
  std::uint64_t rng_seed = 0;
  // Energy grid relative to the low-energy (V) exciton line.
  Energy x_min = Energy::micro_ev(-150.0);
  Energy x_max = Energy::micro_ev(150.0);
  int n_points = 301;

  void validate() const;
};

/// High-resolution CW photocurrent line: a Lorentzian of the configured
/// linewidth whose center sits at E_V + fss * sin^2(2 (angle - zero)) (the
/// half-wave plate rotates the polarization by twice its angle).
Spectrum synth_cw_line_scan(const CwLineConfig& cfg, double angle_deg);

}  // namespace qdspin
