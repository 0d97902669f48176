#pragma once

#include "qdspin/units.hpp"

// Closed-form models for hole-spin initialization by exciton ionization:
// the Godden fidelity formula, the linear FSS-vs-field map, the optical
// Stark shift of the fine-structure splitting under a detuned CW drive, and
// the photocurrent noise-floor fidelity bound.

namespace qdspin {

enum class Polarization { H, V };

inline const char* to_string(Polarization p) {
  return p == Polarization::H ? "H" : "V";
}

/// Physical record of one quantum dot.
struct QuantumDotParams {
  Energy fss_zero;            ///< hbar*delta_FS at the reference condition
  Rate gamma_e;               ///< electron tunneling rate
  Rate gamma_h;               ///< hole tunneling rate
  Rate gamma_r = Rate::per_ps(1.0 / 700.0);  ///< radiative rate (default)
  double chi_e_uev_cm_per_kv = 0.0;  ///< FSS-field slope, ueV per kV/cm
  Field e_ref;                       ///< field at which fss_zero was taken
  Energy trion_binding = Energy::micro_ev(2500.0);
  Time t2_star = Time::ps(10000.0);  ///< extrinsic hole dephasing time

  /// Total exciton decay rate Gamma_X = Gamma_r + Gamma_e + Gamma_h.
  /// Always derived, never stored.
  Rate gamma_x() const {
    return Rate::per_ps(gamma_r.per_ps() + gamma_e.per_ps() +
                        gamma_h.per_ps());
  }

  void validate() const;
};

/// CW tuning-laser description. The drive couples the selected linear
/// exciton eigenstate to the biexciton, positively detuned by delta_cw.
struct CwDriveConfig {
  Polarization polarization = Polarization::V;
  Energy delta_cw_zero;               ///< bare detuning hbar*Delta_CW at I=0
  double a_dipole_mev2_um2_per_w = 0;  ///< squared dipole coupling constant
  double k_screen_ev_um2_per_w = 0;   ///< charge-screening blue-shift slope
  Intensity intensity;

  void validate() const;
};

struct FidelityValue {
  double value = 1.0;
  bool is_lower_bound = false;
};

/// Energy result that may have been clamped at zero (FSS enters the physics
/// only through its square; the linear/OSE maps can formally cross zero).
struct ClampedEnergy {
  Energy value;
  bool clamped = false;
};

/// Hole-spin initialization fidelity at zero magnetic field:
///   F = 1 - (1/2) * delta^2 / (delta^2 + (Gamma_X - Gamma_h)^2),
/// with delta = fss/hbar the exciton precession frequency.
/// Requires gamma_x > gamma_h (otherwise the hole would outlive feeding and
/// the formula is invalid).
FidelityValue fidelity_godden(Energy fss, Rate gamma_x, Rate gamma_h);

/// Linear FSS-vs-field map: fss_zero + chi_e * (e - e_ref), clamped at 0.
ClampedEnergy fss_at_field(const QuantumDotParams& qd, Field e);

/// Effective CW detuning hbar*Delta_CW(I) = delta_cw_zero - k * I.
/// Screening blue-shifts the transition toward the drive, eating detuning.
Energy delta_cw_at_intensity(const CwDriveConfig& cw);

/// Drive-strength energy scale hbar*Omega = sqrt(a * I).
Energy rabi_energy(const CwDriveConfig& cw);

/// Optical-Stark change of the FSS, signed:
///   delta_omega = (s/2) * (sqrt(Delta_CW^2 + (hbar*Omega)^2) - Delta_CW),
/// s = +1 for H (raises the upper eigenstate, FSS grows) and s = -1 for V
/// (raises the lower eigenstate, FSS shrinks). Valid only for positive
/// effective detuning; otherwise a domain error.
Energy ose_shift(const CwDriveConfig& cw);

/// FSS under the CW drive: fss_zero + ose_shift, clamped at 0.
ClampedEnergy fss_with_ose(Energy fss_zero, const CwDriveConfig& cw);

/// Godden fidelity evaluated at the OSE-shifted FSS. Reduces exactly to
/// fidelity_godden(qd.fss_zero, ...) at zero intensity.
FidelityValue fidelity_vs_intensity(const QuantumDotParams& qd,
                                    const CwDriveConfig& cw);

/// Noise-floor fidelity lower bound when the co-polarized peak is buried:
/// epsilon = sigma/sqrt(N) replaces the co amplitude,
/// F_lb = pc_cross / (pc_cross + epsilon).
FidelityValue fidelity_lower_bound(double pc_cross_pa, double noise_sigma_pa,
                                   int n_samples);

struct QubitTimescales {
  Time init_time;      ///< 1/Gamma_e
  Time hole_lifetime;  ///< 1/Gamma_h
  /// true when 2*T_h > T2*, i.e. pure dephasing (not hole tunneling)
  /// limits the qubit coherence.
  bool lifetime_target_met = false;
};

QubitTimescales qubit_timescales(const QuantumDotParams& qd);

}  // namespace qdspin
