#include "qdspin/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qdspin {

void QuantumDotParams::validate() const {
  if (!(gamma_e.per_ps() > gamma_h.per_ps())) {
    throw std::invalid_argument(
        "QuantumDotParams: gamma_e must exceed gamma_h (electron tunneling "
        "is the fast channel)");
  }
  if (!std::isfinite(fss_zero.micro_ev()) ||
      !std::isfinite(chi_e_uev_cm_per_kv)) {
    throw std::invalid_argument("QuantumDotParams: non-finite parameter");
  }
}

void CwDriveConfig::validate() const {
  if (!(a_dipole_mev2_um2_per_w >= 0.0)) {
    throw std::invalid_argument("CwDriveConfig: a_dipole must be >= 0");
  }
  if (!std::isfinite(delta_cw_zero.micro_ev()) ||
      !std::isfinite(k_screen_ev_um2_per_w)) {
    throw std::invalid_argument("CwDriveConfig: non-finite parameter");
  }
}

FidelityValue fidelity_godden(Energy fss, Rate gamma_x, Rate gamma_h) {
  const double g = gamma_x.per_ps() - gamma_h.per_ps();
  if (!(g > 0.0)) {
    throw std::domain_error(
        "fidelity_godden: requires gamma_x > gamma_h; the hole would "
        "outlive the exciton feeding it");
  }
  const double delta = energy_to_omega(fss).rad_per_ps();
  const double d2 = delta * delta;
  return {1.0 - 0.5 * d2 / (d2 + g * g), false};
}

ClampedEnergy fss_at_field(const QuantumDotParams& qd, Field e) {
  const double fss = qd.fss_zero.micro_ev() +
                     qd.chi_e_uev_cm_per_kv *
                         (e.kv_per_cm() - qd.e_ref.kv_per_cm());
  if (fss < 0.0) return {Energy::micro_ev(0.0), true};
  return {Energy::micro_ev(fss), false};
}

Energy delta_cw_at_intensity(const CwDriveConfig& cw) {
  cw.validate();
  // k is in eV*um^2/W, the intensity in W/um^2; the product is eV.
  const double screen_uev =
      cw.k_screen_ev_um2_per_w * cw.intensity.w_per_um2() * 1e6;
  return Energy::micro_ev(cw.delta_cw_zero.micro_ev() - screen_uev);
}

Energy rabi_energy(const CwDriveConfig& cw) {
  cw.validate();
  // a*I is in meV^2; take the square root in meV.
  const double rabi_mev =
      std::sqrt(cw.a_dipole_mev2_um2_per_w * cw.intensity.w_per_um2());
  return Energy::milli_ev(rabi_mev);
}

Energy ose_shift(const CwDriveConfig& cw) {
  const double dcw = delta_cw_at_intensity(cw).micro_ev();
  if (!(dcw > 0.0)) {
    throw std::domain_error(
        "ose_shift: effective CW detuning is not positive; the dressed-state "
        "model only applies in the positive-detuning regime");
  }
  const double rabi = rabi_energy(cw).micro_ev();
  const double magnitude = 0.5 * (std::hypot(dcw, rabi) - dcw);
  const double s = cw.polarization == Polarization::H ? 1.0 : -1.0;
  return Energy::micro_ev(s * magnitude);
}

ClampedEnergy fss_with_ose(Energy fss_zero, const CwDriveConfig& cw) {
  const double fss = fss_zero.micro_ev() + ose_shift(cw).micro_ev();
  if (fss < 0.0) return {Energy::micro_ev(0.0), true};
  return {Energy::micro_ev(fss), false};
}

FidelityValue fidelity_vs_intensity(const QuantumDotParams& qd,
                                    const CwDriveConfig& cw) {
  const ClampedEnergy fss = fss_with_ose(qd.fss_zero, cw);
  return fidelity_godden(fss.value, qd.gamma_x(), qd.gamma_h);
}

FidelityValue fidelity_lower_bound(double pc_cross_pa, double noise_sigma_pa,
                                   int n_samples) {
  if (!(pc_cross_pa > 0.0)) {
    throw std::invalid_argument(
        "fidelity_lower_bound: cross-polarized amplitude must be positive");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("fidelity_lower_bound: need n_samples >= 2");
  }
  if (!(noise_sigma_pa >= 0.0)) {
    throw std::invalid_argument("fidelity_lower_bound: sigma must be >= 0");
  }
  const double epsilon = noise_sigma_pa / std::sqrt(double(n_samples));
  return {pc_cross_pa / (pc_cross_pa + epsilon), true};
}

QubitTimescales qubit_timescales(const QuantumDotParams& qd) {
  if (!(qd.gamma_e.per_ps() > 0.0) || !(qd.gamma_h.per_ps() > 0.0)) {
    throw std::invalid_argument(
        "qubit_timescales: rates must be strictly positive");
  }
  QubitTimescales out;
  out.init_time = Time::ps(1.0 / qd.gamma_e.per_ps());
  out.hole_lifetime = Time::ps(1.0 / qd.gamma_h.per_ps());
  out.lifetime_target_met = 2.0 * out.hole_lifetime.ps() > qd.t2_star.ps();
  return out;
}

}  // namespace qdspin
