#include "qdspin/spectra.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qdspin/errors.hpp"
#include "qdspin/fit.hpp"

namespace qdspin {
namespace {

const double kFourLn2 = 4.0 * std::numbers::ln2;

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                    std::uint32_t(stream), std::uint32_t(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[std::size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
  }
  return out;
}

double gaussian_peak(double x, double center, double fwhm) {
  const double d = x - center;
  return std::exp(-kFourLn2 * d * d / (fwhm * fwhm));
}

struct PeakFit {
  double amplitude = 0.0;
  double sigma = std::numeric_limits<double>::infinity();
  bool usable = false;
};

// Gaussian peak fit restricted to a window around the expected trion line,
// initialized from the known instrument response.
PeakFit fit_trion_peak(const Spectrum& spec, const SpectrumConfig& cfg) {
  const double center = cfg.trion_binding.micro_ev();
  const double fwhm = cfg.pulse_fwhm.micro_ev();
  Spectrum window;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (std::abs(spec.x[i] - center) <= 3.0 * fwhm) {
      window.x.push_back(spec.x[i]);
      window.y.push_back(spec.y[i]);
      if (spec.has_sigma()) window.sigma.push_back(spec.sigma[i]);
    }
  }
  PeakFit out;
  if (window.size() < 6) return out;
  double y_edge = 0.5 * (window.y.front() + window.y.back());
  double y_center = window.y[window.size() / 2];
  const std::vector<double> init{y_center - y_edge, center, fwhm, y_edge};
  try {
    const FitResult res = fit(model_gaussian(), window, init);
    if (!res.converged) return out;
    out.amplitude = res.value("amplitude");
    out.sigma = res.uncertainty("amplitude");
    out.usable = true;
  } catch (const NumericError&) {
    // Singular fit on featureless data: report unusable, caller falls back
    // to the noise-floor estimate.
  }
  return out;
}

}  // namespace

void SpectrumConfig::validate() const {
  if (!(pulse_fwhm.micro_ev() > 0.0)) {
    throw std::invalid_argument("SpectrumConfig: pulse_fwhm must be > 0");
  }
  if (!(noise_sigma_pa >= 0.0)) {
    throw std::invalid_argument("SpectrumConfig: noise_sigma must be >= 0");
  }
  if (n_points < 8) {
    throw std::invalid_argument("SpectrumConfig: need at least 8 points");
  }
  if (!(x_max.micro_ev() > x_min.micro_ev())) {
    throw std::invalid_argument("SpectrumConfig: x_max must exceed x_min");
  }
}

void CwLineConfig::validate() const {
  if (!(linewidth.micro_ev() > 0.0)) {
    throw std::invalid_argument("CwLineConfig: linewidth must be > 0");
  }
  if (!(noise_sigma_pa >= 0.0)) {
    throw std::invalid_argument("CwLineConfig: noise_sigma must be >= 0");
  }
  if (n_points < 8) {
    throw std::invalid_argument("CwLineConfig: need at least 8 points");
  }
}

Spectrum synth_two_color_spectrum(const Trajectory& traj,
                                  const SpectrumConfig& cfg,
                                  ProbePolarization probe) {
  cfg.validate();
  const SystemState& at_probe = traj.at_time(cfg.probe_delay);

  const double hole_pop = probe == ProbePolarization::Cross
                              ? traj.hole_target(at_probe)
                              : traj.hole_error(at_probe);
  // The probe-only reference spectrum carries a full-strength neutral
  // exciton peak; the two-pulse spectrum only responds at zero detuning
  // when the dot is empty. Their subtraction leaves a negative dip.
  const double dip = at_probe.p_empty - 1.0;

  Spectrum s;
  s.x = linspace(cfg.x_min.micro_ev(), cfg.x_max.micro_ev(), cfg.n_points);
  s.y.resize(s.x.size());

  auto rng = seeded_rng(cfg.rng_seed,
                        probe == ProbePolarization::Co ? 0x636f : 0x63726f);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double fwhm = cfg.pulse_fwhm.micro_ev();
  const double trion = cfg.trion_binding.micro_ev();
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    double y = hole_pop * gaussian_peak(s.x[i], trion, fwhm) +
               dip * gaussian_peak(s.x[i], 0.0, fwhm);
    y *= cfg.pc_scale_pa;
    if (cfg.noise_sigma_pa > 0.0) y += cfg.noise_sigma_pa * noise(rng);
    s.y[i] = y;
  }
  if (cfg.noise_sigma_pa > 0.0) {
    s.sigma.assign(s.x.size(), cfg.noise_sigma_pa);
  }
  s.meta = {"detuning", "ueV", "photocurrent", "pA",
            std::string("two-color synthetic spectrum, ") + to_string(probe) +
                "-polarized probe"};
  return s;
}

FidelityEstimate extract_fidelity(const Spectrum& spec_co,
                                  const Spectrum& spec_cross,
                                  const SpectrumConfig& cfg) {
  cfg.validate();
  spec_co.validate();
  spec_cross.validate();
  if (spec_co.x != spec_cross.x) {
    throw std::invalid_argument(
        "extract_fidelity: spectra must share the same x grid");
  }

  const PeakFit cross = fit_trion_peak(spec_cross, cfg);
  if (!cross.usable || !(cross.amplitude > 0.0) ||
      cross.amplitude < 2.0 * cross.sigma) {
    throw NumericError(
        "extract_fidelity: no cross-polarized trion peak detected; nothing "
        "was initialized");
  }

  FidelityEstimate out;
  out.a_cross = cross.amplitude;
  out.a_cross_sigma = cross.sigma;

  const PeakFit co = fit_trion_peak(spec_co, cfg);
  const bool co_detected = co.usable && co.amplitude > 2.0 * co.sigma;
  if (co_detected) {
    out.a_co = co.amplitude;
    out.a_co_sigma = co.sigma;
    const double total = cross.amplitude + co.amplitude;
    out.fidelity = {cross.amplitude / total, false};
    // Ratio-of-amplitudes error propagation.
    out.sigma = std::sqrt(co.amplitude * co.amplitude * cross.sigma *
                              cross.sigma +
                          cross.amplitude * cross.amplitude * co.sigma *
                              co.sigma) /
                (total * total);
    out.method = "peak-ratio";
    return out;
  }

  // Co peak indistinguishable from noise: noise-floor lower bound from the
  // scatter of the co spectrum within one pulse FWHM of the trion energy.
  const double trion = cfg.trion_binding.micro_ev();
  const double fwhm = cfg.pulse_fwhm.micro_ev();
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < spec_co.size(); ++i) {
    if (std::abs(spec_co.x[i] - trion) <= fwhm) {
      sum += spec_co.y[i];
      sum2 += spec_co.y[i] * spec_co.y[i];
      ++n;
    }
  }
  if (n < 2) {
    throw NumericError(
        "extract_fidelity: too few points near the trion energy for the "
        "noise-floor bound");
  }
  const double var = (sum2 - sum * sum / double(n)) / double(n - 1);
  const double sd = std::sqrt(std::max(var, 0.0));
  const FidelityValue bound = fidelity_lower_bound(cross.amplitude, sd, n);
  out.fidelity = bound;
  out.n_window = n;
  out.a_co = sd / std::sqrt(double(n));  // the epsilon estimate
  out.a_co_sigma = 0.0;
  // Uncertainty dominated by the cross-amplitude fit.
  const double total = cross.amplitude + out.a_co;
  out.sigma = out.a_co * cross.sigma / (total * total);
  out.method = "noise-floor-bound";
  return out;
}

Spectrum synth_cw_line_scan(const CwLineConfig& cfg, double angle_deg) {
  cfg.validate();
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double sin_arg =
      std::sin(2.0 * (angle_deg - cfg.waveplate_zero_deg) * kDeg);
  const double center = cfg.fss.micro_ev() * sin_arg * sin_arg;

  Spectrum s;
  s.x = linspace(cfg.x_min.micro_ev(), cfg.x_max.micro_ev(), cfg.n_points);
  s.y.resize(s.x.size());
  // One independent noise stream per waveplate angle.
  const auto stream = std::uint64_t(std::llround(angle_deg * 1000.0));
  auto rng = seeded_rng(cfg.rng_seed, stream);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double hw2 =
      0.25 * cfg.linewidth.micro_ev() * cfg.linewidth.micro_ev();
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double d = s.x[i] - center;
    double y = cfg.amplitude_pa * hw2 / (d * d + hw2);
    if (cfg.noise_sigma_pa > 0.0) y += cfg.noise_sigma_pa * noise(rng);
    s.y[i] = y;
  }
  if (cfg.noise_sigma_pa > 0.0) s.sigma.assign(s.x.size(), cfg.noise_sigma_pa);
  s.meta = {"energy relative to the V exciton line", "ueV", "photocurrent",
            "pA", "CW line scan synthetic spectrum"};
  return s;
}

}  // namespace qdspin
