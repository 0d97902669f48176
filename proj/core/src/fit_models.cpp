#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qdspin/fit.hpp"

namespace qdspin {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
const double kFourLn2 = 4.0 * std::numbers::ln2;
// Detuning floor keeping the OSE fit inside the positive-detuning domain
// while the optimizer explores large screening slopes.
constexpr double kDetuningFloor = 1e-6;

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Dominant discrete-spectrum peak of the detrended data, half-bin
// oversampled with parabolic refinement. Works on non-uniform grids.
double dominant_frequency(const Spectrum& data, double mean_y,
                          std::complex<double>* coefficient = nullptr) {
  const double span = data.x.back() - data.x.front();
  const std::size_t n_candidates = std::min<std::size_t>(data.size() * 2, 1024);
  double best_mag = -1.0;
  std::size_t best_k = 1;
  std::vector<double> mags(n_candidates + 1, 0.0);
  std::vector<std::complex<double>> coeffs(n_candidates + 1);
  for (std::size_t k = 1; k <= n_candidates; ++k) {
    const double omega = std::numbers::pi * double(k) / span;
    std::complex<double> c{0.0, 0.0};
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double t = data.x[i] - data.x.front();
      c += (data.y[i] - mean_y) * std::polar(1.0, -omega * t);
    }
    mags[k] = std::abs(c);
    coeffs[k] = c;
    if (mags[k] > best_mag) {
      best_mag = mags[k];
      best_k = k;
    }
  }
  double k_refined = double(best_k);
  if (best_k > 1 && best_k < n_candidates) {
    const double ym = mags[best_k - 1], y0 = mags[best_k], yp = mags[best_k + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) k_refined += 0.5 * (ym - yp) / denom;
  }
  if (coefficient) *coefficient = coeffs[best_k];
  return std::numbers::pi * k_refined / span;
}

}  // namespace

FitModel model_damped_sine() {
  FitModel m;
  m.name = "damped-sine";
  m.params = {{"amplitude", ""},
              {"gamma", "1/ps"},
              {"delta", "rad/ps"},
              {"phase", "rad"},
              {"offset", ""}};
  m.eval = [](double t, std::span<const double> p) {
    return p[0] * std::exp(-p[1] * t) * std::cos(p[2] * t + p[3]) + p[4];
  };
  m.jacobian = [](double t, std::span<const double> p, std::span<double> g) {
    const double env = std::exp(-p[1] * t);
    const double arg = p[2] * t + p[3];
    const double c = std::cos(arg), s = std::sin(arg);
    g[0] = env * c;
    g[1] = -t * p[0] * env * c;
    g[2] = -t * p[0] * env * s;
    g[3] = -p[0] * env * s;
    g[4] = 1.0;
  };
  m.initial_guess = [](const Spectrum& data) {
    const double c0 = mean(data.y);
    double a0 = 0.0;
    for (double y : data.y) a0 = std::max(a0, std::abs(y - c0));
    std::complex<double> coeff;
    const double delta0 = dominant_frequency(data, c0, &coeff);
    // Envelope decay from the RMS ratio of the two data halves.
    const std::size_t half = data.size() / 2;
    double rms1 = 0.0, rms2 = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double z = data.y[i] - c0;
      (i < half ? rms1 : rms2) += z * z;
    }
    rms1 = std::sqrt(rms1 / double(half));
    rms2 = std::sqrt(rms2 / double(data.size() - half));
    const double span = data.x.back() - data.x.front();
    double gamma0 = 1.0 / span;
    if (rms1 > 0.0 && rms2 > 0.0 && rms1 > rms2) {
      gamma0 = 2.0 / span * std::log(rms1 / rms2);
    }
    return std::vector<double>{a0, gamma0, delta0, std::arg(coeff), c0};
  };
  return m;
}

FitModel model_lorentzian() {
  FitModel m;
  m.name = "lorentzian";
  m.params = {
      {"amplitude", ""}, {"center", ""}, {"fwhm", ""}, {"offset", ""}};
  m.eval = [](double x, std::span<const double> p) {
    const double hw2 = 0.25 * p[2] * p[2];
    const double u = (x - p[1]) * (x - p[1]);
    return p[0] * hw2 / (u + hw2) + p[3];
  };
  m.jacobian = [](double x, std::span<const double> p, std::span<double> g) {
    const double hw2 = 0.25 * p[2] * p[2];
    const double d = x - p[1];
    const double u = d * d;
    const double den = u + hw2;
    g[0] = hw2 / den;
    g[1] = p[0] * hw2 * 2.0 * d / (den * den);
    g[2] = p[0] * 0.5 * p[2] * u / (den * den);
    g[3] = 1.0;
  };
  m.initial_guess = [](const Spectrum& data) {
    // Positive-peak heuristic: center at the maximum, width from the
    // half-maximum crossings.
    const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
    const double c0 = *lo;
    const double a0 = *hi - *lo;
    const std::size_t imax = std::size_t(hi - data.y.begin());
    const double x0 = data.x[imax];
    const double half = c0 + 0.5 * a0;
    double left = data.x.front(), right = data.x.back();
    for (std::size_t i = imax; i-- > 0;) {
      if (data.y[i] < half) {
        left = data.x[i];
        break;
      }
    }
    for (std::size_t i = imax + 1; i < data.size(); ++i) {
      if (data.y[i] < half) {
        right = data.x[i];
        break;
      }
    }
    double w0 = right - left;
    if (!(w0 > 0.0)) w0 = (data.x.back() - data.x.front()) / 4.0;
    return std::vector<double>{a0, x0, w0, c0};
  };
  return m;
}

FitModel model_gaussian() {
  FitModel m = model_lorentzian();  // same parameterization and heuristics
  m.name = "gaussian";
  m.eval = [](double x, std::span<const double> p) {
    const double d = x - p[1];
    return p[0] * std::exp(-kFourLn2 * d * d / (p[2] * p[2])) + p[3];
  };
  m.jacobian = [](double x, std::span<const double> p, std::span<double> g) {
    const double d = x - p[1];
    const double w2 = p[2] * p[2];
    const double e = std::exp(-kFourLn2 * d * d / w2);
    g[0] = e;
    g[1] = p[0] * e * 2.0 * kFourLn2 * d / w2;
    g[2] = p[0] * e * 2.0 * kFourLn2 * d * d / (w2 * p[2]);
    g[3] = 1.0;
  };
  return m;
}

FitModel model_sin2() {
  FitModel m;
  m.name = "sin2";
  m.params = {{"amplitude", ""},
              {"frequency", "per deg"},
              {"theta0", "deg"},
              {"offset", ""}};
  m.eval = [](double theta, std::span<const double> p) {
    const double s = std::sin(p[1] * (theta - p[2]) * kDeg);
    return p[0] * s * s + p[3];
  };
  m.jacobian = [](double theta, std::span<const double> p,
                  std::span<double> g) {
    const double arg = p[1] * (theta - p[2]) * kDeg;
    const double s = std::sin(arg);
    const double sin2arg = std::sin(2.0 * arg);
    g[0] = s * s;
    g[1] = p[0] * sin2arg * (theta - p[2]) * kDeg;
    g[2] = -p[0] * sin2arg * p[1] * kDeg;
    g[3] = 1.0;
  };
  m.initial_guess = [](const Spectrum& data) {
    const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
    const double f0 = 2.0;  // half-wave plate rotates polarization by 2*theta
    double theta0 = data.x[std::size_t(lo - data.y.begin())];
    theta0 = std::fmod(theta0, 90.0 / f0);
    if (theta0 < 0.0) theta0 += 90.0 / f0;
    return std::vector<double>{*hi - *lo, f0, theta0, *lo};
  };
  // Phase degeneracy tie-break: theta0 in [0, 90/f). Uses the exact
  // symmetries theta0 -> theta0 + 180/f and
  // (A, theta0, c) -> (-A, theta0 - 90/f, c + A).
  m.canonicalize = [](std::vector<double>& p) {
    if (p[1] < 0.0) {  // sin^2 is even in the argument
      p[1] = -p[1];
      p[2] = -p[2];
    }
    if (p[1] == 0.0) return;
    const double quarter = 90.0 / p[1];
    p[2] = std::fmod(p[2], 2.0 * quarter);
    if (p[2] < 0.0) p[2] += 2.0 * quarter;
    if (p[2] >= quarter) {
      p[2] -= quarter;
      p[3] += p[0];
      p[0] = -p[0];
    }
  };
  return m;
}

FitModel model_linear() {
  FitModel m;
  m.name = "linear";
  m.params = {{"slope", ""}, {"intercept", ""}};
  m.eval = [](double x, std::span<const double> p) { return p[0] * x + p[1]; };
  m.jacobian = [](double x, std::span<const double>, std::span<double> g) {
    g[0] = x;
    g[1] = 1.0;
  };
  m.initial_guess = [](const Spectrum& data) {
    // Closed-form unweighted least squares.
    const double n = double(data.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      sx += data.x[i];
      sy += data.y[i];
      sxx += data.x[i] * data.x[i];
      sxy += data.x[i] * data.y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    return std::vector<double>{slope, (sy - slope * sx) / n};
  };
  return m;
}

FitModel model_ose_fss(Polarization polarization, Energy fss_zero,
                       Energy delta_cw_zero) {
  FitModel m;
  m.name = "ose-fss";
  m.params = {{"a_dipole", "meV^2 um^2/W"}, {"k_screen", "eV um^2/W"}};
  const double sign = polarization == Polarization::H ? 1.0 : -1.0;
  const double fss0 = fss_zero.micro_ev();
  const double dcw0 = delta_cw_zero.micro_ev();
  // x axis in kW/cm^2.
  m.eval = [sign, fss0, dcw0](double i_kw_cm2, std::span<const double> p) {
    const double iw = i_kw_cm2 * 1e-5;  // W/um^2
    const double dcw = std::max(dcw0 - p[1] * iw * 1e6, kDetuningFloor);
    const double rabi2 = std::max(p[0], 0.0) * iw * 1e6;  // ueV^2
    const double shift = 0.5 * sign * (std::sqrt(dcw * dcw + rabi2) - dcw);
    return std::max(fss0 + shift, 0.0);
  };
  m.jacobian = [sign, fss0, dcw0](double i_kw_cm2, std::span<const double> p,
                                  std::span<double> g) {
    const double iw = i_kw_cm2 * 1e-5;
    const double dcw_raw = dcw0 - p[1] * iw * 1e6;
    const double dcw = std::max(dcw_raw, kDetuningFloor);
    const double rabi2 = std::max(p[0], 0.0) * iw * 1e6;
    const double root = std::sqrt(dcw * dcw + rabi2);
    const double value = fss0 + 0.5 * sign * (root - dcw);
    if (value <= 0.0) {
      g[0] = g[1] = 0.0;
      return;
    }
    g[0] = p[0] > 0.0 ? sign * iw * 1e6 / (4.0 * root) : 0.0;
    if (dcw_raw > kDetuningFloor) {
      g[1] = 0.5 * sign * iw * 1e6 * (1.0 - dcw / root);
    } else {
      g[1] = 0.0;
    }
  };
  m.initial_guess = [sign, fss0, dcw0](const Spectrum& data) {
    // Invert the dressed-state shift at the strongest-drive point with the
    // screening slope assumed zero; the fit refines both.
    double a0 = 1.0;
    const double iw = data.x.back() * 1e-5;
    if (iw > 0.0) {
      const double shift = sign * (data.y.back() - fss0);
      const double mag = std::max(shift, 1e-3);
      a0 = std::max(4.0 * mag * (dcw0 + mag) * 1e-6 / iw, 1e-3);
    }
    return std::vector<double>{a0, 0.0};
  };
  return m;
}

}  // namespace qdspin
