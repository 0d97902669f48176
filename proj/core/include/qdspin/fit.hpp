#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qdspin/models.hpp"
#include "qdspin/spectrum.hpp"

// Damped nonlinear least squares (Levenberg-Marquardt) with Jacobian-based
// covariance, plus the model functions used throughout the toolkit:
// exponentially damped sine, Lorentzian, Gaussian, sin^2, linear and the
// optical-Stark FSS-vs-intensity curve.

namespace qdspin {

struct FitParamSpec {
  std::string name;
  std::string unit;
};

struct FitModel {
  std::string name;
  std::vector<FitParamSpec> params;
  /// f(x; p)
  std::function<double(double, std::span<const double>)> eval;
  /// df/dp into `grad` (one entry per parameter); empty -> finite differences
  std::function<void(double, std::span<const double>, std::span<double>)>
      jacobian;
  /// Data-driven starting point; empty -> caller must supply `init`.
  std::function<std::vector<double>(const Spectrum&)> initial_guess;
  /// Applied to the final parameters before the covariance is evaluated.
  /// Must be an exact symmetry of the model (used to pick a canonical
  /// representative among degenerate parameterizations).
  std::function<void(std::vector<double>&)> canonicalize;

  std::size_t n_params() const { return params.size(); }
};

struct FitOptions {
  int max_iter = 200;
  double lambda_init = 1e-3;
  double step_tol = 1e-10;  ///< relative step size termination
  double cost_tol = 1e-12;  ///< relative cost change termination
};

struct FitResult {
  std::string model;
  std::vector<FitParamSpec> params;
  std::vector<double> values;
  std::vector<double> uncertainties;            ///< sqrt(diag(covariance))
  std::vector<std::vector<double>> covariance;  ///< from the Jacobian
  double chi2_reduced = 0.0;
  bool converged = false;
  int n_iter = 0;
  /// true when the data had no per-point sigma and the covariance was
  /// scaled by the reduced chi^2.
  bool covariance_scaled = false;

  double value(std::string_view param_name) const;
  double uncertainty(std::string_view param_name) const;
};

/// Minimizes sum(((y - f(x; p)) / sigma)^2). Blends gradient-descent and
/// Gauss-Newton steps with an adaptive damping factor. Non-convergence
/// after max_iter returns converged = false; singular normal equations
/// throw NumericError.
FitResult fit(const FitModel& model, const Spectrum& data,
              std::span<const double> init = {},
              const FitOptions& options = {});

/// A exp(-gamma t) cos(delta t + phi) + c.
FitModel model_damped_sine();
/// A (w/2)^2 / ((x-x0)^2 + (w/2)^2) + c, w the FWHM.
FitModel model_lorentzian();
/// A exp(-4 ln2 (x-x0)^2 / w^2) + c, w the FWHM.
FitModel model_gaussian();
/// A sin^2(f (theta - theta0)) + c, theta in degrees; theta0 normalized
/// into [0, 90/f).
FitModel model_sin2();
/// m x + b.
FitModel model_linear();
/// FSS vs intensity (kW/cm^2) with the dipole constant a (meV^2 um^2/W)
/// and screening slope k (eV um^2/W) free; polarization, zero-intensity
/// FSS and bare detuning fixed.
FitModel model_ose_fss(Polarization polarization, Energy fss_zero,
                       Energy delta_cw_zero);

std::string fit_report_json(const FitResult& result);
std::string fit_report_text(const FitResult& result);

}  // namespace qdspin
