#include "qdspin/fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "json.hpp"
#include "qdspin/errors.hpp"

namespace qdspin {
namespace {

Eigen::VectorXd residuals(const FitModel& model, const Spectrum& data,
                          const Eigen::VectorXd& p) {
  const std::span<const double> params(p.data(), size_t(p.size()));
  Eigen::VectorXd r(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = data.has_sigma() ? data.sigma[i] : 1.0;
    r[long(i)] = (data.y[i] - model.eval(data.x[i], params)) / w;
  }
  return r;
}

// J_ij = d r_i / d p_j = -(1/sigma_i) df/dp_j
Eigen::MatrixXd jacobian(const FitModel& model, const Spectrum& data,
                         const Eigen::VectorXd& p) {
  const std::size_t np = model.n_params();
  Eigen::MatrixXd jac(data.size(), np);
  std::vector<double> grad(np);
  if (model.jacobian) {
    const std::span<const double> params(p.data(), size_t(p.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
      model.jacobian(data.x[i], params, grad);
      const double w = data.has_sigma() ? data.sigma[i] : 1.0;
      for (std::size_t j = 0; j < np; ++j) jac(long(i), long(j)) = -grad[j] / w;
    }
    return jac;
  }
  // Central finite differences.
  Eigen::VectorXd pj = p;
  for (std::size_t j = 0; j < np; ++j) {
    const double h = std::max(1e-7 * std::abs(p[long(j)]), 1e-9);
    pj[long(j)] = p[long(j)] + h;
    const Eigen::VectorXd rp = residuals(model, data, pj);
    pj[long(j)] = p[long(j)] - h;
    const Eigen::VectorXd rm = residuals(model, data, pj);
    pj[long(j)] = p[long(j)];
    jac.col(long(j)) = (rp - rm) / (2.0 * h);
  }
  return jac;
}

std::vector<std::vector<double>> to_nested(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(size_t(m.rows()),
                                       std::vector<double>(size_t(m.cols())));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out[size_t(i)][size_t(j)] = m(i, j);
  return out;
}

}  // namespace

double FitResult::value(std::string_view param_name) const {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name == param_name) return values[i];
  }
  throw std::invalid_argument("FitResult: no parameter named '" +
                              std::string(param_name) + "'");
}

double FitResult::uncertainty(std::string_view param_name) const {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name == param_name) return uncertainties[i];
  }
  throw std::invalid_argument("FitResult: no parameter named '" +
                              std::string(param_name) + "'");
}

FitResult fit(const FitModel& model, const Spectrum& data,
              std::span<const double> init, const FitOptions& options) {
  data.validate();
  const std::size_t np = model.n_params();
  if (data.size() <= np) {
    throw std::invalid_argument("fit: need more data points than parameters");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data.y[i])) {
      throw std::invalid_argument("fit: non-finite y value");
    }
    if (data.has_sigma() && !(data.sigma[i] > 0.0)) {
      throw std::invalid_argument("fit: sigma values must be > 0");
    }
  }

  Eigen::VectorXd p(np);
  if (!init.empty()) {
    if (init.size() != np) {
      throw std::invalid_argument("fit: initial guess has wrong length");
    }
    for (std::size_t j = 0; j < np; ++j) p[long(j)] = init[j];
  } else if (model.initial_guess) {
    const std::vector<double> guess = model.initial_guess(data);
    for (std::size_t j = 0; j < np; ++j) p[long(j)] = guess[j];
  } else {
    throw std::invalid_argument("fit: model '" + model.name +
                                "' has no initial-guess heuristic; supply "
                                "starting values");
  }

  Eigen::VectorXd r = residuals(model, data, p);
  double cost = r.squaredNorm();
  double lambda = options.lambda_init;
  bool converged = false;
  int iter = 0;

  for (; iter < options.max_iter; ++iter) {
    const Eigen::MatrixXd jac = jacobian(model, data, p);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;

    // Marquardt scaling: damp along diag(JtJ); parameters the data does not
    // constrain (zero column) get unit scale so the system stays solvable.
    Eigen::VectorXd damping = jtj.diagonal();
    for (long j = 0; j < damping.size(); ++j) {
      if (!(damping[j] > 0.0)) damping[j] = 1.0;
    }

    bool accepted = false;
    for (int tries = 0; tries < 32; ++tries) {
      Eigen::MatrixXd normal = jtj;
      normal.diagonal() += lambda * damping;
      const Eigen::VectorXd step = normal.ldlt().solve(-jtr);
      if (!step.allFinite()) {
        throw NumericError("fit: singular normal equations for model '" +
                           model.name + "'");
      }
      const Eigen::VectorXd p_try = p + step;
      const Eigen::VectorXd r_try = residuals(model, data, p_try);
      const double cost_try = r_try.squaredNorm();
      if (std::isfinite(cost_try) && cost_try <= cost) {
        const double rel_step = step.norm() / (p.norm() + 1e-300);
        const double rel_cost = (cost - cost_try) / (cost + 1e-300);
        p = p_try;
        r = r_try;
        cost = cost_try;
        lambda = std::max(lambda * 0.3, 1e-14);
        accepted = true;
        if (rel_step < options.step_tol || rel_cost < options.cost_tol) {
          converged = true;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (converged || !accepted) {
      converged = converged || !accepted;  // stuck at a minimum: converged
      ++iter;
      break;
    }
  }

  if (model.canonicalize) {
    std::vector<double> values(p.data(), p.data() + np);
    model.canonicalize(values);
    for (std::size_t j = 0; j < np; ++j) p[long(j)] = values[j];
    r = residuals(model, data, p);
    cost = r.squaredNorm();
  }

  FitResult out;
  out.model = model.name;
  out.params = model.params;
  out.values.assign(p.data(), p.data() + np);
  out.n_iter = iter;
  out.converged = converged;

  const double dof = double(data.size() - np);
  out.chi2_reduced = cost / dof;

  const Eigen::MatrixXd jac = jacobian(model, data, p);
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  Eigen::MatrixXd cov;
  if (lu.isInvertible()) {
    cov = lu.inverse();
  } else {
    // Report a pseudo-covariance with damped unconstrained directions
    // rather than failing the whole fit after convergence.
    Eigen::MatrixXd reg = jtj;
    reg.diagonal().array() += 1e-12 * (jtj.diagonal().maxCoeff() + 1.0);
    cov = reg.inverse();
  }
  if (!data.has_sigma()) {
    cov *= out.chi2_reduced;
    out.covariance_scaled = true;
  }
  out.covariance = to_nested(cov);
  out.uncertainties.resize(np);
  for (std::size_t j = 0; j < np; ++j) {
    out.uncertainties[j] = std::sqrt(std::max(cov(long(j), long(j)), 0.0));
  }
  return out;
}

std::string fit_report_json(const FitResult& result) {
  nlohmann::json j;
  j["model"] = result.model;
  nlohmann::json params = nlohmann::json::array();
  for (std::size_t i = 0; i < result.params.size(); ++i) {
    params.push_back({{"name", result.params[i].name},
                      {"unit", result.params[i].unit},
                      {"value", result.values[i]},
                      {"uncertainty", result.uncertainties[i]}});
  }
  j["parameters"] = params;
  j["covariance"] = result.covariance;
  j["chi2_reduced"] = result.chi2_reduced;
  j["converged"] = result.converged;
  j["iterations"] = result.n_iter;
  j["covariance_scaled_by_chi2"] = result.covariance_scaled;
  return j.dump(2);
}

std::string fit_report_text(const FitResult& result) {
  std::ostringstream os;
  os << "fit: " << result.model
     << (result.converged ? " (converged" : " (NOT converged") << " in "
     << result.n_iter << " iterations, chi2_red = " << result.chi2_reduced
     << ")\n";
  for (std::size_t i = 0; i < result.params.size(); ++i) {
    os << "  " << result.params[i].name << " = " << result.values[i] << " +- "
       << result.uncertainties[i];
    if (!result.params[i].unit.empty()) os << " " << result.params[i].unit;
    os << "\n";
  }
  return os.str();
}

}  // namespace qdspin
