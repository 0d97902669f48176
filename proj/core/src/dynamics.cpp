#include "qdspin/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qdspin/errors.hpp"

namespace qdspin {
namespace {

constexpr double kTraceTolPerStep = 1e-9;
constexpr double kPositivityTol = -1e-10;
constexpr double kStepGuard = 0.05;

// Flattened state for the integrator:
// [x_plus, x_minus, Re coh, Im coh, p_empty, p_hole_up, p_hole_down]
using Vec7 = std::array<double, 7>;

Vec7 pack(const SystemState& s) {
  return {s.x_plus,  s.x_minus,   s.x_coh.real(), s.x_coh.imag(),
          s.p_empty, s.p_hole_up, s.p_hole_down};
}

SystemState unpack(const Vec7& v, double t) {
  SystemState s;
  s.time_ps = t;
  s.x_plus = v[0];
  s.x_minus = v[1];
  s.x_coh = {v[2], v[3]};
  s.p_empty = v[4];
  s.p_hole_up = v[5];
  s.p_hole_down = v[6];
  return s;
}

struct RateSet {
  double delta;    // FSS precession, rad/ps
  double gamma_x;  // total exciton decay
  double gamma_e;  // electron tunneling (hole feeding)
  double gamma_h;  // hole tunneling
  double gamma_r;  // radiative recombination
};

// Coherent part: H = (hbar*delta/2) sigma_x on the exciton doublet.
// Dissipative part: uniform exciton decay at Gamma_X; spin-conserving hole
// feeding X(sigma+)->h(down), X(sigma-)->h(up) at Gamma_e; the Gamma_r and
// Gamma_h exciton channels route to empty; holes empty at Gamma_h.
Vec7 derivative(const Vec7& v, const RateSet& r) {
  const double x_p = v[0], x_m = v[1], cr = v[2], ci = v[3];
  const double p_hu = v[5], p_hd = v[6];
  Vec7 d;
  d[0] = -r.delta * ci - r.gamma_x * x_p;
  d[1] = r.delta * ci - r.gamma_x * x_m;
  d[2] = -r.gamma_x * cr;
  d[3] = -0.5 * r.delta * (x_m - x_p) - r.gamma_x * ci;
  d[4] = (r.gamma_r + r.gamma_h) * (x_p + x_m) + r.gamma_h * (p_hu + p_hd);
  d[5] = r.gamma_e * x_m - r.gamma_h * p_hu;
  d[6] = r.gamma_e * x_p - r.gamma_h * p_hd;
  return d;
}

Vec7 axpy(const Vec7& a, double h, const Vec7& b) {
  Vec7 out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + h * b[i];
  return out;
}

Vec7 rk4_step(const Vec7& v, double dt, const RateSet& r) {
  const Vec7 k1 = derivative(v, r);
  const Vec7 k2 = derivative(axpy(v, 0.5 * dt, k1), r);
  const Vec7 k3 = derivative(axpy(v, 0.5 * dt, k2), r);
  const Vec7 k4 = derivative(axpy(v, dt, k3), r);
  Vec7 out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = v[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Rotation of the given pulse area on the {empty <-> selected exciton}
// pair. Only reached with no empty<->exciton coherence present (single
// pump from a diagonal state), so populations mix classically with
// cos^2/sin^2 weights; the off-doublet coherence the pulse creates decouples
// from every reported observable and is dropped.
void apply_pump(Vec7& v, const PumpSpec& pump) {
  const double c2 = std::pow(std::cos(0.5 * pump.pulse_area_rad), 2);
  const double s2 = 1.0 - c2;
  const std::size_t x_idx =
      pump.polarization == PumpPolarization::SigmaPlus ? 0 : 1;
  const double p0 = v[4];
  const double x = v[x_idx];
  v[4] = c2 * p0 + s2 * x;
  v[x_idx] = c2 * x + s2 * p0;
}

void check_state(const Vec7& v, double t, int step) {
  const double trace = v[0] + v[1] + v[4] + v[5] + v[6];
  if (std::abs(trace - 1.0) > kTraceTolPerStep) {
    std::ostringstream msg;
    msg << "evolve: trace drifted to " << trace << " at t=" << t
        << " ps (step " << step << ")";
    throw NumericError(msg.str());
  }
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{4},
                        std::size_t{5}, std::size_t{6}}) {
    if (v[i] < kPositivityTol) {
      std::ostringstream msg;
      msg << "evolve: population " << i << " lost positivity (" << v[i]
          << ") at t=" << t << " ps (step " << step << ")";
      throw NumericError(msg.str());
    }
  }
  // Coherence bounded by the populations it connects (up to roundoff).
  const double coh2 = v[2] * v[2] + v[3] * v[3];
  if (coh2 > v[0] * v[1] + 1e-9) {
    std::ostringstream msg;
    msg << "evolve: exciton coherence exceeds positivity bound at t=" << t
        << " ps (step " << step << ")";
    throw NumericError(msg.str());
  }
}

}  // namespace

void PumpSpec::validate() const {
  if (!(pulse_area_rad >= 0.0 && pulse_area_rad <= 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("PumpSpec: pulse area must be in [0, 2*pi]");
  }
}

void EvolutionSpec::validate() const {
  qd.validate();
  pump.validate();
  if (!(dt.ps() > 0.0)) {
    throw std::invalid_argument("EvolutionSpec: dt must be > 0");
  }
  if (!(t_max.ps() > 0.0)) {
    throw std::invalid_argument("EvolutionSpec: t_max must be > 0");
  }
  if (sample_stride < 1) {
    throw std::invalid_argument("EvolutionSpec: sample_stride must be >= 1");
  }
  const double delta = std::abs(energy_to_omega(fss()).rad_per_ps());
  const double fastest = std::max(delta, qd.gamma_x().per_ps());
  if (dt.ps() * fastest > kStepGuard * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "EvolutionSpec: dt*max(delta_FS, Gamma_X) = " << dt.ps() * fastest
        << " exceeds the resolution guard " << kStepGuard;
    throw NumericError(msg.str());
  }
}

Trajectory::Trajectory(std::vector<SystemState> states, PumpSpec pump)
    : states_(std::move(states)), pump_(pump) {
  if (states_.empty()) {
    throw std::invalid_argument("Trajectory: no states");
  }
  if (states_.front().time_ps != 0.0) {
    throw std::invalid_argument("Trajectory: first state must be at t = 0");
  }
  for (std::size_t i = 1; i < states_.size(); ++i) {
    if (!(states_[i].time_ps > states_[i - 1].time_ps)) {
      throw std::invalid_argument(
          "Trajectory: time stamps must be strictly increasing");
    }
  }
}

double Trajectory::n_co(std::size_t i) const {
  const SystemState& s = states_[i];
  return pump_.polarization == PumpPolarization::SigmaPlus ? s.x_plus
                                                           : s.x_minus;
}

double Trajectory::n_cross(std::size_t i) const {
  const SystemState& s = states_[i];
  return pump_.polarization == PumpPolarization::SigmaPlus ? s.x_minus
                                                           : s.x_plus;
}

double Trajectory::hole_target(const SystemState& s) const {
  return pump_.polarization == PumpPolarization::SigmaPlus ? s.p_hole_down
                                                           : s.p_hole_up;
}

double Trajectory::hole_error(const SystemState& s) const {
  return pump_.polarization == PumpPolarization::SigmaPlus ? s.p_hole_up
                                                           : s.p_hole_down;
}

const SystemState& Trajectory::at_time(Time t) const {
  const double target = t.ps();
  auto it = std::lower_bound(
      states_.begin(), states_.end(), target,
      [](const SystemState& s, double value) { return s.time_ps < value; });
  const SystemState* best = nullptr;
  if (it != states_.end()) best = &*it;
  if (it != states_.begin()) {
    const SystemState* prev = &*(it - 1);
    if (best == nullptr ||
        std::abs(prev->time_ps - target) < std::abs(best->time_ps - target)) {
      best = prev;
    }
  }
  double sample_dt = states_.size() >= 2
                         ? states_[1].time_ps - states_[0].time_ps
                         : 0.0;
  if (best == nullptr ||
      std::abs(best->time_ps - target) > 0.5 * sample_dt + 1e-9) {
    std::ostringstream msg;
    msg << "Trajectory: no sample near t = " << target << " ps (grid ["
        << states_.front().time_ps << ", " << states_.back().time_ps << "])";
    throw NumericError(msg.str());
  }
  return *best;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "time_ps,n_co,n_cross,re_coherence,im_coherence,p_hole_up,"
        "p_hole_down,p_empty\n";
  char line[256];
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const SystemState& s = states_[i];
    std::snprintf(line, sizeof(line),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  s.time_ps, n_co(i), n_cross(i), s.x_coh.real(),
                  s.x_coh.imag(), s.p_hole_up, s.p_hole_down, s.p_empty);
    os << line;
  }
}

Trajectory evolve(const EvolutionSpec& spec) {
  spec.validate();
  const RateSet rates{energy_to_omega(spec.fss()).rad_per_ps(),
                      spec.qd.gamma_x().per_ps(), spec.qd.gamma_e.per_ps(),
                      spec.qd.gamma_h.per_ps(), spec.qd.gamma_r.per_ps()};
  const double dt = spec.dt.ps();
  const int n_steps = static_cast<int>(std::ceil(spec.t_max.ps() / dt - 1e-9));

  Vec7 v{0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
  bool pumped = false;

  std::vector<SystemState> states;
  states.reserve(static_cast<std::size_t>(n_steps / spec.sample_stride) + 2);

  for (int step = 0; step <= n_steps; ++step) {
    const double t = step * dt;
    if (!pumped && t >= spec.pump.arrival.ps() - 1e-12) {
      apply_pump(v, spec.pump);
      pumped = true;
    }
    check_state(v, t, step);
    if (step % spec.sample_stride == 0 || step == n_steps) {
      states.push_back(unpack(v, t));
    }
    if (step < n_steps) v = rk4_step(v, dt, rates);
  }
  return Trajectory{std::move(states), spec.pump};
}

FidelityValue steady_hole_fidelity(const Trajectory& traj) {
  const SystemState& final_state = traj.back();
  if (final_state.exciton_population() >= 1e-8) {
    throw NumericError(
        "steady_hole_fidelity: exciton population has not emptied; extend "
        "t_max");
  }
  const double target = traj.hole_target(final_state);
  const double error = traj.hole_error(final_state);
  const double total = target + error;
  if (!(total > 1e-12)) {
    throw NumericError(
        "steady_hole_fidelity: no hole population left to read out");
  }
  return {target / total, false};
}

FidelityValue integrate_steady_fidelity(const QuantumDotParams& qd,
                                        std::optional<Energy> fss_override) {
  const double gamma_x = qd.gamma_x().per_ps();
  if (!(gamma_x > 1e-4)) {
    throw NumericError(
        "integrate_steady_fidelity: exciton decay too slow to reach the "
        "steady ratio in a reasonable horizon");
  }
  EvolutionSpec spec;
  spec.qd = qd;
  spec.fss_override = fss_override;
  const double delta =
      std::abs(energy_to_omega(spec.fss()).rad_per_ps());
  const double fastest = std::max(delta, gamma_x);
  // 21 exciton lifetimes empty the doublet below 1e-9; the step keeps the
  // fastest scale at 2% per step, well inside the guard.
  spec.t_max = Time::ps(21.0 / gamma_x);
  spec.dt = Time::ps(0.02 / fastest);
  const double n_steps = spec.t_max.ps() / spec.dt.ps();
  spec.sample_stride = std::max(1, int(n_steps / 50.0));
  return steady_hole_fidelity(evolve(spec));
}

Spectrum beat_signal(const Trajectory& traj) {
  Spectrum s;
  s.x.reserve(traj.size());
  s.y.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    s.x.push_back(traj.states()[i].time_ps);
    s.y.push_back(traj.n_co(i) - traj.n_cross(i));
  }
  s.meta = {"time", "ps", "exciton spin beat n_co - n_cross", "population",
            "beat_signal"};
  return s;
}

}  // namespace qdspin
