#pragma once

// Classical oscillator with position-dependent mass m(x) = m0 / (1 + gamma x)^2
// in the potential m0 omega0^2 x^2 / 2.
//
// Closed forms for the periodic regime (|gamma A| < 1), the canonical map to
// the Morse oscillator, fixed-step RK4 integration of the equations of
// motion, open orbits (gamma A > 1), dwelling-time statistics, WKB levels and
// Lissajous curves.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qdef/errors.hpp"
#include "qdef/model.hpp"
#include "qdef/q_calculus.hpp"
#include "qdef/series_table.hpp"
#include "qdef/special_functions.hpp"

namespace qdef {

struct OscillatorConfig {
  double m0 = 1.0;
  double omega0 = 1.0;
  double gamma = 0.0;
  double amplitude = 1.0;
  double delta = 0.0;

  /// Config with A derived from E = m0 omega0^2 A^2 / 2.
  static OscillatorConfig from_energy(double m0, double omega0, double gamma,
                                      double energy, double delta = 0.0) {
    if (!(energy >= 0.0)) throw DomainError("OscillatorConfig: energy must be >= 0");
    return {m0, omega0, gamma, std::sqrt(2.0 * energy / (m0 * omega0 * omega0)),
            delta};
  }

  /// Config from the dimensionless control gamma_q * A.
  static OscillatorConfig from_control(double gamma_amplitude,
                                       double amplitude = 1.0, double m0 = 1.0,
                                       double omega0 = 1.0, double delta = 0.0) {
    return {m0, omega0, gamma_amplitude / amplitude, amplitude, delta};
  }

  void validate() const {
    if (!(m0 > 0.0) || !(omega0 > 0.0)) {
      throw DomainError("OscillatorConfig: m0 and omega0 must be positive");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
      throw DomainError("OscillatorConfig: amplitude must be finite and >= 0");
    }
    if (!std::isfinite(gamma) || !std::isfinite(delta)) {
      throw DomainError("OscillatorConfig: gamma and delta must be finite");
    }
  }

  double energy() const { return 0.5 * m0 * omega0 * omega0 * amplitude * amplitude; }
  double control() const { return gamma * amplitude; }
  double spring_constant() const { return m0 * omega0 * omega0; }
  /// tau0 = 2 pi / omega0, the constant-mass period.
  double base_period() const { return 2.0 * std::numbers::pi / omega0; }
  bool periodic() const { return std::abs(control()) < 1.0; }
};

struct PhaseState {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
};

struct DeformedPhaseState {
  double t = 0.0;
  double x_q = 0.0;
  double p_q = 0.0;
};

struct MorseParams {
  double binding_energy;  // W_q
  double alpha;           // alpha_q = -gamma_q
};

inline MorseParams morse_params(const OscillatorConfig& cfg) {
  if (cfg.gamma == 0.0) {
    throw RegimeError("morse_params: gamma_q = 0 has no finite binding energy");
  }
  return {cfg.m0 * cfg.omega0 * cfg.omega0 / (2.0 * cfg.gamma * cfg.gamma),
          -cfg.gamma};
}

// ---------------------------------------------------------------------------
// Mass, Hamiltonians, canonical map
// ---------------------------------------------------------------------------

namespace detail {

inline double pole_factor(double gamma, double x, const char* what) {
  const double y = 1.0 + gamma * x;
  if (!(y > 0.0)) {
    throw DomainError(std::string(what) + ": x at or beyond the pole -1/gamma_q");
  }
  return y;
}

inline void require_periodic(const OscillatorConfig& cfg, const char* what) {
  if (!cfg.periodic()) {
    throw RegimeError(std::string(what) +
                      ": requires |gamma_q A| < 1 (periodic regime)");
  }
}

}  // namespace detail

/// m(x) = m0 / (1 + gamma_q x)^2.
inline double pdm_mass(const OscillatorConfig& cfg, double x) {
  const double y = detail::pole_factor(cfg.gamma, x, "pdm_mass");
  return cfg.m0 / (y * y);
}

inline double potential(const OscillatorConfig& cfg, double x) {
  return 0.5 * cfg.spring_constant() * x * x;
}

/// H(x, p) = p^2 (1 + gamma x)^2 / 2 m0 + m0 omega0^2 x^2 / 2.
inline double hamiltonian(const OscillatorConfig& cfg, const PhaseState& s) {
  const double y = detail::pole_factor(cfg.gamma, s.x, "hamiltonian");
  return s.p * s.p * y * y / (2.0 * cfg.m0) + potential(cfg, s.x);
}

/// Morse potential W_q (e^{-alpha_q x_q} - 1)^2, written through expm1 so that
/// gamma_q -> 0 reduces smoothly to m0 omega0^2 x_q^2 / 2.
inline double morse_potential(const OscillatorConfig& cfg, double x_q) {
  const double stretched =
      cfg.gamma == 0.0 ? x_q : std::expm1(cfg.gamma * x_q) / cfg.gamma;
  return 0.5 * cfg.spring_constant() * stretched * stretched;
}

/// K(x_q, p_q) = p_q^2 / 2 m0 + W_q (e^{-alpha_q x_q} - 1)^2.
inline double morse_hamiltonian(const OscillatorConfig& cfg,
                                const DeformedPhaseState& s) {
  return s.p_q * s.p_q / (2.0 * cfg.m0) + morse_potential(cfg, s.x_q);
}

/// (x, p) -> (x_q, p_q) = (ln(1 + gamma x) / gamma, (1 + gamma x) p).
inline DeformedPhaseState canonical_map(double gamma, const PhaseState& s) {
  const double y = detail::pole_factor(gamma, s.x, "canonical_map");
  const double x_q = gamma == 0.0 ? s.x : std::log1p(gamma * s.x) / gamma;
  return {s.t, x_q, y * s.p};
}

inline DeformedPhaseState canonical_map(const Deformation& def,
                                        const PhaseState& s) {
  return canonical_map(def.gamma(), s);
}

inline DeformedPhaseState canonical_map(const OscillatorConfig& cfg,
                                        const PhaseState& s) {
  return canonical_map(cfg.gamma, s);
}

inline PhaseState canonical_map_inverse(double gamma,
                                        const DeformedPhaseState& s) {
  if (gamma == 0.0) return {s.t, s.x_q, s.p_q};
  const double x = std::expm1(gamma * s.x_q) / gamma;
  return {s.t, x, s.p_q * std::exp(-gamma * s.x_q)};
}

inline PhaseState canonical_map_inverse(const Deformation& def,
                                        const DeformedPhaseState& s) {
  return canonical_map_inverse(def.gamma(), s);
}

inline PhaseState canonical_map_inverse(const OscillatorConfig& cfg,
                                        const DeformedPhaseState& s) {
  return canonical_map_inverse(cfg.gamma, s);
}

// ---------------------------------------------------------------------------
// Periodic regime closed forms
// ---------------------------------------------------------------------------

/// tau_q = 2 pi / (omega0 sqrt(1 - gamma^2 A^2)).
inline double period(const OscillatorConfig& cfg) {
  detail::require_periodic(cfg, "period");
  const double g = cfg.control();
  return 2.0 * std::numbers::pi / (cfg.omega0 * std::sqrt(1.0 - g * g));
}

/// theta_q(t) = 2 atan[ sqrt((1+g)/(1-g)) tan( sqrt(1-g^2) (omega0 t + delta)/2 ) ],
/// unwrapped by whole turns so it increases continuously with t.
inline double analytic_phase(const OscillatorConfig& cfg, double t) {
  detail::require_periodic(cfg, "analytic_phase");
  const double g = cfg.control();
  const double half =
      0.5 * std::sqrt(1.0 - g * g) * (cfg.omega0 * t + cfg.delta);
  const double turns = std::floor(half / std::numbers::pi + 0.5);
  const double reduced = half - turns * std::numbers::pi;
  const double k = std::sqrt((1.0 + g) / (1.0 - g));
  return 2.0 * std::atan(k * std::tan(reduced)) + 2.0 * std::numbers::pi * turns;
}

/// x(t) = A cos theta_q(t).
inline double analytic_position(const OscillatorConfig& cfg, double t) {
  return cfg.amplitude * std::cos(analytic_phase(cfg, t));
}

/// dtheta/dt = omega0 (1 + g cos theta), hence
/// v = -A omega0 sin theta (1 + g cos theta) = +-(1 + gamma x) omega0 sqrt(A^2 - x^2).
inline double analytic_velocity(const OscillatorConfig& cfg, double t) {
  const double th = analytic_phase(cfg, t);
  const double g = cfg.control();
  return -cfg.amplitude * cfg.omega0 * std::sin(th) * (1.0 + g * std::cos(th));
}

inline double analytic_acceleration(const OscillatorConfig& cfg, double t) {
  const double th = analytic_phase(cfg, t);
  const double g = cfg.control();
  const double w2 = cfg.omega0 * cfg.omega0;
  return -cfg.amplitude * w2 * (1.0 + g * std::cos(th)) *
         (std::cos(th) + g * std::cos(2.0 * th));
}

/// The analytic trajectory as a RealFunction of t with analytic dx/dt.
inline RealFunction analytic_trajectory(const OscillatorConfig& cfg) {
  detail::require_periodic(cfg, "analytic_trajectory");
  return RealFunction([cfg](double t) { return analytic_position(cfg, t); })
      .with_derivative([cfg](double t) { return analytic_velocity(cfg, t); });
}

/// Deformation whose dual derivative in t is the classical
/// (1 + gamma x)^{-1} d/dt; positions are passed in their own units (xi = 1).
inline Deformation classical_deformation(const OscillatorConfig& cfg) {
  return Deformation::from_gamma(cfg.gamma, 1.0);
}

// ---------------------------------------------------------------------------
// Equations of motion and integration
// ---------------------------------------------------------------------------

struct MotionDerivative {
  double dx;
  double dp;
};

using MotionRhs =
    std::function<MotionDerivative(const OscillatorConfig&, double, double)>;

/// x' = p / m(x),  p' = -gamma (1 + gamma x) p^2 / m0 - m0 omega0^2 x.
inline MotionDerivative pdm_equations(const OscillatorConfig& cfg, double x,
                                      double p) {
  const double y = 1.0 + cfg.gamma * x;
  return {p * y * y / cfg.m0,
          -cfg.gamma * y * p * p / cfg.m0 - cfg.spring_constant() * x};
}

/// Integration aborts when 1 + gamma x drops below this value.
inline constexpr double kPoleGuard = 1e-8;

namespace detail {

inline PhaseState rk4_step(const OscillatorConfig& cfg, const MotionRhs& rhs,
                           const PhaseState& s, double dt) {
  const auto k1 = rhs(cfg, s.x, s.p);
  const auto k2 = rhs(cfg, s.x + 0.5 * dt * k1.dx, s.p + 0.5 * dt * k1.dp);
  const auto k3 = rhs(cfg, s.x + 0.5 * dt * k2.dx, s.p + 0.5 * dt * k2.dp);
  const auto k4 = rhs(cfg, s.x + dt * k3.dx, s.p + dt * k3.dp);
  return {s.t + dt, s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          s.p + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp)};
}

inline void check_guard(const OscillatorConfig& cfg, const PhaseState& s) {
  if (!std::isfinite(s.x) || !std::isfinite(s.p) ||
      1.0 + cfg.gamma * s.x < kPoleGuard) {
    throw NumericalError("integrate_motion: state entered the pole guard band "
                         "(1 + gamma x < 1e-8) at t=" +
                         std::to_string(s.t));
  }
}

}  // namespace detail

/// Fixed-step RK4 integration of the PDM equations of motion from s0 to
/// t_end, recording (t, x, p, E). The last step is shortened to land on
/// t_end exactly.
inline SeriesTable integrate_motion(const OscillatorConfig& cfg,
                                    const PhaseState& s0, double t_end,
                                    double dt,
                                    const MotionRhs& rhs = pdm_equations) {
  cfg.validate();
  if (!(dt > 0.0)) throw DomainError("integrate_motion: dt must be positive");
  if (!(t_end >= s0.t)) throw DomainError("integrate_motion: t_end before start");
  detail::check_guard(cfg, s0);

  SeriesTable table({"t", "x", "p", "E"});
  PhaseState s = s0;
  table.add_row({s.t, s.x, s.p, hamiltonian(cfg, s)});
  const auto steps = static_cast<long long>(std::ceil((t_end - s0.t) / dt - 1e-9));
  for (long long i = 1; i <= steps; ++i) {
    const double target = i == steps ? t_end : s0.t + static_cast<double>(i) * dt;
    s = detail::rk4_step(cfg, rhs, s, target - s.t);
    s.t = target;
    detail::check_guard(cfg, s);
    table.add_row({s.t, s.x, s.p, hamiltonian(cfg, s)});
  }
  table.set_meta("integrator", "rk4-fixed");
  table.set_meta("dt", dt);
  return table;
}

/// Times at which x(t) crosses zero upwards, located on each bracketing
/// step by cubic Hermite interpolation with x' = p / m(x), refined by
/// bisection.
inline std::vector<double> upcrossing_times(const OscillatorConfig& cfg,
                                            const SeriesTable& trajectory,
                                            const MotionRhs& rhs = pdm_equations) {
  const auto t = trajectory.column("t");
  const auto x = trajectory.column("x");
  const auto p = trajectory.column("p");
  std::vector<double> crossings;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(x[i - 1] < 0.0 && x[i] >= 0.0)) continue;
    const double h = t[i] - t[i - 1];
    const double v0 = rhs(cfg, x[i - 1], p[i - 1]).dx;
    const double v1 = rhs(cfg, x[i], p[i]).dx;
    auto hermite = [&](double s) {
      const double s2 = s * s;
      const double s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * x[i - 1] + (s3 - 2 * s2 + s) * h * v0 +
             (-2 * s3 + 3 * s2) * x[i] + (s3 - s2) * h * v1;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (hermite(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    crossings.push_back(t[i - 1] + 0.5 * (lo + hi) * h);
  }
  return crossings;
}

/// Period measured from upward zero crossings of the integrated trajectory
/// started at the turning point x = A.
inline double measured_period(const OscillatorConfig& cfg, int periods,
                              double dt, const MotionRhs& rhs = pdm_equations) {
  const double span = (periods + 1.25) * cfg.base_period() /
                      std::sqrt(std::max(1e-12, 1.0 - cfg.control() * cfg.control()));
  const auto table = integrate_motion(cfg, {0.0, cfg.amplitude, 0.0}, span, dt, rhs);
  const auto up = upcrossing_times(cfg, table, rhs);
  if (up.size() < 2) {
    throw NumericalError("measured_period: fewer than two upward zero crossings");
  }
  return (up.back() - up.front()) / static_cast<double>(up.size() - 1);
}

// ---------------------------------------------------------------------------
// Open orbits (gamma A > 1)
// ---------------------------------------------------------------------------

namespace detail {

inline void require_open(const OscillatorConfig& cfg, const char* what) {
  if (!(cfg.control() > 1.0)) {
    throw RegimeError(std::string(what) + ": requires gamma_q A > 1 (open orbit)");
  }
}

// Morse-variable equations: x_q' = p_q / m0, p_q' = -m0 omega0^2 X (1 + gamma X)
// with X = expm1(gamma x_q) / gamma the physical position.
inline std::array<double, 2> morse_rhs(const OscillatorConfig& cfg, double x_q,
                                       double p_q) {
  const double e = std::exp(cfg.gamma * x_q);
  const double x = std::expm1(cfg.gamma * x_q) / cfg.gamma;
  return {p_q / cfg.m0, -cfg.spring_constant() * x * e};
}

}  // namespace detail

/// Default open-orbit step: tau0 / 2000.
inline double default_open_step(const OscillatorConfig& cfg) {
  return cfg.base_period() / 2000.0;
}

/// Open-orbit trajectory from the turning point x = A at shifted time
/// t + delta/omega0 = 0, integrated with RK4 in the canonically equivalent
/// Morse variables (x_q, p_q), which stay regular while x approaches the
/// pole. Columns: t, x, v, a, x_q, p_q, y = 1 + gamma x (= e^{gamma x_q}).
inline SeriesTable integrate_open_orbit(const OscillatorConfig& cfg, double t_end,
                                        double dt) {
  cfg.validate();
  detail::require_open(cfg, "integrate_open_orbit");
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw DomainError("integrate_open_orbit: need dt > 0 and t_end >= 0");
  }
  SeriesTable table({"t", "x", "v", "a", "x_q", "p_q", "y"});
  double x_q = std::log1p(cfg.control()) / cfg.gamma;
  double p_q = 0.0;
  double t = 0.0;
  auto record = [&] {
    const double y = std::exp(cfg.gamma * x_q);
    // the round trip through x_q can land one ulp above the turning point
    const double x = std::min(std::expm1(cfg.gamma * x_q) / cfg.gamma, cfg.amplitude);
    const double v = y * p_q / cfg.m0;
    // x'' = gamma x'^2 / y - omega0^2 x y^2
    const double a = (y > 0.0 ? cfg.gamma * v * v / y : 0.0) -
                     cfg.omega0 * cfg.omega0 * x * y * y;
    table.add_row({t, x, v, a, x_q, p_q, y});
  };
  record();
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  for (long long i = 1; i <= steps; ++i) {
    const double target = i == steps ? t_end : static_cast<double>(i) * dt;
    const double h = target - t;
    const auto k1 = detail::morse_rhs(cfg, x_q, p_q);
    const auto k2 = detail::morse_rhs(cfg, x_q + 0.5 * h * k1[0], p_q + 0.5 * h * k1[1]);
    const auto k3 = detail::morse_rhs(cfg, x_q + 0.5 * h * k2[0], p_q + 0.5 * h * k2[1]);
    const auto k4 = detail::morse_rhs(cfg, x_q + h * k3[0], p_q + h * k3[1]);
    x_q += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    p_q += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    t = target;
    record();
  }
  table.set_meta("integrator", "rk4-fixed-morse-variables");
  table.set_meta("dt", dt);
  return table;
}

/// Position on the open orbit; x(-s) = x(s) about the turning point.
inline double open_orbit_position(const OscillatorConfig& cfg, double t,
                                  double dt = 0.0) {
  const double shifted = std::abs(t + cfg.delta / cfg.omega0);
  const double step = dt > 0.0 ? dt : default_open_step(cfg);
  const auto table = integrate_open_orbit(cfg, shifted, step);
  return table.rows().back()[1];
}

/// Analytic continuation tan -> tanh of the periodic solution, used as a
/// cross-check of the integrated open orbit:
/// x = A (1 - k^2 T^2) / (1 + k^2 T^2), k^2 = (g+1)/(g-1),
/// T = tanh( sqrt(g^2 - 1) (omega0 t + delta) / 2 ).
inline double continued_position(const OscillatorConfig& cfg, double t) {
  detail::require_open(cfg, "continued_position");
  const double g = cfg.control();
  const double k2 = (g + 1.0) / (g - 1.0);
  const double T = std::tanh(0.5 * std::sqrt(g * g - 1.0) *
                             (cfg.omega0 * t + cfg.delta));
  return cfg.amplitude * (1.0 - k2 * T * T) / (1.0 + k2 * T * T);
}

inline double continued_velocity(const OscillatorConfig& cfg, double t) {
  detail::require_open(cfg, "continued_velocity");
  const double g = cfg.control();
  const double k2 = (g + 1.0) / (g - 1.0);
  const double r = 0.5 * std::sqrt(g * g - 1.0) * cfg.omega0;
  const double T = std::tanh(r * t + 0.5 * std::sqrt(g * g - 1.0) * cfg.delta);
  const double denom = 1.0 + k2 * T * T;
  // dx/dT = -4 A k^2 T / (1 + k^2 T^2)^2, dT/dt = r (1 - T^2)
  return -4.0 * cfg.amplitude * k2 * T / (denom * denom) * r * (1.0 - T * T);
}

namespace detail {

inline double open_period_modulus(const OscillatorConfig& cfg) {
  const double g = cfg.control();
  return 2.0 * std::numbers::pi / (cfg.omega0 * std::sqrt(g * g - 1.0));
}

}  // namespace detail

/// Time after which the speed decreases on the open orbit (measured from the
/// turning point x = A). Obtained from the speed maximum at
/// x* = A (sqrt(1 + 8 g^2) - 1) / (4 g):
/// t* = (tau/pi) atanh sqrt[ (g-1)(1+4g-s) / ((g+1)(4g-1+s)) ],
/// s = sqrt(1 + 8 g^2), tau = 2 pi / (omega0 sqrt(g^2 - 1)).
inline double t_star(const OscillatorConfig& cfg) {
  detail::require_open(cfg, "t_star");
  const double g = cfg.control();
  const double s = std::sqrt(1.0 + 8.0 * g * g);
  const double ratio =
      ((g - 1.0) * (1.0 + 4.0 * g - s)) / ((g + 1.0) * (4.0 * g - 1.0 + s));
  return detail::open_period_modulus(cfg) / std::numbers::pi *
         std::atanh(std::sqrt(ratio));
}

/// t* with the alternative denominator factor (1 + 4g + s); kept only to
/// report its offset from the speed maximum.
inline double t_star_as_printed(const OscillatorConfig& cfg) {
  detail::require_open(cfg, "t_star_as_printed");
  const double g = cfg.control();
  const double s = std::sqrt(1.0 + 8.0 * g * g);
  const double ratio =
      ((g - 1.0) * (1.0 + 4.0 * g - s)) / ((g + 1.0) * (1.0 + 4.0 * g + s));
  return detail::open_period_modulus(cfg) / std::numbers::pi *
         std::atanh(std::sqrt(ratio));
}

/// Position of the speed maximum on the open orbit.
inline double speed_peak_position(const OscillatorConfig& cfg) {
  detail::require_open(cfg, "speed_peak_position");
  const double g = cfg.control();
  return cfg.amplitude * (std::sqrt(1.0 + 8.0 * g * g) - 1.0) / (4.0 * g);
}

/// p_q,max = m0 omega0 A sqrt(1 - 1/(gamma A)^2): the limit of |p_q| on an
/// open orbit as x_q -> -inf. The overall peak of |p_q| is m0 omega0 A, at x = 0.
inline double max_deformed_momentum(const OscillatorConfig& cfg) {
  detail::require_open(cfg, "max_deformed_momentum");
  const double g = cfg.control();
  return cfg.m0 * cfg.omega0 * cfg.amplitude * std::sqrt(1.0 - 1.0 / (g * g));
}

/// x_q,max = ln(1 + gamma A) / gamma.
inline double max_deformed_position(const OscillatorConfig& cfg) {
  return canonical_map(cfg, {0.0, cfg.amplitude, 0.0}).x_q;
}

// ---------------------------------------------------------------------------
// Time law, statistics and WKB
// ---------------------------------------------------------------------------

/// Time to go from x0 to x on the ascending branch:
/// int dx / [(1 + gamma x) sqrt((2/m0)(E - V))], evaluated as a q-integral
/// with x = A sin(phi) removing the turning-point singularity. Negative when
/// x < x0.
inline double time_from_position(const OscillatorConfig& cfg, double x0, double x,
                                 const special::QuadratureSpec& spec = {}) {
  detail::require_periodic(cfg, "time_from_position");
  const double A = cfg.amplitude;
  if (std::abs(x0) > A || std::abs(x) > A) {
    throw DomainError("time_from_position: positions must lie in [-A, A]; "
                      "the interval would straddle a turning point");
  }
  const Deformation def = Deformation::from_gamma(cfg.gamma, std::max(A, 1e-300));
  const double w = cfg.omega0;
  Substitution sub{[A](double phi) { return A * std::sin(phi); },
                   [w](double) { return 1.0 / w; }, std::asin(x0 / A),
                   std::asin(x / A)};
  return q_integral(def, sub, spec);
}

/// P(x) = sqrt(1 - g^2) / [pi (1 + gamma x) sqrt(A^2 - x^2)], |x| < A.
inline double classical_density(const OscillatorConfig& cfg, double x) {
  detail::require_periodic(cfg, "classical_density");
  const double A = cfg.amplitude;
  if (!(std::abs(x) < A)) {
    throw DomainError("classical_density: requires |x| < A");
  }
  const double g = cfg.control();
  return std::sqrt(1.0 - g * g) /
         (std::numbers::pi * (1.0 + cfg.gamma * x) * std::sqrt((A - x) * (A + x)));
}

struct ClassicalMoments {
  double mean_x;
  double mean_x2;
  double mean_p;
  double mean_p2;
};

/// Time averages over one period. 1 - sqrt(1 - g^2) is evaluated as
/// g^2 / (1 + sqrt(1 - g^2)) so that g -> 0 is exact.
inline ClassicalMoments classical_moments(const OscillatorConfig& cfg) {
  detail::require_periodic(cfg, "classical_moments");
  const double A = cfg.amplitude;
  const double g = cfg.control();
  const double root = std::sqrt(1.0 - g * g);
  const double mw = cfg.m0 * cfg.omega0;
  return {-A * g / (1.0 + root), A * A / (1.0 + root), 0.0,
          mw * mw * A * A / (2.0 * (1.0 - g * g))};
}

struct VirialSplit {
  double kinetic;
  double potential;
  double ratio;  // kinetic / potential
};

/// T = E - V, V = m0 omega0^2 <x^2> / 2; the ratio equals sqrt(1 - g^2).
inline VirialSplit classical_virial(const OscillatorConfig& cfg) {
  const auto m = classical_moments(cfg);
  const double V = 0.5 * cfg.spring_constant() * m.mean_x2;
  const double T = cfg.energy() - V;
  return {T, V, T / V};
}

/// Quantum number implied by the WKB condition at energy E:
/// n(E) = (m0 omega0 / (pi hbar)) int_{-A}^{A} sqrt(A^2 - x^2) / (1 + gamma x) dx - 1/2,
/// with A^2 = 2E / (m0 omega0^2).
inline double wkb_quantum_number(const QuantumModel& model, double energy,
                                 const special::QuadratureSpec& spec = {1e-13, 1e-13}) {
  model.validate();
  if (!(energy > 0.0)) throw DomainError("wkb_quantum_number: energy must be > 0");
  const double A = std::sqrt(2.0 * energy / (model.m0 * model.omega0 * model.omega0));
  const double g = model.gamma * A;
  if (!(g * g < 1.0)) {
    throw RegimeError("wkb_quantum_number: energy at or above dissociation W_q");
  }
  const Deformation def = Deformation::from_gamma(model.gamma, A);
  const double half_pi = 0.5 * std::numbers::pi;
  Substitution sub{[A](double phi) { return A * std::sin(phi); },
                   [A](double phi) {
                     const double c = std::cos(phi);
                     return A * A * c * c;
                   },
                   -half_pi, half_pi};
  const double area = q_integral(def, sub, spec);
  return model.m0 * model.omega0 * area / (std::numbers::pi * model.hbar) - 0.5;
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

/// (x(t), y(t)) for two independent periodic oscillators.
inline SeriesTable lissajous(const OscillatorConfig& cfg_x,
                             const OscillatorConfig& cfg_y,
                             const std::vector<double>& t_grid) {
  detail::require_periodic(cfg_x, "lissajous");
  detail::require_periodic(cfg_y, "lissajous");
  SeriesTable table({"t", "x", "y"});
  for (double t : t_grid) {
    table.add_row({t, analytic_position(cfg_x, t), analytic_position(cfg_y, t)});
  }
  return table;
}

/// One closed orbit (periodic regime) or the open orbit over
/// [-t_half, t_half] in both (x, p) and (x_q, p_q).
inline SeriesTable phase_orbit(const OscillatorConfig& cfg, int samples,
                               double t_half = 0.0) {
  if (samples < 2) throw DomainError("phase_orbit: need at least two samples");
  SeriesTable table({"t", "x", "p", "x_q", "p_q"});
  if (cfg.periodic()) {
    const double tau = period(cfg);
    for (int i = 0; i <= samples; ++i) {
      const double t = tau * i / samples;
      const double x = analytic_position(cfg, t);
      const double p = pdm_mass(cfg, x) * analytic_velocity(cfg, t);
      const auto d = canonical_map(cfg, {t, x, p});
      table.add_row({t, x, p, d.x_q, d.p_q});
    }
    return table;
  }
  detail::require_open(cfg, "phase_orbit");
  const double span = t_half > 0.0 ? t_half : 2.0 * cfg.base_period();
  const double dt = span / samples;
  const auto half = integrate_open_orbit(cfg, span, std::min(dt, default_open_step(cfg)));
  const std::size_t stride =
      std::max<std::size_t>(1, (half.size() - 1) / static_cast<std::size_t>(samples));
  std::vector<std::vector<double>> forward;
  for (std::size_t i = 0; i < half.size(); i += stride) forward.push_back(half.rows()[i]);
  // time reversal: x(-t) = x(t), p(-t) = -p(t). Rows where 1 + gamma x has
  // underflowed to zero carry no finite p and are dropped.
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
    const auto& r = *it;
    if (r[0] == 0.0 || !(r[6] > 0.0)) continue;
    table.add_row({-r[0], r[1], -r[5] / r[6], r[4], -r[5]});
  }
  for (const auto& r : forward) {
    if (!(r[6] > 0.0)) continue;
    table.add_row({r[0], r[1], r[5] / r[6], r[4], r[5]});
  }
  return table;
}

}  // namespace qdef
