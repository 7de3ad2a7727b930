#pragma once

// Self-verification suite. Each check measures one error figure against a
// reference tolerance; `tol_scale` multiplies every tolerance (values below
// 1 tighten the suite).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdef/classical.hpp"
#include "qdef/errors.hpp"
#include "qdef/q_calculus.hpp"
#include "qdef/quantum.hpp"
#include "qdef/series_table.hpp"
#include "qdef/version.hpp"

namespace qdef {

struct CheckResult {
  int criterion;
  std::string name;
  double measured;
  double tolerance;
  bool pass;
  std::string detail;
};

struct VerifyOptions {
  double tol_scale = 1.0;
  MotionRhs rhs = pdm_equations;  // replaced by the mutation canary
};

namespace verify {

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

inline CheckResult make(int criterion, std::string name, double measured, double tolerance,
                        std::string detail = {}) {
  const bool pass = std::isfinite(measured) && measured <= tolerance;
  return {criterion, std::move(name), measured, tolerance, pass, std::move(detail)};
}

/// Runs fn; any exception becomes a failing result with infinite error.
inline CheckResult guarded(int criterion, const std::string& name, double tolerance,
                           const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {criterion, name, std::numeric_limits<double>::infinity(), tolerance, false,
            std::string("exception: ") + e.what()};
  }
}

// ---------------------------------------------------------------------------
// Classical
// ---------------------------------------------------------------------------

inline double period_law_error(const MotionRhs& rhs, std::string* detail = nullptr) {
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const auto cfg = OscillatorConfig::from_control(0.1 * i);
    const double measured = measured_period(cfg, 3, cfg.base_period() / 2000.0, rhs);
    const double err = rel(measured, period(cfg));
    if (err >= worst && detail) *detail = "worst at gamma*A=" + format_double(0.1 * i);
    worst = std::max(worst, err);
  }
  return worst;
}

inline CheckResult period_law(const VerifyOptions& opt) {
  const double tol = 1e-6 * opt.tol_scale;
  return guarded(1, "period_law", tol, [&] {
    std::string detail;
    const double err = period_law_error(opt.rhs, &detail);
    return make(1, "period_law", err, tol, detail);
  });
}

/// Dual second derivative of the analytic x(t) against -omega0^2 x, error
/// scaled by omega0^2 A.
inline CheckResult deformed_newton(const VerifyOptions& opt) {
  const double tol = 1e-6 * opt.tol_scale;
  return guarded(2, "deformed_newton_law", tol, [&] {
    double worst = 0.0;
    for (double g : {0.3, 0.6, 0.9}) {
      const auto cfg = OscillatorConfig::from_control(g, 1.0, 1.0, 1.0, 0.4);
      const auto traj = analytic_trajectory(cfg);
      const auto def = classical_deformation(cfg);
      const double tau = period(cfg);
      for (int i = 0; i < 100; ++i) {
        const double t = tau * (i + 0.37) / 100.0;
        const double lhs = dual_q_derivative_second(def, traj, t);
        const double rhs = -cfg.omega0 * cfg.omega0 * traj(t);
        worst = std::max(worst, std::abs(lhs - rhs) /
                                    (cfg.omega0 * cfg.omega0 * cfg.amplitude));
      }
    }
    return make(2, "deformed_newton_law", worst, tol, "100 times per gamma*A in {0.3,0.6,0.9}");
  });
}

inline std::vector<CheckResult> canonical_invariance(const VerifyOptions& opt) {
  const double tol_h = 1e-12 * opt.tol_scale;
  const double tol_pb = 1e-8 * opt.tol_scale;
  std::mt19937_64 rng(20240611);
  double worst_h = 0.0;
  double worst_pb = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
    OscillatorConfig cfg{1.0, 1.0, gamma, 1.0, 0.0};
    // x with 1 + gamma x in [0.05, 3]
    const double y = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
    const double x = gamma == 0.0 ? y - 1.0 : (y - 1.0) / gamma;
    const double p = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const PhaseState s{0.0, x, p};
    const double H = hamiltonian(cfg, s);
    const double K = morse_hamiltonian(cfg, canonical_map(cfg, s));
    worst_h = std::max(worst_h, std::abs(H - K) / std::max(std::abs(H), 1e-300));

    auto xq = [&](double xx, double pp) { return canonical_map(gamma, {0.0, xx, pp}).x_q; };
    auto pq = [&](double xx, double pp) { return canonical_map(gamma, {0.0, xx, pp}).p_q; };
    const double dxq_dx = special::central_diff([&](double v) { return xq(v, p); }, x);
    const double dxq_dp = special::central_diff([&](double v) { return xq(x, v); }, p);
    const double dpq_dx = special::central_diff([&](double v) { return pq(v, p); }, x);
    const double dpq_dp = special::central_diff([&](double v) { return pq(x, v); }, p);
    worst_pb = std::max(worst_pb, std::abs(dxq_dx * dpq_dp - dxq_dp * dpq_dx - 1.0));
  }
  return {make(3, "canonical_hamiltonian_invariance", worst_h, tol_h, "100 random states"),
          make(3, "canonical_poisson_bracket", worst_pb, tol_pb, "100 random states")};
}

inline std::vector<CheckResult> open_regime(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double tol_mono = 0.0;
  const double tol_tail = 1e-3 * opt.tol_scale;
  const double tol_tstar = 1e-3 * opt.tol_scale;
  out.push_back(guarded(4, "open_orbit_monotone_bounded", tol_mono, [&] {
    double violations = 0.0;
    for (double g : {1.01, 2.0, 10.0}) {
      const auto cfg = OscillatorConfig::from_control(g);
      const auto table = integrate_open_orbit(cfg, 10.0 * cfg.base_period(),
                                              default_open_step(cfg));
      double prev = cfg.amplitude;
      for (const auto& r : table.rows()) {
        const double x = r[1];
        const bool ok = std::isfinite(r[4]) && r[6] > 0.0 && x <= cfg.amplitude &&
                        x >= -1.0 / cfg.gamma && x <= prev;
        if (!ok) violations += 1.0;
        prev = x;
      }
    }
    return make(4, "open_orbit_monotone_bounded", violations, tol_mono,
                "rows leaving (-1/gamma, A] or increasing");
  }));
  out.push_back(guarded(4, "open_orbit_asymptote", tol_tail, [&] {
    const auto cfg = OscillatorConfig::from_control(10.0);
    const double x = open_orbit_position(cfg, 10.0 * cfg.base_period());
    return make(4, "open_orbit_asymptote", std::abs(x + 1.0 / cfg.gamma) / cfg.amplitude,
                tol_tail, "|x(10 tau0) + 1/gamma| / A at gamma*A=10");
  }));
  out.push_back(guarded(4, "open_orbit_speed_peak", tol_tstar, [&] {
    double worst = 0.0;
    for (double g : {1.01, 2.0, 10.0}) {
      const auto cfg = OscillatorConfig::from_control(g);
      const double dt = cfg.base_period() / 20000.0;
      const auto table = integrate_open_orbit(cfg, 2.0 * t_star(cfg) + cfg.base_period(), dt);
      const auto t = table.column("t");
      const auto v = table.column("v");
      std::size_t k = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
      }
      double peak = t[k];
      if (k > 0 && k + 1 < v.size()) {
        const double a = std::abs(v[k - 1]);
        const double b = std::abs(v[k]);
        const double c = std::abs(v[k + 1]);
        const double denom = a - 2.0 * b + c;
        if (denom != 0.0) peak += 0.5 * dt * (a - c) / denom;
      }
      worst = std::max(worst, std::abs(peak - t_star(cfg)) / cfg.base_period());
    }
    return make(4, "open_orbit_speed_peak", worst, tol_tstar,
                "|t_peak - t*| / tau0 over gamma*A in {1.01,2,10}");
  }));
  return out;
}

/// Integral of f(x) P(x) over [-A, A] via x = A sin(phi).
inline double density_average(const OscillatorConfig& cfg, const std::function<double(double)>& f,
                              double phi0 = -0.5 * std::numbers::pi,
                              double phi1 = 0.5 * std::numbers::pi) {
  const double A = cfg.amplitude;
  const double g = cfg.control();
  const double norm = std::sqrt(1.0 - g * g) / std::numbers::pi;
  const Deformation def = Deformation::from_gamma(cfg.gamma, A);
  Substitution sub{[A](double phi) { return A * std::sin(phi); },
                   [&, A, norm](double phi) { return norm * f(A * std::sin(phi)); }, phi0,
                   phi1};
  return q_integral(def, sub, {1e-14, 1e-13});
}

inline std::vector<CheckResult> classical_statistics(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double tol_mom = 1e-8 * opt.tol_scale;
  const double tol_hist = 1e-2 * opt.tol_scale;
  const double tol_vir = 1e-10 * opt.tol_scale;
  const std::vector<double> controls{0.3, 0.6, 0.9};
  out.push_back(guarded(5, "classical_moments", tol_mom, [&] {
    double worst = 0.0;
    for (double g : controls) {
      const auto cfg = OscillatorConfig::from_control(g, 1.3);
      const auto closed = classical_moments(cfg);
      const double E = cfg.energy();
      const double mx = density_average(cfg, [](double x) { return x; });
      const double mx2 = density_average(cfg, [](double x) { return x * x; });
      const double mp2 = density_average(cfg, [&](double x) {
        const double y = 1.0 + cfg.gamma * x;
        return 2.0 * cfg.m0 * (E - potential(cfg, x)) / (y * y);
      });
      worst = std::max({worst, rel(mx, closed.mean_x), rel(mx2, closed.mean_x2),
                        rel(mp2, closed.mean_p2)});
    }
    return make(5, "classical_moments", worst, tol_mom, "quadrature vs closed forms");
  }));
  out.push_back(guarded(5, "ergodic_histogram", tol_hist, [&] {
    double worst = 0.0;
    for (double g : controls) {
      const auto cfg = OscillatorConfig::from_control(g);
      const double A = cfg.amplitude;
      const int bins = 50;
      std::vector<double> counts(bins, 0.0);
      const double tau = period(cfg);
      const double dt = tau / 997.3;
      const long long samples = static_cast<long long>(200.0 * tau / dt);
      for (long long j = 0; j < samples; ++j) {
        const double x = analytic_position(cfg, j * dt);
        const int b = std::clamp(static_cast<int>((x + A) / (2.0 * A) * bins), 0, bins - 1);
        counts[b] += 1.0;
      }
      double l1 = 0.0;
      for (int b = 0; b < bins; ++b) {
        const double x0 = -A + 2.0 * A * b / bins;
        const double x1 = -A + 2.0 * A * (b + 1) / bins;
        const double expected = density_average(
            cfg, [](double) { return 1.0; }, std::asin(std::clamp(x0 / A, -1.0, 1.0)),
            std::asin(std::clamp(x1 / A, -1.0, 1.0)));
        l1 += std::abs(counts[b] / samples - expected);
      }
      worst = std::max(worst, l1);
    }
    return make(5, "ergodic_histogram", worst, tol_hist, "L1 over 50 bins, 200 periods");
  }));
  out.push_back(guarded(5, "classical_virial", tol_vir, [&] {
    double worst = 0.0;
    for (double g : controls) {
      const auto cfg = OscillatorConfig::from_control(g);
      const double mx2 = density_average(cfg, [](double x) { return x * x; });
      const double V = 0.5 * cfg.spring_constant() * mx2;
      const double ratio = (cfg.energy() - V) / V;
      worst = std::max(worst, rel(ratio, std::sqrt(1.0 - g * g)));
    }
    return make(5, "classical_virial", worst, tol_vir, "T/V vs sqrt(1 - gamma^2 A^2)");
  }));
  return out;
}

// ---------------------------------------------------------------------------
// Quantum
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> spectrum(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const auto model = QuantumModel::from_gamma_x0(0.3);
  const double tol_wkb = 1e-6 * opt.tol_scale;
  out.push_back(guarded(6, "wkb_quantisation", tol_wkb, [&] {
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n) {
      worst = std::max(worst, std::abs(wkb_quantum_number(model, energy_level(model, n)) - n));
    }
    return make(6, "wkb_quantisation", worst, tol_wkb, "|n(E_n) - n|, n=0..5, gamma*x0=0.3");
  }));
  out.push_back(guarded(6, "bound_state_count", 0.0, [&] {
    return make(6, "bound_state_count", std::abs(model.bound_state_count() - 11.0), 0.0,
                "count=" + std::to_string(model.bound_state_count()) + " expected 11");
  }));
  out.push_back(guarded(6, "levels_below_binding_energy", 0.0, [&] {
    double violations = 0.0;
    for (int n = 0; n <= model.n_max(); ++n) {
      if (!(energy_level(model, n) < model.binding_energy())) violations += 1.0;
    }
    return make(6, "levels_below_binding_energy", violations, 0.0, "levels with E_n >= W_q");
  }));
  return out;
}

/// Sign changes of psi_n across its support, ignoring values below
/// 1e-10 of the peak.
inline int node_count(const QuantumModel& model, int n) {
  const Eigenstate psi(model, n);
  const auto grid = support_grid(model, n, model.x0() / 400.0);
  std::vector<double> v(static_cast<std::size_t>(grid.count));
  double peak = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    v[i] = psi(grid.at(i));
    peak = std::max(peak, std::abs(v[i]));
  }
  int nodes = 0;
  double last = 0.0;
  for (double value : v) {
    if (std::abs(value) < 1e-10 * peak) continue;
    if (last != 0.0 && (value > 0.0) != (last > 0.0)) ++nodes;
    last = value;
  }
  return nodes;
}

inline std::vector<CheckResult> eigenfunctions(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double tol_res = 1e-6 * opt.tol_scale;
  const double tol_orth = 1e-7 * opt.tol_scale;
  const std::vector<double> gammas{0.1, 0.2, 0.3};
  out.push_back(guarded(7, "schrodinger_residual", tol_res, [&] {
    double worst = 0.0;
    for (double gx0 : gammas) {
      const auto model = QuantumModel::from_gamma_x0(gx0);
      for (int n = 0; n <= 5; ++n) {
        worst = std::max(worst, schrodinger_residual(model, n,
                                                     support_grid(model, n, model.x0() / 200.0)));
      }
    }
    return make(7, "schrodinger_residual", worst, tol_res, "scaled sup norm, h = x0/200");
  }));
  out.push_back(guarded(7, "normalisation_orthogonality", tol_orth, [&] {
    double worst = 0.0;
    for (double gx0 : gammas) {
      const auto model = QuantumModel::from_gamma_x0(gx0);
      for (int m = 0; m <= 5; ++m) {
        for (int n = m; n <= 5; ++n) {
          worst = std::max(worst, std::abs(overlap(model, m, n) - (m == n ? 1.0 : 0.0)));
        }
      }
    }
    return make(7, "normalisation_orthogonality", worst, tol_orth, "max |<m|n> - delta_mn|");
  }));
  out.push_back(guarded(7, "node_count", 0.0, [&] {
    double violations = 0.0;
    for (double gx0 : gammas) {
      const auto model = QuantumModel::from_gamma_x0(gx0);
      for (int n = 0; n <= 5; ++n) {
        if (node_count(model, n) != n) violations += 1.0;
      }
    }
    return make(7, "node_count", violations, 0.0, "states whose node count differs from n");
  }));
  return out;
}

inline std::vector<CheckResult> quantum_moments(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double tol_mom = 1e-6 * opt.tol_scale;
  const double tol_vir = 1e-10 * opt.tol_scale;
  const std::vector<double> gammas{0.1, 0.2, 0.3};
  out.push_back(guarded(8, "quantum_moments", tol_mom, [&] {
    double worst = 0.0;
    for (double gx0 : gammas) {
      const auto model = QuantumModel::from_gamma_x0(gx0);
      for (int n = 0; n <= 5; ++n) {
        const auto q = quadrature_moments(model, n);
        const auto c = expectation_values(model, n);
        worst = std::max({worst, rel(q.mean_x, c.mean_x), rel(q.mean_x2, c.mean_x2),
                          rel(q.mean_p2, c.mean_p2)});
      }
    }
    return make(8, "quantum_moments", worst, tol_mom, "quadrature vs closed forms");
  }));
  out.push_back(guarded(8, "quantum_virial", tol_vir, [&] {
    double worst = 0.0;
    for (double gx0 : gammas) {
      const auto model = QuantumModel::from_gamma_x0(gx0);
      for (int n = 0; n <= 5; ++n) {
        const auto v = virial_quantum(model, n);
        worst = std::max(worst, rel(v.kinetic, v.expected * v.potential));
      }
    }
    return make(8, "quantum_virial", worst, tol_vir, "<T> vs sqrt(1 - gamma^2 a^2) <V>");
  }));
  out.push_back(guarded(8, "uncertainty_bound", 0.0, [&] {
    double violations = 0.0;
    int tested = 0;
    for (double gx0 : {0.05, 0.1, 0.2, 0.3, 0.4}) {
      const auto model = QuantumModel::from_gamma_x0(gx0);
      for (int n = 0; n <= model.n_max(); ++n) {
        if (!(bound_state(model, n).b > 2.0)) continue;
        ++tested;
        if (!(uncertainties(model, n).product >= 0.5 * model.hbar)) violations += 1.0;
      }
    }
    return make(8, "uncertainty_bound", violations, 0.0,
                std::to_string(tested) + " bound states with finite <p^2>");
  }));
  return out;
}

inline CheckResult correspondence(const VerifyOptions& opt) {
  const double tol = 0.05 * opt.tol_scale;
  return guarded(9, "correspondence_l1", tol, [&] {
    const auto c = correspondence_check(QuantumModel::from_gamma_x0(0.2), 10);
    return make(9, "correspondence_l1", c.l1, tol,
                "gamma*x0=0.2, n=10, box window " + format_double(c.window));
  });
}

/// Physicists' Hermite function from the explicit H_n recurrence, used as an
/// independent reference for the constant-mass limit.
inline double reference_hermite_function(int n, double xi) {
  double h_prev = 1.0;
  double h = 2.0 * xi;
  if (n == 0) h = 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * xi * h - 2.0 * k * h_prev;
    h_prev = h;
    h = next;
  }
  const double log_norm = -0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) +
                                  0.5 * std::log(std::numbers::pi));
  return h * std::exp(log_norm - 0.5 * xi * xi);
}

inline CheckResult harmonic_limit(const VerifyOptions& opt) {
  const double tol = 1e-4 * opt.tol_scale;
  return guarded(10, "harmonic_limit", tol, [&] {
    double worst = 0.0;
    std::string where;
    auto note = [&](double err, const char* what) {
      if (err > worst) {
        worst = err;
        where = what;
      }
    };
    const double small = 1e-6;
    const auto cfg = OscillatorConfig::from_control(small);
    for (int i = 0; i < 50; ++i) {
      const double t = 0.31 * i;
      note(std::abs(analytic_position(cfg, t) - std::cos(t)), "trajectory");
      note(std::abs(analytic_velocity(cfg, t) + std::sin(t)), "velocity");
    }
    note(rel(period(cfg), 2.0 * std::numbers::pi), "period");
    note(rel(classical_moments(cfg).mean_x2, 0.5), "classical <x^2>");
    note(rel(classical_moments(cfg).mean_p2, 0.5), "classical <p^2>");

    const auto model = QuantumModel::from_gamma_x0(small);
    for (int n = 0; n <= 10; ++n) {
      note(rel(energy_level(model, n), n + 0.5), "spectrum");
      const auto m = expectation_values(model, n);
      note(rel(m.mean_x2, n + 0.5), "<x^2>");
      note(rel(m.mean_p2, n + 0.5), "<p^2>");
      note(rel(uncertainties(model, n).product, n + 0.5), "uncertainty");
      const Eigenstate psi(model, n);
      double peak = 0.0;
      double err = 0.0;
      for (int i = -60; i <= 60; ++i) {
        const double x = 0.1 * i;
        const double ref = reference_hermite_function(n, x);
        peak = std::max(peak, std::abs(ref));
        err = std::max(err, std::abs(psi(x) - ref));
      }
      note(err / peak, "wavefunction");
    }
    return make(10, "harmonic_limit", worst, tol, "largest deviation: " + where);
  });
}

// ---------------------------------------------------------------------------
// q-calculus
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> q_calculus_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uq(0.2, 1.8);
  std::uniform_real_distribution<double> uu(-2.0, 2.0);
  auto draw = [&](double& q, double& a, double& b) {
    while (true) {
      q = uq(rng);
      a = uu(rng);
      b = uu(rng);
      const double k = 1.0 - q;
      if (1.0 + k * a > 0.05 && 1.0 + k * b > 0.05) return;
    }
  };
  double round_trip = 0.0;
  double group = 0.0;
  double continuity = 0.0;
  double duality = 0.0;
  double eigen = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double q, a, b;
    draw(q, a, b);
    const auto def = Deformation::from_q(q);
    const double v = std::exp(0.5 * b);
    round_trip = std::max({round_trip,
                           std::abs(q_ln(def, q_exp(def, a)) - a) / std::max(1.0, std::abs(a)),
                           std::abs(q_exp(def, q_ln(def, v)) - v) / std::max(1.0, v)});
    group = std::max(group, rel(q_exp(def, a) * q_exp(def, b), q_exp(def, q_add(def, a, b))));

    const auto near = Deformation::from_q(1.0 + (i % 2 ? 1e-9 : -1e-9));
    continuity = std::max({continuity, rel(q_exp(near, a), std::exp(a)),
                           rel(q_ln(near, v), std::log(v)) * (std::abs(std::log(v)) > 1e-3),
                           rel(deformed_variable(near, a), a) * (std::abs(a) > 1e-3)});

    // y(x) = exp_q(x) and its inverse x(y) = ln_q(y)
    const RealFunction y_of_x([def](double x) { return q_exp(def, x); });
    const RealFunction x_of_y([def](double y) { return q_ln(def, y); }, 0.0);
    const double y = q_exp(def, a);
    duality = std::max(duality, std::abs(dual_q_derivative(def, x_of_y, y) *
                                             q_derivative(def, y_of_x, a) -
                                         1.0));
    eigen = std::max({eigen, rel(q_derivative(def, y_of_x, a), y),
                      rel(dual_q_derivative(def, x_of_y, v), 1.0 / v)});
  }
  const double s = opt.tol_scale;
  return {make(11, "q_round_trips", round_trip, 1e-12 * s, "1000 random cases"),
          make(11, "q_group_law", group, 1e-10 * s, "1000 random cases"),
          make(11, "q_unit_continuity", continuity, 1e-6 * s, "q = 1 +- 1e-9"),
          make(11, "q_duality", duality, 1e-8 * s, "D~ x(y) * D y(x) = 1, 1000 cases"),
          make(11, "q_eigenfunctions", eigen, 1e-8 * s, "D exp_q = exp_q, D~ ln_q = 1/u")};
}

// ---------------------------------------------------------------------------
// Infrastructure
// ---------------------------------------------------------------------------

inline SeriesTable sample_table() {
  SeriesTable t({"t", "x", "v"});
  t.set_meta("gamma_scale", 0.5);
  t.set_meta("note", "round trip");
  for (int i = 0; i < 25; ++i) {
    const double s = 0.1 * i + 1e-17 * i;
    t.add_row({s, std::cos(s) / 3.0, -std::sin(s) * 1e-300});
  }
  t.add_row({-0.0, std::numeric_limits<double>::denorm_min(), 1e300});
  return t;
}

inline std::vector<CheckResult> infrastructure(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(guarded(12, "table_round_trip", 0.0, [&] {
    const auto table = sample_table();
    double failures = 0.0;
    for (Format f : {Format::csv, Format::json}) {
      const std::string once = encode(table, f);
      const auto back = decode(once, f);
      if (!(back == table) || encode(back, f) != once) failures += 1.0;
    }
    return make(12, "table_round_trip", failures, 0.0, "csv and json, byte-stable");
  }));
  out.push_back(guarded(12, "mutation_canary", 0.0, [&] {
    // the sign-flipped force must make the period-law check fail
    VerifyOptions mutated = opt;
    mutated.rhs = [](const OscillatorConfig& cfg, double x, double p) {
      auto d = pdm_equations(cfg, x, p);
      d.dp = -d.dp;
      return d;
    };
    const auto r = period_law(mutated);
    return make(12, "mutation_canary", r.pass ? 1.0 : 0.0, 0.0,
                r.pass ? "sign-flipped force went undetected" : "detected: " + r.detail);
  }));
  return out;
}

}  // namespace verify

/// Runs every check of the suite in criterion order.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
  std::vector<CheckResult> all;
  auto add = [&](std::vector<CheckResult> part) {
    for (auto& r : part) all.push_back(std::move(r));
  };
  all.push_back(verify::period_law(opt));
  all.push_back(verify::deformed_newton(opt));
  add(verify::canonical_invariance(opt));
  add(verify::open_regime(opt));
  add(verify::classical_statistics(opt));
  add(verify::spectrum(opt));
  add(verify::eigenfunctions(opt));
  add(verify::quantum_moments(opt));
  all.push_back(verify::correspondence(opt));
  all.push_back(verify::harmonic_limit(opt));
  add(verify::q_calculus_suite(opt));
  add(verify::infrastructure(opt));
  return all;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

/// Machine-readable report: {"version", "passed", "failed", "checks": [...]}.
inline std::string verification_report_json(const std::vector<CheckResult>& results,
                                            double tol_scale) {
  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["tol_scale"] = tol_scale;
  int passed = 0;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    passed += r.pass ? 1 : 0;
    nlohmann::ordered_json c;
    c["criterion"] = r.criterion;
    c["name"] = r.name;
    if (std::isfinite(r.measured)) {
      c["measured"] = r.measured;
    } else {
      c["measured"] = nullptr;
    }
    c["tolerance"] = r.tolerance;
    c["margin"] = std::isfinite(r.measured) ? nlohmann::ordered_json(r.tolerance - r.measured)
                                            : nlohmann::ordered_json(nullptr);
    c["pass"] = r.pass;
    c["detail"] = r.detail;
    checks.push_back(std::move(c));
  }
  doc["passed"] = passed;
  doc["failed"] = static_cast<int>(results.size()) - passed;
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

}  // namespace qdef
