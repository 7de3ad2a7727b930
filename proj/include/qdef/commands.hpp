#pragma once

// Data-producing commands. Each writes one or more SeriesTables under
// cfg.out and returns the written paths.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "qdef/classical.hpp"
#include "qdef/config.hpp"
#include "qdef/errors.hpp"
#include "qdef/model.hpp"
#include "qdef/quantum.hpp"
#include "qdef/series_table.hpp"
#include "qdef/verify.hpp"
#include "qdef/version.hpp"

namespace qdef {

namespace detail {

inline void stamp(SeriesTable& table, const RunConfig& cfg, double gamma_q,
                  double gamma_scale, const char* scale_name, double step) {
  table.set_meta("command", cfg.command);
  table.set_meta("version", kVersion);
  table.set_meta("units", cfg.natural_units ? "natural" : "user");
  table.set_meta("gamma_q", gamma_q);
  table.set_meta("gamma_scale", gamma_scale);
  table.set_meta("scale", scale_name);
  table.set_meta("m0", cfg.m0);
  table.set_meta("omega0", cfg.omega0);
  table.set_meta("hbar", cfg.hbar);
  table.set_meta("step", step);
}

inline std::string write_output(const RunConfig& cfg, const std::string& stem,
                                const SeriesTable& table) {
  std::filesystem::create_directories(cfg.out);
  const std::string path =
      (std::filesystem::path(cfg.out) / (stem + extension(cfg.format))).string();
  write_table(path, table, cfg.format);
  return path;
}

inline std::string tag(double v) { return format_double(v); }

inline QuantumModel quantum_model(const RunConfig& cfg, double gamma_q) {
  QuantumModel model{cfg.m0, cfg.omega0, cfg.hbar, gamma_q};
  model.validate();
  return model;
}

inline void require_bound(const QuantumModel& model, int n) {
  if (n > model.n_max()) throw UnboundStateError(n, model.n_max());
}

inline std::vector<int> levels_or(const RunConfig& cfg, std::vector<int> fallback) {
  return cfg.levels_set ? cfg.levels : fallback;
}

/// Grid over [lo, hi] with `count` points.
inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  }
  return out;
}

/// Spatial window for plotting the lowest states of a model, kept inside the domain.
inline std::pair<double, double> plot_window(const QuantumModel& model, int n_top) {
  const double x0 = model.x0();
  const double half = x0 * (std::sqrt(2.0 * n_top + 1.0) + 4.0);
  double lo = -half;
  double hi = half;
  if (model.gamma > 0.0) lo = std::max(lo, -0.999 / model.gamma);
  if (model.gamma < 0.0) hi = std::min(hi, -0.999 / model.gamma);
  return {lo, hi};
}

}  // namespace detail

/// Trajectories (t, x, v, a, theta, p, x_q, p_q, E) for every gamma_q A.
/// Open orbits (gamma_q A > 1) start at the turning point and carry t* in
/// the metadata; theta is not defined there and is written as NaN.
inline std::vector<std::string> cmd_classical(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.0, 0.5, 0.9});
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    OscillatorConfig osc{cfg.m0, cfg.omega0, gamma_q, cfg.amplitude, cfg.delta};
    osc.validate();
    const double g = osc.control();
    if (std::abs(g) == 1.0) {
      throw ValidationError("field 'gamma': gamma_q A = 1 is the separatrix, not supported");
    }
    if (g < -1.0) {
      throw ValidationError("field 'gamma': gamma_q A < -1 is outside the open-orbit model");
    }
    SeriesTable table({"t", "x", "v", "a", "theta", "p", "x_q", "p_q", "E"});
    double step = 0.0;
    if (osc.periodic()) {
      const double span = cfg.periods * period(osc);
      step = span / (cfg.samples - 1);
      for (int i = 0; i < cfg.samples; ++i) {
        const double t = step * i;
        const double x = analytic_position(osc, t);
        const double v = analytic_velocity(osc, t);
        const double p = pdm_mass(osc, x) * v;
        const auto d = canonical_map(osc, {t, x, p});
        table.add_row({t, x, v, analytic_acceleration(osc, t), analytic_phase(osc, t), p, d.x_q,
                       d.p_q, hamiltonian(osc, {t, x, p})});
      }
      table.set_meta("period", period(osc));
    } else {
      const double span = cfg.periods * osc.base_period();
      step = span / (cfg.samples - 1);
      const int refine = std::max(1, static_cast<int>(std::ceil(step / default_open_step(osc))));
      const auto fine = integrate_open_orbit(osc, span, step / refine);
      for (std::size_t i = 0; i < fine.size(); i += static_cast<std::size_t>(refine)) {
        const auto& r = fine.rows()[i];
        const double y = r[6];
        const double p = y > 0.0 ? r[5] / y : std::nan("");
        const double E = y > 0.0 ? r[5] * r[5] / (2.0 * osc.m0) + potential(osc, r[1])
                                 : std::nan("");
        table.add_row({r[0], r[1], r[2], r[3], std::nan(""), p, r[4], r[5], E});
      }
      table.set_meta("t_star", t_star(osc));
      table.set_meta("t_star_as_printed", t_star_as_printed(osc));
      table.set_meta("x_star", speed_peak_position(osc));
      table.set_meta("p_q_max", max_deformed_momentum(osc));
    }
    detail::stamp(table, cfg, gamma_q, g, "amplitude", step);
    table.set_meta("amplitude", osc.amplitude);
    table.set_meta("delta", osc.delta);
    paths.push_back(detail::write_output(cfg, "classical_gA_" + detail::tag(g), table));
  }
  return paths;
}

/// Phase-space orbits in (x, p) and (x_q, p_q).
inline std::vector<std::string> cmd_phase_space(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.0, 0.5, 0.9, 2.0});
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    OscillatorConfig osc{cfg.m0, cfg.omega0, gamma_q, cfg.amplitude, 0.0};
    osc.validate();
    const double g = osc.control();
    if (std::abs(g) == 1.0 || g < -1.0) {
      throw ValidationError("field 'gamma': gamma_q A must avoid 1 and stay above -1");
    }
    auto table = phase_orbit(osc, cfg.samples - 1, 0.5 * cfg.periods * osc.base_period());
    const double span = osc.periodic() ? period(osc) : cfg.periods * osc.base_period();
    detail::stamp(table, cfg, gamma_q, g, "amplitude", span / (cfg.samples - 1));
    table.set_meta("amplitude", osc.amplitude);
    if (!osc.periodic()) table.set_meta("p_q_max", max_deformed_momentum(osc));
    paths.push_back(detail::write_output(cfg, "phase_space_gA_" + detail::tag(g), table));
  }
  return paths;
}

/// Lissajous curve of two periodic oscillators; y uses gamma_y (default: the
/// same gamma_q A) and omega_y = omega_ratio * omega0.
inline std::vector<std::string> cmd_lissajous(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.5});
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    OscillatorConfig ox{cfg.m0, cfg.omega0, gamma_q, cfg.amplitude, 0.0};
    const double gy = cfg.gamma_y ? *cfg.gamma_y / cfg.scale : gamma_q;
    OscillatorConfig oy{cfg.m0, cfg.omega_ratio * cfg.omega0, gy, cfg.amplitude, 0.0};
    ox.validate();
    oy.validate();
    if (!ox.periodic() || !oy.periodic()) {
      throw ValidationError("lissajous: both oscillators need |gamma_q A| < 1");
    }
    const double span = cfg.periods * std::max(period(ox), period(oy));
    const auto grid = detail::linspace(0.0, span, cfg.samples);
    auto table = lissajous(ox, oy, grid);
    detail::stamp(table, cfg, gamma_q, ox.control(), "amplitude", span / (cfg.samples - 1));
    table.set_meta("gamma_scale_y", oy.control());
    table.set_meta("omega_ratio", cfg.omega_ratio);
    paths.push_back(
        detail::write_output(cfg, "lissajous_gA_" + detail::tag(ox.control()), table));
  }
  return paths;
}

/// Energy levels (n, E_n, E_n/eps0, b, a_qn) and the Morse potential curve
/// V(x_q) for each gamma_q x0. eps0 = hbar omega0 / 2.
inline std::vector<std::string> cmd_spectrum(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.3});
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    const auto model = detail::quantum_model(cfg, gamma_q);
    const double gx0 = model.gamma_x0();
    if (model.n_max() < 0) throw ValidationError("spectrum: no bound states at this gamma_q x0");
    const int top = std::min(model.n_max(), 200);
    std::vector<int> levels;
    if (cfg.levels_set) {
      levels = cfg.levels;
      for (int n : levels) detail::require_bound(model, n);
    } else {
      for (int n = 0; n <= top; ++n) levels.push_back(n);
    }
    const double eps0 = 0.5 * model.hbar * model.omega0;
    SeriesTable table({"n", "E", "E_over_eps0", "b", "a_qn"});
    for (int n : levels) {
      const auto st = bound_state(model, n);
      table.add_row({static_cast<double>(n), st.energy, st.energy / eps0, st.b, st.a_qn});
    }
    detail::stamp(table, cfg, gamma_q, gx0, "x0", 1.0);
    table.set_meta("n_max", model.n_max());
    table.set_meta("W_q", model.binding_energy());
    paths.push_back(detail::write_output(cfg, "spectrum_gx0_" + detail::tag(gx0), table));

    // Morse curve V(x_q) = W_q (e^{gamma x_q} - 1)^2 in the deformed coordinate
    OscillatorConfig osc{model.m0, model.omega0, gamma_q, 1.0, 0.0};
    double lo = -6.0 * model.x0();
    double hi = 6.0 * model.x0();
    if (gamma_q != 0.0) {
      // e^{gamma x_q} from 0.05 (V near W_q) to 2.2
      lo = std::log(0.05) / gamma_q;
      hi = std::log(2.2) / gamma_q;
    }
    SeriesTable curve({"x_q", "V"});
    const auto grid = detail::linspace(std::min(lo, hi), std::max(lo, hi), cfg.samples);
    for (double xq : grid) curve.add_row({xq, morse_potential(osc, xq)});
    detail::stamp(curve, cfg, gamma_q, gx0, "x0", grid.size() > 1 ? grid[1] - grid[0] : 0.0);
    curve.set_meta("W_q", model.binding_energy());
    paths.push_back(detail::write_output(cfg, "morse_curve_gx0_" + detail::tag(gx0), curve));
  }
  return paths;
}

/// psi_n and |psi_n|^2 on a common x grid, one file per gamma_q x0.
/// Grid points beyond the pole carry zero.
inline std::vector<std::string> cmd_wavefunctions(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.0, 0.1, 0.2, 0.3});
  const auto levels = detail::levels_or(cfg, {0, 1, 2, 3});
  if (levels.empty()) throw ValidationError("field 'levels': empty list");
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    const auto model = detail::quantum_model(cfg, gamma_q);
    std::vector<Eigenstate> states;
    for (int n : levels) {
      detail::require_bound(model, n);
      states.emplace_back(model, n);
    }
    std::vector<std::string> cols{"x"};
    for (int n : levels) {
      cols.push_back("psi_" + std::to_string(n));
      cols.push_back("rho_" + std::to_string(n));
    }
    SeriesTable table(cols);
    const auto [lo, hi] =
        detail::plot_window(model, *std::max_element(levels.begin(), levels.end()));
    const auto grid = detail::linspace(lo, hi, cfg.samples);
    for (double x : grid) {
      std::vector<double> row{x};
      for (const auto& s : states) {
        const double v = 1.0 + gamma_q * x > 0.0 ? s(x) : 0.0;
        row.push_back(v);
        row.push_back(v * v);
      }
      table.add_row(std::move(row));
    }
    detail::stamp(table, cfg, gamma_q, model.gamma_x0(), "x0", grid[1] - grid[0]);
    table.set_meta("n_max", model.n_max());
    paths.push_back(
        detail::write_output(cfg, "wavefunctions_gx0_" + detail::tag(model.gamma_x0()), table));
  }
  return paths;
}

/// |psi_{n1}(x) psi_{n2}(y)|^2 on a samples x samples grid; the y factor
/// uses gamma_y (default: the same gamma_q x0) and n2.
inline std::vector<std::string> cmd_density2d(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.2});
  const auto levels = detail::levels_or(cfg, {1});
  if (levels.empty()) throw ValidationError("field 'levels': empty list");
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    const auto mx = detail::quantum_model(cfg, gamma_q);
    const auto my = detail::quantum_model(cfg, cfg.gamma_y ? *cfg.gamma_y / cfg.scale : gamma_q);
    const int n1 = levels.front();
    detail::require_bound(mx, n1);
    detail::require_bound(my, cfg.n2);
    const auto [xlo, xhi] = detail::plot_window(mx, n1);
    const auto [ylo, yhi] = detail::plot_window(my, cfg.n2);
    const auto xs = detail::linspace(xlo, xhi, cfg.samples);
    const auto ys = detail::linspace(ylo, yhi, cfg.samples);
    auto table = density_2d(mx, my, n1, cfg.n2, xs, ys);
    detail::stamp(table, cfg, gamma_q, mx.gamma_x0(), "x0", xs[1] - xs[0]);
    table.set_meta("gamma_scale_y", my.gamma_x0());
    table.set_meta("n1", n1);
    table.set_meta("n2", cfg.n2);
    paths.push_back(detail::write_output(
        cfg, "density2d_gx0_" + detail::tag(mx.gamma_x0()) + "_n" + std::to_string(n1) + "_" +
                 std::to_string(cfg.n2),
        table));
  }
  return paths;
}

/// Windowed quantum density against the classical one; the L1 distance is
/// stored in the metadata.
inline std::vector<std::string> cmd_correspondence(const RunConfig& cfg) {
  const auto gammas = deformation_values(cfg, {0.2});
  const auto levels = detail::levels_or(cfg, {10});
  std::vector<std::string> paths;
  for (double gamma_q : gammas) {
    const auto model = detail::quantum_model(cfg, gamma_q);
    for (int n : levels) {
      detail::require_bound(model, n);
      auto c = correspondence_check(model, n, cfg.window);
      const auto& x = c.curves.rows();
      const double step = x.size() > 1 ? x[1][0] - x[0][0] : 0.0;
      detail::stamp(c.curves, cfg, gamma_q, model.gamma_x0(), "x0", step);
      c.curves.set_meta("n", n);
      paths.push_back(detail::write_output(
          cfg, "correspondence_gx0_" + detail::tag(model.gamma_x0()) + "_n" + std::to_string(n),
          c.curves));
    }
  }
  return paths;
}

/// Dx, Dp and Dx Dp / hbar over a gamma_q x0 sweep for each n. States whose
/// <p^2> diverges (b <= 2) or that are unbound are skipped.
inline std::vector<std::string> cmd_uncertainty(const RunConfig& cfg) {
  std::vector<double> sweep;
  for (int i = 0; i <= 30; ++i) sweep.push_back(0.01 * i);
  const auto gammas = deformation_values(cfg, sweep);
  const auto levels = detail::levels_or(cfg, {0, 1, 2, 3});
  SeriesTable table({"gamma_x0", "n", "dx", "dp", "product_over_hbar"});
  for (double gamma_q : gammas) {
    const auto model = detail::quantum_model(cfg, gamma_q);
    for (int n : levels) {
      if (n > model.n_max()) continue;
      if (!model.harmonic_limit() && !(bound_state(model, n).b > 2.0)) continue;
      const auto u = uncertainties(model, n);
      table.add_row({model.gamma_x0(), static_cast<double>(n), u.dx, u.dp,
                     u.product / model.hbar});
    }
  }
  if (table.empty()) throw ValidationError("uncertainty: no state with finite <p^2> requested");
  const double x0 = std::sqrt(cfg.hbar / (cfg.m0 * cfg.omega0));
  detail::stamp(table, cfg, gammas.front(), gammas.front() * x0, "x0",
                gammas.size() > 1 ? (gammas[1] - gammas[0]) * x0 : 0.0);
  table.set_meta("gamma_scale_last", gammas.back() * x0);
  return {detail::write_output(cfg, "uncertainty", table)};
}

struct VerifyOutcome {
  std::vector<CheckResult> results;
  std::string report_path;
  bool passed;
};

/// Runs the full suite and writes verify_report.json under cfg.out.
inline VerifyOutcome cmd_verify(const RunConfig& cfg, const VerifyOptions& base = {}) {
  VerifyOptions opt = base;
  opt.tol_scale = cfg.tol;
  VerifyOutcome out{run_verification(opt), {}, false};
  out.passed = all_passed(out.results);
  std::filesystem::create_directories(cfg.out);
  out.report_path = (std::filesystem::path(cfg.out) / "verify_report.json").string();
  std::ofstream file(out.report_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ValidationError("cannot open '" + out.report_path + "' for writing");
  file << verification_report_json(out.results, cfg.tol);
  return out;
}

}  // namespace qdef
