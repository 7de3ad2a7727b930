#pragma once

// Quantum oscillator with position-dependent mass (von Roos ordering
// varsigma = -1/4, zeta = -1/2). Bound states are Morse-type eigenfunctions
//
//   psi_n(x) = A_n / sqrt(y) e^{-d y} (2 d y)^{b/2} L_n^{(b)}(2 d y),
//   y = 1 + gamma x,  d = 1/(gamma x0)^2,  b = 2d - 1 - 2n > 0,
//
// with A_n^2 = b |gamma| n! / Gamma(n + b + 1), times (-1)^n for gamma > 0 so
// that the states join the Hermite functions continuously. Everything is
// evaluated in log space. Below gamma x0 = 1e-5 the constant-mass Hermite functions are
// used instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qdef/classical.hpp"
#include "qdef/errors.hpp"
#include "qdef/model.hpp"
#include "qdef/q_calculus.hpp"
#include "qdef/series_table.hpp"
#include "qdef/special_functions.hpp"

namespace qdef {

/// States with b below this are treated as dissociated.
inline constexpr double kMinBoundB = 1e-6;

/// Drop in ln|psi| from its envelope maximum at which quadratures truncate.
inline constexpr double kSupportLogDrop = 60.0;

struct BoundState {
  int n;
  double energy;
  double b;         // 2d - 1 - 2n (infinite in the harmonic limit)
  double log_norm;  // ln A_n
  double a_qn;      // classical amplitude with the same energy
};

/// E_n = hbar omega0 (n + 1/2) [1 - (gamma x0)^2 (n + 1/2) / 2].
inline double energy_level(const QuantumModel& model, int n) {
  model.validate();
  if (n < 0) throw DomainError("energy_level: n must be >= 0");
  if (n > model.n_max()) throw UnboundStateError(n, model.n_max());
  const double s = n + 0.5;
  const double c = model.gamma_x0() * model.gamma_x0();
  return model.hbar * model.omega0 * s * (1.0 - 0.5 * c * s);
}

/// a_{q,n}^2 = 2 E_n / (m0 omega0^2) = x0^2 (2n+1) [1 - (gamma x0)^2 (2n+1) / 4].
inline double correspondence_amplitude(const QuantumModel& model, int n) {
  const double e = energy_level(model, n);
  return std::sqrt(2.0 * e / (model.m0 * model.omega0 * model.omega0));
}

inline BoundState bound_state(const QuantumModel& model, int n) {
  const double energy = energy_level(model, n);
  const double a = std::sqrt(2.0 * energy / (model.m0 * model.omega0 * model.omega0));
  if (model.harmonic_limit()) {
    return {n, energy, std::numeric_limits<double>::infinity(), 0.0, a};
  }
  const double d = model.d();
  const double b = 2.0 * d - 1.0 - 2.0 * n;
  if (b < kMinBoundB) {
    throw RegimeError("bound_state: b = " + format_double(b) +
                      " is below the dissociation guard for n=" + std::to_string(n));
  }
  const double log_norm =
      0.5 * (std::log(b) + std::log(std::abs(model.gamma)) +
             special::log_gamma(n + 1.0) - special::log_gamma(n + b + 1.0));
  return {n, energy, b, log_norm, a};
}

// ---------------------------------------------------------------------------
// Constant-mass oscillator (Hermite functions)
// ---------------------------------------------------------------------------

/// Normalised Hermite function of the dimensionless coordinate xi,
/// pi^{-1/4} (2^n n!)^{-1/2} H_n(xi) e^{-xi^2/2}, by the orthonormal recurrence.
inline double hermite_function(int n, double xi) {
  if (n < 0) throw DomainError("hermite_function: n must be >= 0");
  const double h0 = std::exp(-0.5 * xi * xi) / std::pow(std::numbers::pi, 0.25);
  if (n == 0) return h0;
  double prev = h0;
  double curr = std::sqrt(2.0) * xi * h0;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * xi * curr -
                        std::sqrt(static_cast<double>(k) / (k + 1.0)) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Constant-mass oscillator eigenfunction psi_n(x) in units length^{-1/2}.
inline double harmonic_wavefunction(const QuantumModel& model, int n, double x) {
  const double x0 = model.x0();
  return hermite_function(n, x / x0) / std::sqrt(x0);
}

inline double harmonic_wavefunction_derivative(const QuantumModel& model, int n,
                                               double x) {
  const double x0 = model.x0();
  const double xi = x / x0;
  double d = -std::sqrt((n + 1.0) / 2.0) * hermite_function(n + 1, xi);
  if (n > 0) d += std::sqrt(n / 2.0) * hermite_function(n - 1, xi);
  return d / (x0 * std::sqrt(x0));
}

// ---------------------------------------------------------------------------
// Eigenstate evaluator
// ---------------------------------------------------------------------------

/// Cached evaluator for one bound state psi_n and its derivative.
class Eigenstate {
 public:
  Eigenstate(const QuantumModel& model, int n)
      : model_(model), state_(bound_state(model, n)) {
    if (!harmonic()) {
      d_ = model.d();
      // c0 = ln A_n - d + (b/2) ln(2d)
      c0_ = state_.log_norm - d_ + 0.5 * state_.b * std::log(2.0 * d_);
      // L_n^{(b)} has leading sign (-1)^n; for gamma > 0 this phase makes
      // psi_n tend to the Hermite function as gamma -> 0+
      if (model.gamma > 0.0 && n % 2 == 1) phase_ = -1.0;
    }
  }

  const QuantumModel& model() const noexcept { return model_; }
  const BoundState& state() const noexcept { return state_; }
  int n() const noexcept { return state_.n; }
  double energy() const noexcept { return state_.energy; }
  bool harmonic() const noexcept { return model_.harmonic_limit(); }

  /// Position of the pole -1/gamma (or -inf when there is none).
  double pole() const {
    if (model_.gamma > 0.0) return -1.0 / model_.gamma;
    return -std::numeric_limits<double>::infinity();
  }
  double upper_edge() const {
    if (model_.gamma < 0.0) return -1.0 / model_.gamma;
    return std::numeric_limits<double>::infinity();
  }

  double operator()(double x) const {
    if (harmonic()) return harmonic_wavefunction(model_, state_.n, x);
    const double t = model_.gamma * x;
    if (!(1.0 + t > 0.0)) {
      throw DomainError("wavefunction: x at or beyond the pole -1/gamma_q");
    }
    const double lag = special::laguerre(state_.n, state_.b, 2.0 * d_ * (1.0 + t));
    if (lag == 0.0) return 0.0;
    return phase_ * std::copysign(std::exp(log_envelope(t) + std::log(std::abs(lag))), lag);
  }

  double derivative(double x) const {
    if (harmonic()) return harmonic_wavefunction_derivative(model_, state_.n, x);
    const double t = model_.gamma * x;
    const double y = 1.0 + t;
    if (!(y > 0.0)) {
      throw DomainError("wavefunction: x at or beyond the pole -1/gamma_q");
    }
    const double u = 2.0 * d_ * y;
    const double lag = special::laguerre(state_.n, state_.b, u);
    const double dlag = special::laguerre_derivative(state_.n, state_.b, u);
    const double bracket =
        lag * ((state_.b - 1.0) / (2.0 * y) - d_) + 2.0 * d_ * dlag;
    return phase_ * model_.gamma * std::exp(log_envelope(t)) * bracket;
  }

  /// Interval outside which |psi| is below e^{-60} of its envelope peak.
  std::pair<double, double> support() const {
    if (harmonic()) {
      const double half = model_.x0() * (std::sqrt(2.0 * state_.n + 1.0) + 11.0);
      return {-half, half};
    }
    // Envelope of ln|psi| in y, with a polynomial allowance n ln(1 + 2 d y).
    const double b = state_.b;
    const int n = state_.n;
    auto env = [&](double y) {
      return 0.5 * (b - 1.0) * std::log(y) - d_ * y +
             n * std::log1p(2.0 * d_ * y);
    };
    // envelope maximum by scanning a log-spaced bracket around y = 1
    double centre = 1.0;
    double best = env(centre);
    for (int i = -400; i <= 400; ++i) {
      const double y = std::pow(10.0, i / 100.0);
      const double e = env(y);
      if (e > best) {
        best = e;
        centre = y;
      }
    }
    const double target = best - kSupportLogDrop;
    double y_lo = 0.0;
    if (b > 1.0) {
      double lo = 0.0;
      double hi = centre;
      if (env(std::numeric_limits<double>::min()) < target) {
        lo = std::numeric_limits<double>::min();
        for (int k = 0; k < 200; ++k) {
          const double mid = std::sqrt(lo * hi);
          if (env(mid) < target) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        y_lo = lo;
      }
    }
    double hi = centre;
    while (env(hi) >= target) hi *= 2.0;
    double lo = centre;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (env(mid) >= target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double y_hi = hi;
    double x_a = (y_lo - 1.0) / model_.gamma;
    double x_b = (y_hi - 1.0) / model_.gamma;
    if (x_a > x_b) std::swap(x_a, x_b);
    return {x_a, x_b};
  }

 private:
  // ln of A_n y^{-1/2} e^{-d y} (2 d y)^{b/2} with y = 1 + t.
  double log_envelope(double t) const {
    return c0_ + 0.5 * (state_.b - 1.0) * std::log1p(t) - d_ * t;
  }

  QuantumModel model_;
  BoundState state_;
  double d_ = 0.0;
  double c0_ = 0.0;
  double phase_ = 1.0;
};

inline double wavefunction(const QuantumModel& model, int n, double x) {
  return Eigenstate(model, n)(x);
}

// ---------------------------------------------------------------------------
// Quadrature over the bound-state support
// ---------------------------------------------------------------------------

/// Integral of f over [lo, hi] split into equal panels, each adaptive.
template <class F>
double integrate_panels(const F& f, double lo, double hi, int panels,
                        const special::QuadratureSpec& spec = {1e-14, 1e-12}) {
  double total = 0.0;
  const double width = (hi - lo) / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = lo + i * width;
    const double b = i + 1 == panels ? hi : a + width;
    total += special::require_converged(special::adaptive_quad(f, a, b, spec),
                                        "integrate_panels");
  }
  return total;
}

/// Integral of f(x) over the support of state n.
template <class F>
double integrate_support(const Eigenstate& state, const F& f,
                         const special::QuadratureSpec& spec = {1e-14, 1e-12}) {
  const auto [lo, hi] = state.support();
  return integrate_panels(f, lo, hi, 16 + 2 * state.n(), spec);
}

struct QuantumMoments {
  double mean_x;
  double mean_x2;
  double mean_p;
  double mean_p2;
};

/// Moments by direct quadrature of psi^2, x psi^2, x^2 psi^2 and
/// hbar^2 psi'^2 (integration by parts of <p^2>); mean_p is zero for a real
/// state. Also returns the norm through `norm`.
inline QuantumMoments quadrature_moments(const QuantumModel& model, int n,
                                         double* norm = nullptr) {
  const Eigenstate psi(model, n);
  const double nrm = integrate_support(psi, [&](double x) {
    const double v = psi(x);
    return v * v;
  });
  const double mx = integrate_support(psi, [&](double x) {
    const double v = psi(x);
    return x * v * v;
  });
  const double mx2 = integrate_support(psi, [&](double x) {
    const double v = psi(x);
    return x * x * v * v;
  });
  const double mp2 = integrate_support(psi, [&](double x) {
    const double dv = psi.derivative(x);
    return dv * dv;
  });
  if (norm) *norm = nrm;
  const double h2 = model.hbar * model.hbar;
  return {mx / nrm, mx2 / nrm, 0.0, h2 * mp2 / nrm};
}

/// <psi_m | psi_n> by quadrature over the union of both supports.
inline double overlap(const QuantumModel& model, int m, int n) {
  const Eigenstate a(model, m);
  const Eigenstate b(model, n);
  const auto [a_lo, a_hi] = a.support();
  const auto [b_lo, b_hi] = b.support();
  return integrate_panels([&](double x) { return a(x) * b(x); },
                          std::min(a_lo, b_lo), std::max(a_hi, b_hi),
                          16 + 2 * std::max(m, n));
}

// ---------------------------------------------------------------------------
// Closed-form moments
// ---------------------------------------------------------------------------

namespace detail {

inline void require_finite_p2(const BoundState& st, const QuantumModel& model) {
  if (!model.harmonic_limit() && !(st.b > 2.0)) {
    throw RegimeError("expectation_values: <p^2> diverges for b <= 2 (n=" +
                      std::to_string(st.n) + ", b=" + format_double(st.b) + ")");
  }
}

}  // namespace detail

/// <x> = -gamma x0^2 (n+1/2), <x^2> = x0^2 (n+1/2), <p> = 0 and
/// <p^2> = m0 omega0 hbar [s - (c/2)(n^2 + n - 1/2)] / [(1 - c s)^2 - c^2]
/// with s = n + 1/2, c = (gamma x0)^2. The <p^2> numerator is the one that
/// agrees with the amplitude form and with quadrature.
inline QuantumMoments expectation_values(const QuantumModel& model, int n) {
  const BoundState st = bound_state(model, n);
  detail::require_finite_p2(st, model);
  const double x0 = model.x0();
  const double s = n + 0.5;
  const double c = model.gamma_x0() * model.gamma_x0();
  const double nn = static_cast<double>(n);
  const double p2 = model.m0 * model.omega0 * model.hbar *
                    (s - 0.5 * c * (nn * nn + nn - 0.5)) /
                    ((1.0 - c * s) * (1.0 - c * s) - c * c);
  return {-model.gamma * x0 * x0 * s, x0 * x0 * s, 0.0, p2};
}

/// <p^2> with the alternative numerator (n^2 + n - 1). Kept to quantify its
/// disagreement with quadrature.
inline double momentum_square_as_printed(const QuantumModel& model, int n) {
  const BoundState st = bound_state(model, n);
  detail::require_finite_p2(st, model);
  const double s = n + 0.5;
  const double c = model.gamma_x0() * model.gamma_x0();
  const double nn = static_cast<double>(n);
  return model.m0 * model.omega0 * model.hbar *
         (s - 0.5 * c * (nn * nn + nn - 1.0)) /
         ((1.0 - c * s) * (1.0 - c * s) - c * c);
}

/// The same moments written through the amplitude a_{q,n}:
/// <x> / a = -(1 - r) / (gamma a), <x^2> / a^2 = (1 - r) / (gamma a)^2,
/// <p^2> = (m0 omega0)^2 / 2 (a^2 + 3/4 gamma^2 x0^4) / (1 - gamma^2 a^2 - gamma^4 x0^4),
/// r = sqrt(1 - gamma^2 a^2).
inline QuantumMoments expectation_values_amplitude_form(const QuantumModel& model,
                                                        int n) {
  const BoundState st = bound_state(model, n);
  detail::require_finite_p2(st, model);
  const double a = st.a_qn;
  const double g = model.gamma;
  const double x0 = model.x0();
  const double r = std::sqrt(1.0 - g * g * a * a);
  const double mw = model.m0 * model.omega0;
  const double g2x04 = g * g * x0 * x0 * x0 * x0;
  return {-g * a * a / (1.0 + r), a * a / (1.0 + r), 0.0,
          0.5 * mw * mw * (a * a + 0.75 * g2x04) / (1.0 - g * g * a * a - g2x04 * g * g)};
}

struct Uncertainty {
  double dx;
  double dp;
  double product;
};

/// Standard deviations from the closed-form moments.
inline Uncertainty uncertainties(const QuantumModel& model, int n) {
  const auto m = expectation_values(model, n);
  const double var_x = m.mean_x2 - m.mean_x * m.mean_x;
  const double dx = std::sqrt(var_x);
  const double dp = std::sqrt(m.mean_p2 - m.mean_p * m.mean_p);
  return {dx, dp, dx * dp};
}

struct QuantumVirial {
  double kinetic;    // <T> = E_n - <V>
  double potential;  // <V> = m0 omega0^2 <x^2> / 2
  double ratio;      // <T> / <V>
  double expected;   // sqrt(1 - gamma^2 a_{q,n}^2) = b / 2d
};

inline QuantumVirial virial_quantum(const QuantumModel& model, int n) {
  const BoundState st = bound_state(model, n);
  const double x0 = model.x0();
  const double V = 0.5 * model.m0 * model.omega0 * model.omega0 * x0 * x0 * (n + 0.5);
  const double T = st.energy - V;
  const double g = model.gamma;
  const double expected = std::sqrt(std::max(0.0, 1.0 - g * g * st.a_qn * st.a_qn));
  return {T, V, T / V, expected};
}

// ---------------------------------------------------------------------------
// Stationary Schrodinger equation checks
// ---------------------------------------------------------------------------

struct UniformGrid {
  double start;
  double step;
  int count;

  double at(int i) const { return start + step * i; }
};

/// Uniform grid with the given step over the support of state n, kept
/// strictly inside the domain.
inline UniformGrid support_grid(const QuantumModel& model, int n, double step) {
  const Eigenstate psi(model, n);
  auto [lo, hi] = psi.support();
  const double pole = psi.pole();
  if (std::isfinite(pole)) lo = std::max(lo, pole + 4.0 * step);
  const double edge = psi.upper_edge();
  if (std::isfinite(edge)) hi = std::min(hi, edge - 4.0 * step);
  const int count = static_cast<int>(std::floor((hi - lo) / step)) + 1;
  return {lo, step, count};
}

/// Sup-norm of the residual of
/// -(hbar^2 y^2 / 2 m0) psi'' - (hbar^2 gamma y / m0) psi' - (hbar^2 gamma^2 / 8 m0) psi
///   + m0 omega0^2 x^2 psi / 2 - E_n psi,
/// with 4th-order central differences on the grid, divided by E_n max|psi|.
inline double schrodinger_residual(const QuantumModel& model, int n,
                                   const UniformGrid& grid) {
  if (grid.count < 5 || !(grid.step > 0.0)) {
    throw DomainError("schrodinger_residual: need at least 5 grid points");
  }
  const Eigenstate psi(model, n);
  std::vector<double> v(static_cast<std::size_t>(grid.count));
  double peak = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    v[i] = psi(grid.at(i));
    peak = std::max(peak, std::abs(v[i]));
  }
  const double h = grid.step;
  const double h2m = model.hbar * model.hbar / model.m0;
  const double g = model.gamma;
  const double E = psi.energy();
  double worst = 0.0;
  for (int i = 2; i + 2 < grid.count; ++i) {
    const double x = grid.at(i);
    const double y = 1.0 + g * x;
    const double d1 = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
    const double d2 = (-v[i + 2] + 16.0 * v[i + 1] - 30.0 * v[i] + 16.0 * v[i - 1] - v[i - 2]) /
                      (12.0 * h * h);
    const double r = -0.5 * h2m * y * y * d2 - h2m * g * y * d1 - h2m * g * g / 8.0 * v[i] +
                     0.5 * model.m0 * model.omega0 * model.omega0 * x * x * v[i] - E * v[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst / (E * peak);
}

/// phi_q(x) = sqrt(1 + gamma x) psi(x) pointwise.
inline std::vector<double> transform_field(const QuantumModel& model,
                                           const std::vector<double>& psi,
                                           const std::vector<double>& x) {
  if (psi.size() != x.size()) throw DomainError("transform_field: size mismatch");
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double y = 1.0 + model.gamma * x[i];
    if (!(y > 0.0)) throw DomainError("transform_field: grid point beyond the pole");
    out[i] = std::sqrt(y) * psi[i];
  }
  return out;
}

/// psi(x) = phi_q(x) / sqrt(1 + gamma x) pointwise.
inline std::vector<double> inverse_transform_field(const QuantumModel& model,
                                                   const std::vector<double>& phi,
                                                   const std::vector<double>& x) {
  if (phi.size() != x.size()) throw DomainError("inverse_transform_field: size mismatch");
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double y = 1.0 + model.gamma * x[i];
    if (!(y > 0.0)) throw DomainError("inverse_transform_field: grid point beyond the pole");
    out[i] = phi[i] / std::sqrt(y);
  }
  return out;
}

/// The deformed field phi_q = sqrt(1 + gamma x) psi_n as a RealFunction of x
/// with its analytic derivative.
inline RealFunction deformed_field(const QuantumModel& model, int n) {
  const Eigenstate psi(model, n);
  const double g = model.gamma;
  const double lower = g > 0.0 ? -1.0 / g : -std::numeric_limits<double>::infinity();
  const double upper = g < 0.0 ? -1.0 / g : std::numeric_limits<double>::infinity();
  return RealFunction([psi, g](double x) { return std::sqrt(1.0 + g * x) * psi(x); },
                      lower, upper)
      .with_derivative([psi, g](double x) {
        const double y = 1.0 + g * x;
        const double root = std::sqrt(y);
        return 0.5 * g / root * psi(x) + root * psi.derivative(x);
      });
}

/// Residual of -(hbar^2 / 2 m0) D^2 phi_q + m0 omega0^2 x^2 phi_q / 2 - E_n phi_q
/// at the given points, D = (1 + gamma x) d/dx taken as the q-derivative with
/// (1 - q) = gamma and xi = 1. Sup-norm divided by E_n max|phi_q|.
inline double deformed_schrodinger_residual(const QuantumModel& model, int n,
                                            const std::vector<double>& points) {
  const RealFunction phi = deformed_field(model, n);
  const Deformation def = Deformation::from_gamma(model.gamma, 1.0);
  const double E = energy_level(model, n);
  double worst = 0.0;
  double peak = 0.0;
  for (double x : points) {
    const double f = phi(x);
    const double r = -0.5 * model.hbar * model.hbar / model.m0 *
                         q_derivative_second(def, phi, x) +
                     0.5 * model.m0 * model.omega0 * model.omega0 * x * x * f - E * f;
    worst = std::max(worst, std::abs(r));
    peak = std::max(peak, std::abs(f));
  }
  return worst / (E * peak);
}

/// q-integral norm of the deformed field, int phi_q^2 dx / (1 + gamma x).
inline double deformed_overlap(const QuantumModel& model, int m, int n) {
  const RealFunction phi_m = deformed_field(model, m);
  const RealFunction phi_n = deformed_field(model, n);
  const Eigenstate a(model, m);
  const Eigenstate b(model, n);
  const auto [a_lo, a_hi] = a.support();
  const auto [b_lo, b_hi] = b.support();
  const double lo = std::min(a_lo, b_lo);
  const double hi = std::max(a_hi, b_hi);
  const Deformation def = Deformation::from_gamma(model.gamma, 1.0);
  const int panels = 16 + 2 * std::max(m, n);
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x_a = lo + (hi - lo) * i / panels;
    const double x_b = i + 1 == panels ? hi : lo + (hi - lo) * (i + 1) / panels;
    total += q_integral(def, [&](double x) { return phi_m(x) * phi_n(x); }, x_a, x_b,
                        {1e-14, 1e-12});
  }
  return total;
}

/// Probability current Re{ psi* (hbar/i) d/dx [psi / m(x)] } for a complex
/// state given with its derivative at x. Time-dependent continuity is not
/// modelled; for the real stationary states the current vanishes.
inline double probability_current(const QuantumModel& model, std::complex<double> psi,
                                  std::complex<double> dpsi, double x) {
  const double y = 1.0 + model.gamma * x;
  if (!(y > 0.0)) throw DomainError("probability_current: x beyond the pole");
  // d/dx [psi y^2 / m0] = (psi' y^2 + 2 gamma y psi) / m0
  const std::complex<double> d_over_m = (dpsi * (y * y) + 2.0 * model.gamma * y * psi) / model.m0;
  const std::complex<double> minus_i_hbar(0.0, -model.hbar);
  return std::real(std::conj(psi) * minus_i_hbar * d_over_m);
}

inline double stationary_current(const QuantumModel& model, int n, double x) {
  const Eigenstate psi(model, n);
  return probability_current(model, {psi(x), 0.0}, {psi.derivative(x), 0.0}, x);
}

// ---------------------------------------------------------------------------
// Correspondence with the classical density
// ---------------------------------------------------------------------------

struct Correspondence {
  double l1;      // int |<rho>_w - P_classic| over the clipped interior
  double window;  // averaging width
  double amplitude;
  SeriesTable curves;  // x, rho, rho_avg, rho_classic
};

/// de Broglie wavelength at x = 0 for the classical orbit of amplitude a_{q,n}:
/// 2 pi hbar / (m0 omega0 a).
inline double central_wavelength(const QuantumModel& model, int n) {
  const double a = correspondence_amplitude(model, n);
  return 2.0 * std::numbers::pi * model.hbar / (model.m0 * model.omega0 * a);
}

/// Box average of |psi_n|^2 over `window` compared with the classical
/// density of amplitude a_{q,n}, on (-a, a) clipped 2% of a at each end.
/// window <= 0 selects the central de Broglie wavelength.
inline Correspondence correspondence_check(const QuantumModel& model, int n,
                                           double window = 0.0,
                                           int points_per_window = 100) {
  const Eigenstate psi(model, n);
  const double a = psi.state().a_qn;
  const double w = window > 0.0 ? window : central_wavelength(model, n);
  const OscillatorConfig cl{model.m0, model.omega0, model.gamma, a, 0.0};
  const double edge = 0.98 * a;
  const double h = w / points_per_window;
  const int half = points_per_window / 2;
  const double start = -edge - half * h;
  const int count = static_cast<int>(std::ceil((2.0 * edge + 2.0 * half * h) / h)) + 1;

  // cumulative probability F on the grid
  auto rho = [&](double x) {
    if (!(1.0 + model.gamma * x > 0.0)) return 0.0;
    const double v = psi(x);
    return v * v;
  };
  std::vector<double> F(static_cast<std::size_t>(count), 0.0);
  for (int i = 1; i < count; ++i) {
    const double xa = start + (i - 1) * h;
    F[i] = F[i - 1] + special::require_converged(
                          special::adaptive_quad(rho, xa, xa + h, {1e-15, 1e-12}),
                          "correspondence_check");
  }

  Correspondence out{0.0, w, a, SeriesTable({"x", "rho", "rho_avg", "rho_classic"})};
  double prev_x = 0.0;
  double prev_diff = 0.0;
  bool first = true;
  for (int i = half; i + half < count; ++i) {
    const double x = start + i * h;
    if (x < -edge - 1e-12 * a || x > edge + 1e-12 * a) continue;
    const double avg = (F[i + half] - F[i - half]) / (2.0 * half * h);
    const double pc = classical_density(cl, x);
    out.curves.add_row({x, rho(x), avg, pc});
    const double diff = std::abs(avg - pc);
    if (!first) out.l1 += 0.5 * (diff + prev_diff) * (x - prev_x);
    prev_x = x;
    prev_diff = diff;
    first = false;
  }
  out.curves.set_meta("window", w);
  out.curves.set_meta("a_qn", a);
  out.curves.set_meta("l1", out.l1);
  return out;
}

// ---------------------------------------------------------------------------
// Two-dimensional product states
// ---------------------------------------------------------------------------

/// rho(x, y) = |psi_{n1}(x) psi_{n2}(y)|^2 on the tensor grid xs x ys.
/// Points beyond a pole carry zero density.
inline SeriesTable density_2d(const QuantumModel& model_x, const QuantumModel& model_y,
                              int n1, int n2, const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  const Eigenstate px(model_x, n1);
  const Eigenstate py(model_y, n2);
  auto safe = [](const Eigenstate& s, const QuantumModel& m, double v) {
    if (!(1.0 + m.gamma * v > 0.0)) return 0.0;
    return s(v);
  };
  std::vector<double> fy(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) fy[j] = safe(py, model_y, ys[j]);
  SeriesTable table({"x", "y", "rho"});
  for (double x : xs) {
    const double fx = safe(px, model_x, x);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double amp = fx * fy[j];
      table.add_row({x, ys[j], amp * amp});
    }
  }
  return table;
}

}  // namespace qdef
