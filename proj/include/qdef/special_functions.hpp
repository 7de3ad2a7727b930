#pragma once

// Numerical kernels shared by the physics headers: log-gamma, associated
// Laguerre polynomials with real upper index, central difference stencils
// and an adaptive Gauss-Kronrod quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qdef/errors.hpp"

namespace qdef::special {

/// ln Gamma(z) for z > 0.
///
/// Lanczos approximation (g = 607/128 family, 14 terms). Relative accuracy is
/// better than 1e-14 away from the zeros at z = 1 and z = 2, which are
/// returned exactly.
inline double log_gamma(double z) {
  if (!(z > 0.0)) {
    throw DomainError("log_gamma: argument must be positive");
  }
  if (z == 1.0 || z == 2.0) return 0.0;
  static constexpr std::array<double, 14> kCof = {
      57.1562356658629235,     -59.5979603554754912,
      14.1360979747417471,     -0.491913816097620199,
      .339946499848118887e-4,  .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,
      -.210264441724104883e-3, .217439618115212643e-3,
      -.164318106536763890e-3, .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  double y = z;
  double tmp = z + 5.24218750000000000;
  tmp = (z + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : kCof) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / z);
}

/// Associated Laguerre polynomial L_n^{(b)}(u) for real b > -1, by the
/// ascending three-term recurrence in n.
///
/// Stable for the bound-state envelope used here (n <= 200, u <= 1e5).
inline double laguerre(int n, double b, double u) {
  if (n < 0) throw DomainError("laguerre: degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 1.0 + b - u;
  for (int k = 1; k < n; ++k) {
    const double next =
        ((2.0 * k + 1.0 + b - u) * curr - (k + b) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

/// d/du L_n^{(b)}(u) = -L_{n-1}^{(b+1)}(u).
inline double laguerre_derivative(int n, double b, double u) {
  if (n == 0) return 0.0;
  return -laguerre(n - 1, b + 1.0, u);
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Default step for first derivatives: cbrt(eps) scaled by max(1, |u|).
inline double default_first_step(double u) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) *
         std::max(1.0, std::abs(u));
}

/// Default step for second derivatives with the 4th-order stencil.
inline double default_second_step(double u) {
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) *
         std::max(1.0, std::abs(u));
}

/// Central difference estimate of the first (order = 1) or second
/// (order = 2) derivative of f at u, with accuracy order 2 or 4.
/// A non-positive step selects the default for the requested order.
template <class F>
double central_diff(const F& f, double u, int order = 1, int accuracy = 4,
                    double step = 0.0) {
  if (order != 1 && order != 2) {
    throw DomainError("central_diff: order must be 1 or 2");
  }
  if (accuracy != 2 && accuracy != 4) {
    throw DomainError("central_diff: accuracy must be 2 or 4");
  }
  double h = step;
  if (!(h > 0.0)) {
    h = order == 1 ? default_first_step(u) : default_second_step(u);
  }
  // Make u +/- h exactly representable offsets.
  volatile double probe = u + h;
  h = probe - u;

  if (order == 1) {
    const double fp1 = f(u + h);
    const double fm1 = f(u - h);
    if (accuracy == 2) return (fp1 - fm1) / (2.0 * h);
    const double fp2 = f(u + 2.0 * h);
    const double fm2 = f(u - 2.0 * h);
    return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  }
  const double f0 = f(u);
  const double fp1 = f(u + h);
  const double fm1 = f(u - h);
  if (accuracy == 2) return (fp1 - 2.0 * f0 + fm1) / (h * h);
  const double fp2 = f(u + 2.0 * h);
  const double fm2 = f(u - 2.0 * h);
  return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 50;
  std::size_t max_intervals = 20000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod15(const F& f, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half),
               depth};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol * |value|). Panels that reach
/// max_depth are frozen; if the target is still missed the result carries
/// converged = false. Endpoint singularities must be removed by the caller.
template <class F>
QuadResult adaptive_quad(const F& f, double a, double b,
                         const QuadratureSpec& spec = {}) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_depth < 1) {
    throw DomainError("adaptive_quad: tolerances must be positive");
  }
  if (a == b) return {};
  if (a > b) {
    QuadResult r = adaptive_quad(f, b, a, spec);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<detail::Panel> open;
  std::vector<detail::Panel> frozen;
  QuadResult result;
  open.push(detail::gauss_kronrod15(f, a, b, 0));
  result.evaluations = 15;

  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    auto copy = open;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& p : frozen) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double value = open.top().value;
  double error = open.top().error;
  std::size_t splits = 0;
  while (true) {
    if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) break;
    if (open.empty() || open.size() + frozen.size() >= spec.max_intervals) {
      result.converged = false;
      break;
    }
    detail::Panel worst = open.top();
    open.pop();
    if (worst.depth >= spec.max_depth) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod15(f, worst.a, mid, worst.depth + 1);
    const auto right =
        detail::gauss_kronrod15(f, mid, worst.b, worst.depth + 1);
    result.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    // Re-sum periodically to stop drift in the running totals.
    if (++splits % 128 == 0) std::tie(value, error) = totals();
  }
  std::tie(result.value, result.error) = totals();
  if (result.error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    result.converged = false;
  }
  return result;
}

/// Integral of f over [a, inf) via the map x = a + t / (1 - t), t in [0, 1).
template <class F>
QuadResult adaptive_quad_semi_infinite(const F& f, double a,
                                       const QuadratureSpec& spec = {}) {
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx / (one_minus * one_minus);
  };
  return adaptive_quad(mapped, 0.0, 1.0, spec);
}

/// Throws NumericalError when a quadrature did not converge.
inline double require_converged(const QuadResult& r, const char* what) {
  if (!r.converged) {
    throw NumericalError(std::string(what) +
                         ": quadrature did not reach tolerance (error estimate " +
                         std::to_string(r.error) + ")");
  }
  return r.value;
}

}  // namespace qdef::special
