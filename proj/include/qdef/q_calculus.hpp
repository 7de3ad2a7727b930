#pragma once

// q-deformed algebra: q-exponential and q-logarithm, q-addition and
// q-subtraction, the deformed variable u_q, the q-derivative and its dual,
// and the q-integral with measure dx / (1 + gamma_q x).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "qdef/errors.hpp"
#include "qdef/special_functions.hpp"

namespace qdef {

/// Below this |1 - q| the ordinary exp / log / derivative branches are used.
inline constexpr double kUnitQThreshold = 1e-8;

/// Deformation parameters (q, xi) with gamma_q = (1 - q) / xi derived.
///
/// Only (1 - q) and xi are stored, so gamma_q * xi reproduces 1 - q up to
/// one rounding.
class Deformation {
 public:
  static Deformation from_q(double q, double xi = 1.0) {
    return Deformation(1.0 - q, xi);
  }
  static Deformation from_gamma(double gamma_q, double xi = 1.0) {
    return Deformation(gamma_q * xi, xi);
  }

  double q() const noexcept { return 1.0 - one_minus_q_; }
  double one_minus_q() const noexcept { return one_minus_q_; }
  double xi() const noexcept { return xi_; }
  double gamma() const noexcept { return one_minus_q_ / xi_; }
  bool near_unit_q() const noexcept {
    return std::abs(one_minus_q_) < kUnitQThreshold;
  }
  /// 1 + (1 - q) u, the bracket shared by every deformed operation.
  double bracket(double u) const noexcept { return 1.0 + one_minus_q_ * u; }
  bool in_domain(double u) const noexcept { return bracket(u) > 0.0; }

 private:
  Deformation(double one_minus_q, double xi)
      : one_minus_q_(one_minus_q), xi_(xi) {
    if (!std::isfinite(one_minus_q) || !(xi > 0.0) || !std::isfinite(xi)) {
      throw DomainError("Deformation: q must be finite and xi positive");
    }
  }

  double one_minus_q_;
  double xi_;
};

/// A real map u -> f(u) on [lower, upper] with an optional analytic
/// derivative. Without one, derivatives fall back to 4th-order central
/// differences.
class RealFunction {
 public:
  using Map = std::function<double(double)>;

  explicit RealFunction(Map f,
                        double lower = -std::numeric_limits<double>::infinity(),
                        double upper = std::numeric_limits<double>::infinity())
      : f_(std::move(f)), lower_(lower), upper_(upper) {
    if (!(lower < upper)) throw DomainError("RealFunction: empty interval");
  }

  RealFunction with_derivative(Map df) const {
    RealFunction copy = *this;
    copy.df_ = std::move(df);
    return copy;
  }

  double operator()(double u) const { return f_(u); }
  bool has_derivative() const noexcept { return df_.has_value(); }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  bool contains(double u) const noexcept { return u >= lower_ && u <= upper_; }

  double derivative(double u) const {
    if (df_) return (*df_)(u);
    return special::central_diff(f_, u, 1, 4);
  }
  double second_derivative(double u) const {
    if (df_) return special::central_diff(*df_, u, 1, 4);
    return special::central_diff(f_, u, 2, 4);
  }

 private:
  Map f_;
  std::optional<Map> df_;
  double lower_;
  double upper_;
};

// ---------------------------------------------------------------------------
// Deformed functions and arithmetic
// ---------------------------------------------------------------------------

/// exp_q(u) = [1 + (1 - q) u]_+^{1/(1 - q)}.
///
/// Returns exactly 0 past the cutoff when 1/(1 - q) > 0; the divergent branch
/// (bracket <= 0 with a negative exponent) is a DomainError.
inline double q_exp(const Deformation& def, double u) {
  if (def.near_unit_q()) return std::exp(u);
  const double x = def.one_minus_q() * u;
  if (1.0 + x <= 0.0) {
    if (def.one_minus_q() > 0.0) return 0.0;
    throw DomainError("q_exp: bracket 1+(1-q)u <= 0 on the divergent branch");
  }
  return std::exp(std::log1p(x) / def.one_minus_q());
}

/// ln_q(u) = (u^{1-q} - 1) / (1 - q), u > 0.
inline double q_ln(const Deformation& def, double u) {
  if (!(u > 0.0)) throw DomainError("q_ln: argument must be positive");
  if (def.near_unit_q()) return std::log(u);
  return std::expm1(def.one_minus_q() * std::log(u)) / def.one_minus_q();
}

/// a (+)_q b = a + b + (1 - q) a b.
inline double q_add(const Deformation& def, double a, double b) {
  return a + b + def.one_minus_q() * a * b;
}

/// a (-)_q b = (a - b) / (1 + (1 - q) b), undefined at b = 1/(q - 1).
inline double q_sub(const Deformation& def, double a, double b) {
  const double denom = def.bracket(b);
  if (denom == 0.0) {
    throw SingularityError("q_sub: b equals 1/(q-1)");
  }
  return (a - b) / denom;
}

/// u_q = ln(exp_q u) = ln[1 + (1 - q) u] / (1 - q).
inline double deformed_variable(const Deformation& def, double u) {
  if (!def.in_domain(u)) {
    throw DomainError("deformed_variable: 1+(1-q)u must be positive");
  }
  if (def.near_unit_q()) return u;
  return std::log1p(def.one_minus_q() * u) / def.one_minus_q();
}

/// Inverse of deformed_variable: u = (exp((1 - q) u_q) - 1) / (1 - q).
inline double deformed_variable_inverse(const Deformation& def, double uq) {
  if (def.near_unit_q()) return uq;
  return std::expm1(def.one_minus_q() * uq) / def.one_minus_q();
}

/// d_q u = du / (1 + (1 - q) u).
inline double q_differential(const Deformation& def, double u, double du) {
  if (!def.in_domain(u)) {
    throw DomainError("q_differential: 1+(1-q)u must be positive");
  }
  return du / def.bracket(u);
}

// ---------------------------------------------------------------------------
// Deformed derivatives
// ---------------------------------------------------------------------------

namespace detail {

inline void require_point(const RealFunction& f, double u, const char* what) {
  if (!f.contains(u)) {
    throw DomainError(std::string(what) + ": point outside function interval");
  }
}

inline double dual_denominator(const Deformation& def, double fu,
                               const char* what) {
  const double r = 1.0 + def.one_minus_q() * fu;
  const double scale = std::max(1.0, std::abs(def.one_minus_q() * fu));
  if (!(std::abs(r) > 64.0 * std::numeric_limits<double>::epsilon() * scale)) {
    throw SingularityError(std::string(what) +
                           ": 1+(1-q)f(u) vanishes at the evaluation point");
  }
  return r;
}

}  // namespace detail

/// D_q f(u) = [1 + (1 - q) u] f'(u).
inline double q_derivative(const Deformation& def, const RealFunction& f,
                           double u) {
  detail::require_point(f, u, "q_derivative");
  if (def.near_unit_q()) return f.derivative(u);
  return def.bracket(u) * f.derivative(u);
}

/// Dual derivative f'(u) / [1 + (1 - q) f(u)].
inline double dual_q_derivative(const Deformation& def, const RealFunction& f,
                                double u) {
  detail::require_point(f, u, "dual_q_derivative");
  if (def.near_unit_q()) return f.derivative(u);
  return f.derivative(u) / detail::dual_denominator(def, f(u), "dual_q_derivative");
}

/// D_q^2 f = [1 + (1 - q) u] d/du { [1 + (1 - q) u] f'(u) }.
///
/// With an analytic f' the outer d/du is a central difference of the inner
/// bracket; otherwise the composition is expanded and f'' is taken from the
/// second-derivative stencil.
inline double q_derivative_second(const Deformation& def,
                                  const RealFunction& f, double u) {
  detail::require_point(f, u, "q_derivative_second");
  if (def.near_unit_q()) return f.second_derivative(u);
  const double k = def.one_minus_q();
  if (f.has_derivative()) {
    auto inner = [&](double v) { return def.bracket(v) * f.derivative(v); };
    return def.bracket(u) * special::central_diff(inner, u, 1, 4);
  }
  const double s = def.bracket(u);
  return s * (k * f.derivative(u) + s * f.second_derivative(u));
}

/// Dual second derivative (1/r) d/du [ (1/r) f'(u) ], r = 1 + (1 - q) f(u).
inline double dual_q_derivative_second(const Deformation& def,
                                       const RealFunction& f, double u) {
  detail::require_point(f, u, "dual_q_derivative_second");
  if (def.near_unit_q()) return f.second_derivative(u);
  const double k = def.one_minus_q();
  const double r =
      detail::dual_denominator(def, f(u), "dual_q_derivative_second");
  if (f.has_derivative()) {
    auto inner = [&](double v) { return f.derivative(v) / (1.0 + k * f(v)); };
    return special::central_diff(inner, u, 1, 4) / r;
  }
  const double d1 = f.derivative(u);
  return f.second_derivative(u) / (r * r) - k * d1 * d1 / (r * r * r);
}

// ---------------------------------------------------------------------------
// q-integral
// ---------------------------------------------------------------------------

namespace detail {

inline void require_no_pole(const Deformation& def, double a, double b,
                            const char* what) {
  const double g = def.gamma();
  if (g == 0.0) return;
  if (!(1.0 + g * a > 0.0) || !(1.0 + g * b > 0.0)) {
    throw DomainError(std::string(what) +
                      ": interval reaches the singular point -1/gamma_q");
  }
}

}  // namespace detail

/// q-integral of g over [a, b]: int g(x) dx / (1 + gamma_q x).
///
/// x carries the units of xi. The singular point x = -1/gamma_q must lie
/// outside [a, b]; it is not regularised.
template <class G>
double q_integral(const Deformation& def, const G& g, double a, double b,
                  const special::QuadratureSpec& spec = {}) {
  detail::require_no_pole(def, a, b, "q_integral");
  const double gamma = def.gamma();
  auto integrand = [&](double x) { return g(x) / (1.0 + gamma * x); };
  return special::require_converged(special::adaptive_quad(integrand, a, b, spec),
                                    "q_integral");
}

/// Pull-back of g(x) dx to t in [t0, t1] with x = map(t): the caller
/// supplies weight(t) = g(map(t)) * dmap/dt, already simplified where the
/// substitution cancels an endpoint singularity (turning points).
struct Substitution {
  std::function<double(double)> map;
  std::function<double(double)> weight;
  double t0;
  double t1;
};

/// q-integral evaluated through a substitution:
/// int weight(t) dt / (1 + gamma_q map(t)). The map must be monotone and
/// keep the interval off the pole.
inline double q_integral(const Deformation& def, const Substitution& sub,
                         const special::QuadratureSpec& spec = {}) {
  detail::require_no_pole(def, sub.map(sub.t0), sub.map(sub.t1), "q_integral");
  const double gamma = def.gamma();
  auto integrand = [&](double t) {
    return sub.weight(t) / (1.0 + gamma * sub.map(t));
  };
  return special::require_converged(
      special::adaptive_quad(integrand, sub.t0, sub.t1, spec), "q_integral");
}

}  // namespace qdef
