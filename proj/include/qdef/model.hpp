#pragma once

#include <climits>
#include <cmath>
#include <limits>

#include "qdef/errors.hpp"

namespace qdef {

/// Below this gamma_q * x0 the quantum operations use the constant-mass
/// (Hermite) oscillator expressions.
inline constexpr double kHarmonicCrossover = 1e-5;

/// Parameters of the quantum PDM oscillator. d = 1 / (gamma_q x0)^2 fixes
/// the number of bound states.
struct QuantumModel {
  double m0 = 1.0;
  double omega0 = 1.0;
  double hbar = 1.0;
  double gamma = 0.0;

  /// Builds the model from the dimensionless product gamma_q * x0.
  static QuantumModel from_gamma_x0(double gamma_x0, double m0 = 1.0,
                                    double omega0 = 1.0, double hbar = 1.0) {
    QuantumModel model{m0, omega0, hbar, 0.0};
    model.validate();
    model.gamma = gamma_x0 / model.x0();
    return model;
  }

  void validate() const {
    if (!(m0 > 0.0) || !(omega0 > 0.0) || !(hbar > 0.0)) {
      throw DomainError("QuantumModel: m0, omega0 and hbar must be positive");
    }
    if (!std::isfinite(gamma)) {
      throw DomainError("QuantumModel: gamma_q must be finite");
    }
  }

  /// Oscillator length x0 = sqrt(hbar / (m0 omega0)).
  double x0() const { return std::sqrt(hbar / (m0 * omega0)); }
  double gamma_x0() const { return gamma * x0(); }

  /// d = 1 / (gamma_q x0)^2; infinite for gamma_q = 0.
  double d() const {
    const double g = gamma_x0();
    if (g == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (g * g);
  }

  bool harmonic_limit() const { return std::abs(gamma_x0()) < kHarmonicCrossover; }

  /// Morse binding energy W_q = m0 omega0^2 / (2 gamma_q^2).
  double binding_energy() const {
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    return m0 * omega0 * omega0 / (2.0 * gamma * gamma);
  }

  /// Largest n with b = 2d - 1 - 2n > 0; -1 when there is no bound state.
  int n_max() const {
    const double dd = d();
    const double half_b0 = (2.0 * dd - 1.0) / 2.0;
    if (!std::isfinite(half_b0) || half_b0 > static_cast<double>(INT_MAX) - 1) {
      return INT_MAX;
    }
    return static_cast<int>(std::ceil(half_b0)) - 1;
  }

  int bound_state_count() const {
    const int top = n_max();
    return top == INT_MAX ? INT_MAX : top + 1;
  }
};

}  // namespace qdef
