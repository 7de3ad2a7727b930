#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qdef/errors.hpp"
#include "qdef/quantum.hpp"

using namespace qdef;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Sign changes of the Numerov solution of -phi''/2 + V phi = E phi started at
// the left edge; equals the number of Morse levels below E (m0 = omega0 = hbar = 1).
int morse_count(double gamma, double energy, double lo = -15.0, double hi = 5.0,
                double h = 2e-3) {
  auto k = [&](double u) {
    const double s = std::expm1(gamma * u) / gamma;
    return 2.0 * (energy - 0.5 * s * s);
  };
  const int steps = static_cast<int>((hi - lo) / h);
  double prev = 0.0;
  double curr = 1e-30;
  int changes = 0;
  for (int i = 1; i < steps; ++i) {
    const double u = lo + i * h;
    const double next = (2.0 * curr * (1.0 - 5.0 * h * h * k(u) / 12.0) -
                         prev * (1.0 + h * h * k(u - h) / 12.0)) /
                        (1.0 + h * h * k(u + h) / 12.0);
    if ((next < 0.0) != (curr < 0.0)) ++changes;
    prev = curr;
    curr = next;
  }
  return changes;
}

double morse_shooting_level(double gamma, int n) {
  double lo = 0.0;
  double hi = 0.5 / (gamma * gamma);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (morse_count(gamma, mid) > n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// pi^{-1/4} (2^n n!)^{-1/2} H_n(xi) e^{-xi^2/2} from the explicit H_n series
double hermite_explicit(int n, double xi) {
  double h = 0.0;
  for (int m = 0; m <= n / 2; ++m) {
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                         std::lgamma(n - 2.0 * m + 1.0) + (n - 2 * m) * std::log(2.0);
    h += (m % 2 ? -1.0 : 1.0) * std::exp(log_c) * std::pow(xi, n - 2 * m);
  }
  const double log_norm = -0.25 * std::log(kPi) - 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0));
  return h * std::exp(log_norm - 0.5 * xi * xi);
}

// int psi_m psi_n over [lo, hi] split into panels
double braket(const Eigenstate& a, const Eigenstate& b, double lo, double hi) {
  double total = 0.0;
  const int panels = 40;
  for (int i = 0; i < panels; ++i) {
    const double xa = lo + (hi - lo) * i / panels;
    const double xb = lo + (hi - lo) * (i + 1) / panels;
    total += special::adaptive_quad([&](double x) { return a(x) * b(x); }, xa, xb,
                                    {1e-15, 1e-13})
                 .value;
  }
  return total;
}

// integration range covering the bound states of a unit-x0 model
std::pair<double, double> range(const QuantumModel& m) {
  double lo = -15.0;
  double hi = 25.0;
  if (m.gamma > 0.0) lo = std::max(lo, -1.0 / m.gamma);
  if (m.gamma < 0.0) hi = std::min(hi, -1.0 / m.gamma);
  return {lo, hi};
}

}  // namespace

TEST(EnergyLevel, ClosedFormAndCount) {
  const QuantumModel flat{1.0, 2.0, 0.5, 0.0};
  for (int n = 0; n < 5; ++n) EXPECT_DOUBLE_EQ(energy_level(flat, n), 0.5 * 2.0 * (n + 0.5));

  const auto model = QuantumModel::from_gamma_x0(0.3);
  EXPECT_NEAR(energy_level(model, 0), 0.48875, 1e-15);
  EXPECT_EQ(model.n_max(), 10);
  EXPECT_EQ(model.bound_state_count(), 11);
  EXPECT_LT(energy_level(model, 10), model.binding_energy());
  for (int n = 0; n < 10; ++n) {
    const double gap = energy_level(model, n + 1) - energy_level(model, n);
    EXPECT_NEAR(gap, 1.0 - 0.09 * (n + 1), 1e-13);
    EXPECT_GT(gap, 0.0);
  }
}

TEST(EnergyLevel, UnboundStatesAreRejected) {
  const auto model = QuantumModel::from_gamma_x0(0.3);
  try {
    energy_level(model, 11);
    FAIL() << "expected UnboundStateError";
  } catch (const UnboundStateError& e) {
    EXPECT_EQ(e.n(), 11);
    EXPECT_EQ(e.n_max(), 10);
    EXPECT_NE(std::string(e.what()).find("10"), std::string::npos);
  }
  EXPECT_THROW(energy_level(model, -1), DomainError);
}

TEST(EnergyLevel, MatchesMorseShooting) {
  const double gamma = 0.3;
  const auto model = QuantumModel::from_gamma_x0(gamma);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_LT(rel(energy_level(model, n), morse_shooting_level(gamma, n)), 1e-8) << "n=" << n;
  }
}

TEST(BoundState, ParametersAndNormalisation) {
  const auto model = QuantumModel::from_gamma_x0(0.25, 1.3, 0.8, 0.6);
  const double d = model.d();
  for (int n = 0; n <= 4; ++n) {
    const auto st = bound_state(model, n);
    EXPECT_NEAR(st.b, 2 * d - 1 - 2 * n, 1e-12);
    const double ln_a2 = std::log(st.b) + std::log(model.gamma) + std::lgamma(n + 1.0) -
                         std::lgamma(n + st.b + 1.0);
    EXPECT_NEAR(2 * st.log_norm, ln_a2, 1e-11);
    // b / 2d = sqrt(1 - gamma^2 a^2)
    EXPECT_NEAR(st.b / (2 * d), std::sqrt(1 - std::pow(model.gamma * st.a_qn, 2)), 1e-13);
  }
}

TEST(BoundState, DissociationGuard) {
  // n = 0 with b = 5e-7
  const double d = (1.0 + 5e-7) / 2.0;
  const auto model = QuantumModel::from_gamma_x0(1.0 / std::sqrt(d));
  EXPECT_EQ(model.n_max(), 0);
  EXPECT_THROW(bound_state(model, 0), RegimeError);
  // no bound state at all
  EXPECT_EQ(QuantumModel::from_gamma_x0(1.5).n_max(), -1);
  EXPECT_THROW(bound_state(QuantumModel::from_gamma_x0(1.5), 0), UnboundStateError);
}

TEST(Wavefunction, Normalised) {
  for (double g : {0.1, 0.2, 0.3, -0.2}) {
    const auto model = QuantumModel::from_gamma_x0(g);
    const auto [lo, hi] = range(model);
    for (int n = 0; n <= 3; ++n) {
      const Eigenstate psi(model, n);
      EXPECT_NEAR(braket(psi, psi, lo, hi), 1.0, 1e-8) << "g=" << g << " n=" << n;
    }
  }
}

TEST(Wavefunction, Orthogonal) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  const auto [lo, hi] = range(model);
  for (int m = 0; m <= 5; ++m) {
    for (int n = m + 1; n <= 5; ++n) {
      EXPECT_NEAR(braket(Eigenstate(model, m), Eigenstate(model, n), lo, hi), 0.0, 1e-7);
      EXPECT_NEAR(overlap(model, m, n), 0.0, 1e-7);
    }
  }
}

TEST(Wavefunction, NodeCount) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  for (int n = 0; n <= 5; ++n) {
    const Eigenstate psi(model, n);
    const auto [lo, hi] = psi.support();
    int nodes = 0;
    double prev = psi(lo + 1e-9 * (hi - lo));
    for (int i = 1; i <= 20000; ++i) {
      const double v = psi(lo + (hi - lo) * i / 20000.0);
      if (v != 0.0 && prev != 0.0 && (v < 0.0) != (prev < 0.0)) ++nodes;
      if (v != 0.0) prev = v;
    }
    EXPECT_EQ(nodes, n);
  }
}

TEST(Wavefunction, PoleIsRejected) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  EXPECT_THROW(wavefunction(model, 0, -5.0), DomainError);
  EXPECT_THROW(wavefunction(model, 0, -6.0), DomainError);
  EXPECT_NO_THROW(wavefunction(model, 0, -4.99));
}

TEST(Wavefunction, HermiteLimit) {
  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  for (int n = 0; n <= 3; ++n) {
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.01) {
      worst = std::max(worst, std::abs(harmonic_wavefunction(flat, n, x) - hermite_explicit(n, x)));
    }
    EXPECT_LT(worst, 1e-13);
  }
  const auto tiny = QuantumModel::from_gamma_x0(1e-6);
  for (int n = 0; n <= 3; ++n) {
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.01) {
      worst = std::max(worst, std::abs(wavefunction(tiny, n, x) - hermite_explicit(n, x)));
    }
    EXPECT_LT(worst, 1e-4);
  }
}

TEST(Wavefunction, CrossoverDeviationScalesWithGamma) {
  auto deviation = [](double g) {
    const auto model = QuantumModel::from_gamma_x0(g);
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
      for (double x = -6.0; x <= 6.0; x += 0.01) {
        worst = std::max(worst, std::abs(wavefunction(model, n, x) - hermite_explicit(n, x)));
      }
    }
    return worst;
  };
  const double coarse = deviation(1e-4);
  const double fine = deviation(2e-5);
  EXPECT_LT(coarse, 1e-3);
  EXPECT_NEAR(fine / coarse, 0.2, 0.05);
  // both signs of gamma approach the same limit
  EXPECT_LT(deviation(-2e-5), 1e-3);
}

TEST(Wavefunction, DerivativeMatchesDifferences) {
  for (double g : {0.2, -0.3}) {
    const auto model = QuantumModel::from_gamma_x0(g);
    for (int n : {0, 2, 5}) {
      const Eigenstate psi(model, n);
      for (double x : {-1.5, 0.1, 2.2}) {
        const double fd = special::central_diff([&](double s) { return psi(s); }, x);
        EXPECT_NEAR(psi.derivative(x), fd, 1e-8);
      }
    }
  }
}

TEST(Wavefunction, LargeDStaysFinite) {
  // d = 1e4: the power/exponential pair would overflow outside log space
  const auto model = QuantumModel::from_gamma_x0(0.01);
  const Eigenstate psi(model, 3);
  const auto [lo, hi] = psi.support();
  EXPECT_NEAR(braket(psi, psi, lo, hi), 1.0, 1e-8);
  EXPECT_TRUE(std::isfinite(psi(0.3)));
}

TEST(Residual, SmallOnFineGrid) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_LT(schrodinger_residual(model, n, support_grid(model, n, model.x0() / 200)), 1e-6)
        << "n=" << n;
  }
  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  for (int n = 0; n <= 3; ++n) {
    EXPECT_LT(schrodinger_residual(flat, n, support_grid(flat, n, 1.0 / 200)), 1e-8);
  }
}

TEST(Residual, FourthOrderConvergence) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  const double coarse = schrodinger_residual(model, 2, {-3.0, 0.05, 121});
  const double fine = schrodinger_residual(model, 2, {-3.0, 0.025, 241});
  EXPECT_NEAR(std::log2(coarse / fine), 4.0, 0.3);
  EXPECT_THROW(schrodinger_residual(model, 2, {0.0, 0.1, 4}), DomainError);
}

TEST(Residual, DeformedEquationHolds) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  std::vector<double> pts;
  for (double x = -3.5; x <= 6.0; x += 0.05) pts.push_back(x);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_LT(deformed_schrodinger_residual(model, n, pts), 1e-6) << "n=" << n;
  }
}

TEST(TransformField, RoundTripAndNormEquality) {
  const auto model = QuantumModel::from_gamma_x0(0.3);
  std::vector<double> xs;
  std::vector<double> psi;
  for (double x = -3.0; x <= 5.0; x += 0.25) {
    xs.push_back(x);
    psi.push_back(wavefunction(model, 1, x));
  }
  const auto back = inverse_transform_field(model, transform_field(model, psi, xs), xs);
  for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_NEAR(back[i], psi[i], 1e-15);

  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  EXPECT_EQ(transform_field(flat, psi, xs), psi);

  for (int n = 0; n <= 3; ++n) {
    EXPECT_NEAR(deformed_overlap(model, n, n), 1.0, 1e-9);
    double norm = 0.0;
    quadrature_moments(model, n, &norm);
    EXPECT_NEAR(deformed_overlap(model, n, n), norm, 1e-9);
  }
  EXPECT_NEAR(deformed_overlap(model, 0, 2), 0.0, 1e-9);
  EXPECT_THROW(transform_field(model, {1.0}, {-4.0}), DomainError);
  EXPECT_THROW(transform_field(model, {1.0, 2.0}, {0.0}), DomainError);
}

TEST(Current, VanishesForStationaryStates) {
  for (double g : {0.0, 0.2}) {
    const auto model = QuantumModel::from_gamma_x0(g);
    for (int n = 0; n <= 3; ++n) {
      for (double x = -3.0; x <= 4.0; x += 0.1) {
        EXPECT_LT(std::abs(stationary_current(model, n, x)), 1e-12);
      }
    }
  }
  // a plane-wave-like complex value carries current: J = hbar k |psi|^2 / m(x)
  const auto model = QuantumModel::from_gamma_x0(0.2);
  const double k = 1.5;
  const double x = 0.4;
  const double y = 1 + model.gamma * x;
  const std::complex<double> psi(1.0, 0.0);
  const std::complex<double> dpsi(0.0, k);
  EXPECT_NEAR(probability_current(model, psi, dpsi, x), k * y * y, 1e-14);
}

TEST(Moments, UndeformedLimit) {
  const QuantumModel flat{2.0, 3.0, 0.5, 0.0};
  const double x0 = flat.x0();
  for (int n = 0; n <= 4; ++n) {
    const auto m = expectation_values(flat, n);
    EXPECT_EQ(m.mean_x, 0.0);
    EXPECT_DOUBLE_EQ(m.mean_x2, x0 * x0 * (n + 0.5));
    EXPECT_EQ(m.mean_p, 0.0);
    EXPECT_DOUBLE_EQ(m.mean_p2, 2.0 * 3.0 * 0.5 * (n + 0.5));
  }
}

TEST(Moments, QuadratureMatchesClosedForm) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  const auto [lo, hi] = range(model);
  for (int n = 0; n <= 5; ++n) {
    const auto m = expectation_values(model, n);
    const Eigenstate psi(model, n);
    auto integral = [&](auto f) {
      double total = 0.0;
      for (int i = 0; i < 40; ++i) {
        total += special::adaptive_quad(f, lo + (hi - lo) * i / 40, lo + (hi - lo) * (i + 1) / 40,
                                        {1e-15, 1e-13})
                     .value;
      }
      return total;
    };
    const double x1 = integral([&](double x) { return x * psi(x) * psi(x); });
    const double x2 = integral([&](double x) { return x * x * psi(x) * psi(x); });
    const double p2 = integral([&](double x) { return std::pow(psi.derivative(x), 2); });
    EXPECT_LT(rel(m.mean_x, x1), 1e-7) << "n=" << n;
    EXPECT_LT(rel(m.mean_x2, x2), 1e-7) << "n=" << n;
    EXPECT_LT(rel(m.mean_p2, p2), 1e-6) << "n=" << n;
  }
}

TEST(Moments, AmplitudeFormAgrees) {
  for (double g : {0.1, 0.2, 0.3}) {
    const auto model = QuantumModel::from_gamma_x0(g, 1.4, 0.7, 0.9);
    for (int n = 0; n <= 3; ++n) {
      const auto direct = expectation_values(model, n);
      const auto amp = expectation_values_amplitude_form(model, n);
      EXPECT_LT(rel(amp.mean_x, direct.mean_x), 1e-12);
      EXPECT_LT(rel(amp.mean_x2, direct.mean_x2), 1e-12);
      EXPECT_LT(rel(amp.mean_p2, direct.mean_p2), 1e-12);
    }
  }
}

TEST(Moments, PrintedMomentumNumeratorDisagrees) {
  const auto model = QuantumModel::from_gamma_x0(0.3);
  for (int n = 0; n <= 3; ++n) {
    const double q = quadrature_moments(model, n).mean_p2;
    EXPECT_LT(rel(expectation_values(model, n).mean_p2, q), 1e-8);
    EXPECT_GT(rel(momentum_square_as_printed(model, n), q), 1e-4);
  }
}

TEST(Moments, DivergentMomentumNearDissociation) {
  const auto model = QuantumModel::from_gamma_x0(0.3);
  // b = 2d - 1 - 2n <= 2 for n = 10
  EXPECT_LE(bound_state(model, 10).b, 2.0);
  EXPECT_THROW(expectation_values(model, 10), RegimeError);
  EXPECT_NO_THROW(expectation_values(model, 9));
}

TEST(Moments, ApproachClassicalAverages) {
  // x0 = 1e-2, gamma a ~ 0.5: the amplitude forms go over to the classical ones
  const QuantumModel model{1.0, 1.0, 1e-4, 0.5};
  const int n = 4000;
  const auto q = expectation_values_amplitude_form(model, n);
  const double a = bound_state(model, n).a_qn;
  const auto c = classical_moments(OscillatorConfig{1.0, 1.0, 0.5, a, 0.0});
  EXPECT_LT(rel(q.mean_x, c.mean_x), 1e-6);
  EXPECT_LT(rel(q.mean_x2, c.mean_x2), 1e-6);
  EXPECT_LT(rel(q.mean_p2, c.mean_p2), 1e-6);
}

TEST(Uncertainty, ProductBounds) {
  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(uncertainties(flat, n).product, n + 0.5, 1e-14);

  for (int k = 1; k <= 7; ++k) {
    const auto model = QuantumModel::from_gamma_x0(0.05 * k);
    for (int n = 0; n <= model.n_max(); ++n) {
      if (!(bound_state(model, n).b > 2.0)) continue;
      EXPECT_GE(uncertainties(model, n).product, 0.5) << "k=" << k << " n=" << n;
    }
  }
  const double deformed = uncertainties(QuantumModel::from_gamma_x0(0.2), 0).product;
  EXPECT_GT(deformed, 0.5);
  EXPECT_GT(deformed, uncertainties(flat, 0).product);
}

TEST(Virial, RatioIdentity) {
  const auto model = QuantumModel::from_gamma_x0(0.3);
  for (int n = 0; n <= 5; ++n) {
    const auto v = virial_quantum(model, n);
    EXPECT_NEAR(v.ratio, v.expected, 1e-10);
    const auto st = bound_state(model, n);
    EXPECT_NEAR(v.expected, st.b / (2 * model.d()), 1e-12);
  }
  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  const auto v = virial_quantum(flat, 3);
  EXPECT_DOUBLE_EQ(v.kinetic, v.potential);

  const auto m2 = QuantumModel::from_gamma_x0(0.2);
  for (int n = 0; n <= 3; ++n) {
    const double x2 = quadrature_moments(m2, n).mean_x2;
    EXPECT_LT(rel(virial_quantum(m2, n).potential, 0.5 * x2), 1e-7);
  }
}

TEST(Correspondence, CentralWavelengthWindow) {
  const auto model = QuantumModel::from_gamma_x0(0.2);
  const auto c = correspondence_check(model, 10);
  EXPECT_NEAR(c.window, 2 * kPi / correspondence_amplitude(model, 10), 1e-14);
  EXPECT_NEAR(c.amplitude, correspondence_amplitude(model, 10), 1e-14);
  EXPECT_GT(c.curves.size(), 50u);
  EXPECT_LT(c.l1, 0.05);
}

TEST(Correspondence, GroundStateDoesNotCorrespond) {
  EXPECT_GT(correspondence_check(QuantumModel::from_gamma_x0(0.2), 0).l1, 0.2);
}

TEST(Correspondence, UndeformedHighLevel) {
  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  EXPECT_LT(correspondence_check(flat, 20).l1, 0.03);
}

TEST(Density2d, NormalisedAndShifted) {
  // gamma a_0 = 0.2 -> (gamma x0)^2 = 2 (1 - sqrt(1 - 0.04))
  const double gx0 = std::sqrt(2 * (1 - std::sqrt(1 - 0.04)));
  const auto model = QuantumModel::from_gamma_x0(gx0);
  EXPECT_NEAR(model.gamma * bound_state(model, 0).a_qn, 0.2, 1e-14);
  const int count = 301;
  std::vector<double> grid;
  const double lo = -4.5;
  const double hi = 7.0;
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid.push_back(lo + h * i);
  const auto tab = density_2d(model, model, 0, 0, grid, grid);
  double total = 0.0;
  double peak = -1.0;
  double px = 0.0;
  double py = 0.0;
  for (const auto& r : tab.rows()) {
    total += r[2] * h * h;
    if (r[2] > peak) {
      peak = r[2];
      px = r[0];
      py = r[1];
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-7);
  EXPECT_LT(px, 0.0);
  EXPECT_LT(py, 0.0);
  EXPECT_DOUBLE_EQ(px, py);
}

TEST(Density2d, UndeformedParity) {
  const QuantumModel flat{1.0, 1.0, 1.0, 0.0};
  const std::vector<double> xs = {-1.3, -0.4, 0.4, 1.3};
  const auto tab = density_2d(flat, flat, 2, 4, xs, xs);
  auto rho = [&](std::size_t i, std::size_t j) { return tab.rows()[i * xs.size() + j][2]; };
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(rho(i, j), rho(3 - i, j), 1e-15);
      EXPECT_NEAR(rho(i, j), rho(i, 3 - j), 1e-15);
    }
  }
}
