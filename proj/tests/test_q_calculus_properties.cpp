// Randomised identities, 1000 cases each, fixed seeds.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qdef/q_calculus.hpp"

using namespace qdef;

namespace {

constexpr int kCases = 1000;

struct Draw {
  double q;
  double a;
  double b;
};

// q in [1 - w, 1 + w], a and b in [-r, r], both brackets at least `floor`.
class Sampler {
 public:
  explicit Sampler(unsigned seed, double w = 0.9, double r = 3.0, double floor = 0.02)
      : rng_(seed), w_(w), r_(r), floor_(floor) {}

  Draw next() {
    std::uniform_real_distribution<double> uq(1.0 - w_, 1.0 + w_);
    std::uniform_real_distribution<double> uu(-r_, r_);
    while (true) {
      Draw d{uq(rng_), uu(rng_), uu(rng_)};
      const double k = 1.0 - d.q;
      if (1.0 + k * d.a >= floor_ && 1.0 + k * d.b >= floor_) return d;
    }
  }

  double positive() { return std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng_)); }

 private:
  std::mt19937_64 rng_;
  double w_;
  double r_;
  double floor_;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(QCalculusProperties, RoundTrips) {
  Sampler s(11);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    const auto def = Deformation::from_q(d.q);
    EXPECT_LT(std::abs(q_ln(def, q_exp(def, d.a)) - d.a), 1e-12 * std::max(1.0, std::abs(d.a)));
    const double v = s.positive();
    EXPECT_LT(std::abs(q_exp(def, q_ln(def, v)) - v), 1e-12 * std::max(1.0, v));
  }
}

TEST(QCalculusProperties, GroupLaw) {
  Sampler s(12);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    const auto def = Deformation::from_q(d.q);
    EXPECT_LT(rel(q_exp(def, d.a) * q_exp(def, d.b), q_exp(def, q_add(def, d.a, d.b))), 1e-10)
        << "q=" << d.q << " a=" << d.a << " b=" << d.b;
  }
}

TEST(QCalculusProperties, SubtractionInvertsAddition) {
  Sampler s(13);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    const auto def = Deformation::from_q(d.q);
    EXPECT_NEAR(q_sub(def, q_add(def, d.a, d.b), d.b), d.a, 1e-12 * std::max(1.0, std::abs(d.a)));
  }
}

TEST(QCalculusProperties, DeformedVariableIsAdditive) {
  Sampler s(14);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    const auto def = Deformation::from_q(d.q);
    const double lhs = deformed_variable(def, q_add(def, d.a, d.b));
    const double rhs = deformed_variable(def, d.a) + deformed_variable(def, d.b);
    EXPECT_NEAR(lhs, rhs, 1e-11 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(QCalculusProperties, UnitQContinuity) {
  Sampler s(15);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    for (double q : {1.0 + 1e-9, 1.0 - 1e-9}) {
      const auto def = Deformation::from_q(q);
      EXPECT_LT(rel(q_exp(def, d.a), std::exp(d.a)), 1e-6);
      const double v = s.positive();
      EXPECT_NEAR(q_ln(def, v), std::log(v), 1e-6 * std::max(1.0, std::abs(std::log(v))));
      EXPECT_NEAR(q_add(def, d.a, d.b), d.a + d.b, 1e-6 * std::max(1.0, std::abs(d.a + d.b)));
      EXPECT_NEAR(deformed_variable(def, d.a), d.a, 1e-6 * std::max(1.0, std::abs(d.a)));
    }
  }
}

TEST(QCalculusProperties, ContinuityAcrossThreshold) {
  // just above and below the switch the closed forms agree with exp / log
  for (double k : {2e-8, 5e-9, -5e-9, -2e-8}) {
    const auto def = Deformation::from_q(1.0 - k);
    for (double u : {-2.0, 0.5, 3.0}) {
      EXPECT_LT(rel(q_exp(def, u), std::exp(u)), 1e-6);
      EXPECT_NEAR(q_ln(def, std::exp(u)), u, 1e-6 * std::max(1.0, std::abs(u)));
    }
  }
}

TEST(QCalculusProperties, EigenfunctionIdentities) {
  Sampler s(16);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    const auto def = Deformation::from_q(d.q);
    const RealFunction e([def](double u) { return q_exp(def, u); });
    EXPECT_LT(rel(q_derivative(def, e, d.a), q_exp(def, d.a)), 1e-8);
    const RealFunction ln([def](double u) { return q_ln(def, u); }, 0.0);
    const double v = s.positive();
    EXPECT_LT(rel(dual_q_derivative(def, ln, v), 1.0 / v), 1e-8);
  }
}

TEST(QCalculusProperties, DualityOfInverseFunctions) {
  // both sides are finite differences, so stay clear of the cutoff
  Sampler s(17, 0.8, 2.0, 0.05);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    const auto def = Deformation::from_q(d.q);
    const RealFunction y_of_x([def](double x) { return q_exp(def, x); });
    const RealFunction x_of_y([def](double y) { return q_ln(def, y); }, 0.0);
    const double y = q_exp(def, d.a);
    EXPECT_NEAR(dual_q_derivative(def, x_of_y, y) * q_derivative(def, y_of_x, d.a), 1.0, 1e-8);
  }
}

TEST(QCalculusProperties, SecondDerivativeEigenfunction) {
  Sampler s(18);
  for (int i = 0; i < kCases; ++i) {
    const auto d = s.next();
    // keep away from the cutoff where exp_q loses smoothness
    const double a = std::clamp(d.a, -1.0, 1.0);
    const auto def = Deformation::from_q(d.q);
    if (def.bracket(a) < 0.2) continue;
    const RealFunction e = RealFunction([def](double u) { return q_exp(def, u); })
                               .with_derivative([def](double u) {
                                 return std::pow(q_exp(def, u), def.q());
                               });
    EXPECT_LT(rel(q_derivative_second(def, e, a), q_exp(def, a)), 1e-7)
        << "q=" << d.q << " a=" << a;
  }
}
