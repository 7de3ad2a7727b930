#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qdef/errors.hpp"
#include "qdef/special_functions.hpp"

using namespace qdef;
using namespace qdef::special;

namespace {

// L_n^{(b)}(u) = sum_k (-1)^k Gamma(n+b+1) / (Gamma(n-k+1) Gamma(b+k+1)) u^k / k!
// Summed in long double: the alternating terms cancel heavily for large u.
double laguerre_series(int n, double b, double u) {
  long double sum = 0.0L;
  for (int k = 0; k <= n; ++k) {
    const long double log_binom = std::lgamma(n + b + 1.0L) - std::lgamma(n - k + 1.0L) -
                                  std::lgamma(b + k + 1.0L) - std::lgamma(k + 1.0L);
    const long double term = std::exp(log_binom) * std::pow(static_cast<long double>(u), k);
    sum += (k % 2 ? -term : term);
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST(LogGamma, MatchesStdLgamma) {
  for (double z : {0.1, 0.5, 0.9, 1.5, 2.5, 3.7, 10.0, 33.3, 171.5, 1e3, 1e5, 2e8}) {
    const double ref = std::lgamma(z);
    EXPECT_NEAR(log_gamma(z), ref, 1e-13 * std::max(1.0, std::abs(ref))) << "z=" << z;
  }
}

TEST(LogGamma, ExactZerosAndKnownValues) {
  EXPECT_EQ(log_gamma(1.0), 0.0);
  EXPECT_EQ(log_gamma(2.0), 0.0);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_NEAR(log_gamma(6.0), std::log(120.0), 1e-13);
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.5), DomainError);
  EXPECT_THROW(log_gamma(std::nan("")), DomainError);
}

TEST(Laguerre, LowOrders) {
  EXPECT_EQ(laguerre(0, 3.2, 1.7), 1.0);
  EXPECT_DOUBLE_EQ(laguerre(1, 3.2, 1.7), 1.0 + 3.2 - 1.7);
  const double b = 0.7;
  const double u = 2.3;
  EXPECT_NEAR(laguerre(2, b, u), 0.5 * (u * u - 2.0 * (b + 2.0) * u + (b + 1.0) * (b + 2.0)),
              1e-13);
}

TEST(Laguerre, MatchesExplicitSeries) {
  for (int n = 0; n <= 8; ++n) {
    for (double b : {0.3, 2.0, 17.5}) {
      for (double u : {0.2, 1.0, 5.5, 20.0}) {
        const double ref = laguerre_series(n, b, u);
        EXPECT_NEAR(laguerre(n, b, u), ref, 1e-10 * std::max(1.0, std::abs(ref)))
            << n << " " << b << " " << u;
      }
    }
  }
}

TEST(Laguerre, DerivativeIdentity) {
  for (int n = 1; n <= 6; ++n) {
    const double b = 4.5;
    const double u = 3.1;
    const double fd = central_diff([&](double v) { return laguerre(n, b, v); }, u);
    EXPECT_NEAR(laguerre_derivative(n, b, u), fd, 1e-8 * std::max(1.0, std::abs(fd)));
  }
  EXPECT_EQ(laguerre_derivative(0, 1.0, 2.0), 0.0);
  EXPECT_THROW(laguerre(-1, 1.0, 1.0), DomainError);
}

TEST(CentralDiff, FirstAndSecondDerivatives) {
  auto f = [](double x) { return std::sin(x); };
  EXPECT_NEAR(central_diff(f, 0.7), std::cos(0.7), 1e-10);
  EXPECT_NEAR(central_diff(f, 0.7, 1, 2), std::cos(0.7), 1e-9);
  EXPECT_NEAR(central_diff(f, 0.7, 2), -std::sin(0.7), 1e-8);
  EXPECT_THROW(central_diff(f, 0.7, 3), DomainError);
  EXPECT_THROW(central_diff(f, 0.7, 1, 3), DomainError);
}

TEST(CentralDiff, FourthOrderConvergence) {
  auto f = [](double x) { return std::exp(x); };
  const double e1 = std::abs(central_diff(f, 0.3, 1, 4, 0.1) - std::exp(0.3));
  const double e2 = std::abs(central_diff(f, 0.3, 1, 4, 0.05) - std::exp(0.3));
  EXPECT_NEAR(e1 / e2, 16.0, 0.5);
}

TEST(AdaptiveQuad, SmoothAndSingularIntegrands) {
  auto r = adaptive_quad([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-12);

  // integrable endpoint singularity
  auto s = adaptive_quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                         {1e-10, 1e-10});
  EXPECT_NEAR(s.value, 2.0, 1e-8);

  auto rev = adaptive_quad([](double x) { return x * x; }, 1.0, 0.0);
  EXPECT_NEAR(rev.value, -1.0 / 3.0, 1e-14);

  auto zero = adaptive_quad([](double x) { return x; }, 2.0, 2.0);
  EXPECT_EQ(zero.value, 0.0);
}

TEST(AdaptiveQuad, SemiInfinite) {
  auto r = adaptive_quad_semi_infinite([](double x) { return std::exp(-x); }, 0.0);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  auto g = adaptive_quad_semi_infinite([](double x) { return std::exp(-x * x); }, 0.0);
  EXPECT_NEAR(g.value, 0.5 * std::sqrt(std::numbers::pi), 1e-10);
}

TEST(AdaptiveQuad, ReportsNonConvergence) {
  QuadratureSpec tight{1e-15, 1e-15, 50, 3};
  auto r = adaptive_quad([](double x) { return std::sin(50.0 * x) / (x + 1e-3); }, 0.0, 10.0,
                         tight);
  EXPECT_FALSE(r.converged);
  EXPECT_THROW(require_converged(r, "test"), NumericalError);
}
