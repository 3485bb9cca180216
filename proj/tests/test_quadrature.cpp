#include <cmath>

#include <gtest/gtest.h>

#include "hcmlab/quadrature.hpp"
#include "hcmlab/specfun.hpp"

using namespace hcmlab;

TEST(GaussKronrod, PolynomialAndOscillatory) {
  const QuadratureSpec q;
  EXPECT_NEAR(gauss_kronrod([](double x) { return x * x * x * x; }, 0.0, 2.0, q).value,
              32.0 / 5.0, 1e-13);
  EXPECT_NEAR(gauss_kronrod([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, q).value,
              std::sin(40.0) / 40.0, 1e-13);
}

TEST(GaussKronrod, BudgetExhaustion) {
  QuadratureSpec q;
  q.max_subdivisions = 2;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-15;
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  EXPECT_FALSE(gauss_kronrod_unchecked(f, 0.0, 1.0, q).converged);
  EXPECT_THROW(gauss_kronrod(f, 0.0, 1.0, q), NonConvergence);
}

TEST(HalfLine, AlgebraicAndExponential) {
  const QuadratureSpec q;
  EXPECT_NEAR(integrate_half_line([](double x) { return std::exp(-x); }, q).value, 1.0, 1e-13);
  EXPECT_NEAR(integrate_half_line([](double x) { return 1.0 / (1.0 + x * x); }, q).value,
              kPi / 2.0, 1e-12);
  // int x^{-1/2} e^{-x} = sqrt(pi)
  EXPECT_NEAR(
      integrate_half_line([](double x) { return std::exp(-x) / std::sqrt(x); }, q).value,
      std::sqrt(kPi), 1e-12);
  // slow algebraic tail: int dx / (1 + x)^{1.3} = 1/0.3
  EXPECT_NEAR(
      integrate_half_line([](double x) { return std::pow(1.0 + x, -1.3); }, q).value,
      1.0 / 0.3, 1e-9);
}

TEST(HalfLine, NonFiniteIntegrandThrows) {
  EXPECT_THROW(integrate_half_line([](double) { return std::nan(""); }, QuadratureSpec{}),
               NonConvergence);
}

TEST(TanhSinh, EndpointSingularities) {
  const QuadratureSpec q;
  EXPECT_NEAR(integrate_tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0, q).value,
              -1.0, 1e-12);
  EXPECT_NEAR(integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, q).value,
              2.0, 1e-12);
  // Near a nonzero endpoint x is only resolved to ulp(b), which costs ~sqrt(eps)
  // of the mass of an inverse square root singularity.
  EXPECT_NEAR(
      integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0, q)
          .value,
      kPi, 1e-7);
  EXPECT_NEAR(integrate_tanh_sinh([](double x) { return x; }, 1.0, 0.0, q).value, -0.5, 1e-14);
}

TEST(QuadratureSpec, Validation) {
  QuadratureSpec q;
  q.abs_tol = 0.0;
  EXPECT_THROW(q.validate(), DomainError);
  q = {};
  q.max_subdivisions = 0;
  EXPECT_THROW(q.validate(), DomainError);
}
