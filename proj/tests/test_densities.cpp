#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "hcmlab/densities.hpp"

using namespace hcmlab;

namespace {

template <class F>
double half_line(F&& f) {
  return integrate_half_line(std::forward<F>(f), QuadratureSpec{}).value;
}

}  // namespace

TEST(DensityT, ExamplesAndLimit) {
  EXPECT_NEAR(density_T_alpha(1.0, 0.5), 1.0 / kPi, 1e-15);
  // alpha -> 0: 1/(x+1)^2
  for (double x : {0.2, 1.0, 7.0}) {
    EXPECT_NEAR(density_T_alpha(x, 1e-7), 1.0 / ((x + 1.0) * (x + 1.0)), 1e-9);
  }
  EXPECT_THROW(density_T_alpha(1.0, 0.0), DomainError);
  EXPECT_THROW(density_T_alpha(0.0, 0.3), DomainError);
}

TEST(DensityT, UnitMassAndReciprocalSymmetry) {
  for (double a : {0.05, 0.3, 0.5, 0.8, 0.97}) {
    EXPECT_NEAR(total_mass(DensitySpec::t_alpha(a)).value, 1.0, 1e-10) << a;
    // T =d 1/T  <=>  f(x) = f(1/x) / x^2
    for (double x : {0.01, 0.4, 3.0, 250.0}) {
      EXPECT_NEAR(density_T_alpha(x, a), density_T_alpha(1.0 / x, a) / (x * x),
                  1e-14 * density_T_alpha(x, a));
    }
  }
}

TEST(CdfT, ExamplesAndAgreementWithDensity) {
  EXPECT_NEAR(cdf_T_alpha(1.0, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(cdf_T_alpha(1.0, 0.5), 2.0 / kPi * std::atan(1.0), 1e-15);
  EXPECT_EQ(cdf_T_alpha(0.0, 0.3), 0.0);
  EXPECT_NEAR(cdf_T_alpha(1e6, 1.0 / 3.0), 1.0, 1e-5);
  for (double a : {0.1, 0.45, 0.9}) {
    for (double x : {0.05, 1.0, 4.0, 90.0}) {
      const double ref =
          gauss_kronrod([&](double y) { return density_T_alpha(y, a); }, 0.0, x, QuadratureSpec{})
              .value;
      EXPECT_NEAR(cdf_T_alpha(x, a), ref, 1e-12) << a << " " << x;
    }
    EXPECT_NEAR(cdf_T_alpha(2.0, a) + cdf_T_alpha(0.5, a), 1.0, 1e-14);
  }
}

TEST(MellinT, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(mellin_T_alpha(0.0, 0.4), 1.0);
  EXPECT_NEAR(mellin_T_alpha(0.5, 0.5), std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(half_line([](double x) { return std::sqrt(x) * 2.0 / (kPi * (1.0 + x * x)); }),
              std::sqrt(2.0), 1e-10);
  for (double s : {0.1, 0.37, 0.9}) {
    EXPECT_NEAR(mellin_T_alpha(s, 0.3), mellin_T_alpha(-s, 0.3), 1e-14);
  }
  EXPECT_THROW(mellin_T_alpha(1.0, 0.3), DomainError);
}

TEST(MellinT, MatchesQuadratureOfDensity) {
  for (double a : {0.1, 0.35, 0.6, 0.85}) {
    for (double s : {-0.7, -0.2, 0.3, 0.75}) {
      const double ref = half_line([&](double x) { return std::pow(x, s) * density_T_alpha(x, a); });
      EXPECT_NEAR(mellin_T_alpha(s, a), ref, 1e-8 * ref) << a << " " << s;
    }
  }
}

TEST(SqrtGammaProduct, MassMomentsAndBesselValue) {
  EXPECT_NEAR(total_mass(DensitySpec::sqrt_gamma_product(1.0, 1.0)).value, 1.0, 1e-10);
  EXPECT_NEAR(total_mass(DensitySpec::sqrt_gamma_product(0.3, 2.5)).value, 1.0, 1e-10);
  EXPECT_NEAR(density_sqrt_gamma_product(1.0, 0.5, 0.5),
              4.0 / kPi * boost::math::cyl_bessel_k(0.0, 2.0), 1e-14);
  EXPECT_NEAR(4.0 / kPi * boost::math::cyl_bessel_k(0.0, 2.0), 4.0 / kPi * 0.1138938727, 1e-10);
  // E[(sqrt(g g'))^2] = E[g] E[g'] = t s
  EXPECT_NEAR(half_line([](double x) { return x * x * density_sqrt_gamma_product(x, 1.0, 1.0); }),
              1.0, 1e-10);
  EXPECT_NEAR(half_line([](double x) { return x * x * density_sqrt_gamma_product(x, 0.4, 3.0); }),
              1.2, 1e-9);
  EXPECT_THROW(density_sqrt_gamma_product(1.0, 0.0, 1.0), DomainError);
}

TEST(SqrtZOneThird, MassAndRelationToGammaProduct) {
  EXPECT_NEAR(total_mass(DensitySpec::sqrt_z_one_third()).value, 1.0, 1e-10);
  EXPECT_EQ(density_sqrt_Z_one_third(1e-4), 0.0);
  EXPECT_LT(density_sqrt_Z_one_third(0.01), 1e-10);
  // sqrt(Z_{1/3}) =d 1 / (3 sqrt 3 sqrt(g_{1/3} g_{2/3}))
  const double k = 1.0 / (3.0 * std::sqrt(3.0));
  for (double x : {0.05, 0.3, 1.0, 4.0, 40.0}) {
    const double via_product = density_sqrt_gamma_product(k / x, 1.0 / 3.0, 2.0 / 3.0) * k / (x * x);
    EXPECT_NEAR(density_sqrt_Z_one_third(x), via_product, 1e-12 * via_product) << x;
  }
}

TEST(FamilyMass, MatchesResidueFormula) {
  for (double a : {0.1, 0.3, 0.45}) {
    for (double t : {0.6, 0.8, 1.0, 1.4}) {
      const FamilyParams p(a, t);
      const double mass = half_line([&](double x) { return f_family(x, p); });
      const double ref =
          kPi * std::sin((1.0 - 1.0 / t) * kPi * a) / (t * std::sin(kPi / t) * std::sin(kPi * a));
      if (t == 1.0) {
        // removable singularity of the formula: theta / sin(theta)
        EXPECT_NEAR(mass, kPi * a / std::sin(kPi * a), 1e-9) << a;
      } else {
        EXPECT_NEAR(mass, ref, 1e-9 * std::abs(ref)) << a << " " << t;
      }
    }
    const auto d = DensitySpec::family_normalized(FamilyParams(a, 0.7));
    EXPECT_NEAR(total_mass(d).value, 1.0, 1e-10);
  }
  EXPECT_THROW(DensitySpec::family_normalized(FamilyParams(0.3, 0.5)), DomainError);
}

TEST(HcmProductForm, Examples) {
  const HcmProductForm one(1.0, 0.0, {{1.0, 1.0}});
  EXPECT_NEAR(one(4.0), 0.2, 1e-15);
  const HcmProductForm sq(1.0, 0.0, {{1.0, 2.0}});
  EXPECT_NEAR(sq(1e-12), 1.0, 1e-11);
  EXPECT_NEAR(sq(3.0), 1.0 / 16.0, 1e-15);
  const HcmProductForm bare(2.0, 1.0);
  EXPECT_NEAR(bare(3.0), 6.0, 1e-14);
  EXPECT_NEAR(eval_hcm_product_form(bare, 3.0), 6.0, 1e-14);
  EXPECT_THROW(HcmProductForm(0.0, 1.0), DomainError);
  EXPECT_THROW(HcmProductForm(1.0, 1.0, {{1.0, -1.0}}), DomainError);
  EXPECT_THROW(one(0.0), DomainError);
}

TEST(HcmProductForm, ComplexContinuationAgreesOnAxis) {
  const HcmProductForm f(1.5, -0.3, {{2.0, 0.7}, {0.1, 2.2}});
  for (double x : {0.01, 1.0, 50.0}) {
    const Complex v = f(Complex(x, 0.0));
    EXPECT_NEAR(v.real(), f(x), 1e-14 * f(x));
    EXPECT_NEAR(v.imag(), 0.0, 1e-16);
  }
  const Complex z(-1.0, 2.0);
  EXPECT_NEAR(std::abs(f(std::conj(z)) - std::conj(f(z))), 0.0, 1e-15);
}
