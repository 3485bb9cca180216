#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "hcmlab/montecarlo.hpp"

using namespace hcmlab;

namespace {

constexpr std::size_t kN = 100000;
constexpr std::uint64_t kSeed = 42;

}  // namespace

TEST(Gamma, MeanVarianceAndKs) {
  for (double t : {0.5, 1.0, 3.7}) {
    const SampleSet s = sample_gamma(t, kN, kSeed);
    ASSERT_EQ(s.values.size(), kN);
    for (double v : s.values) ASSERT_GT(v, 0.0);
    const MeanEstimate m = empirical_mean(s.values, [](double x) { return x; });
    EXPECT_NEAR(m.mean, t, 4.0 * std::sqrt(t / kN)) << t;
    const MeanEstimate var = empirical_mean(s.values, [t](double x) { return (x - t) * (x - t); });
    EXPECT_NEAR(var.mean, t, 4.0 * var.std_error) << t;
    const KsReport ks =
        ks_one_sample(s.values, [t](double x) { return boost::math::gamma_p(t, x); }, 0.05);
    EXPECT_TRUE(ks.pass) << t << " D=" << ks.statistic << " thr=" << ks.threshold;
    EXPECT_NEAR(ks.threshold, 1.36 / std::sqrt(double(kN)), 1e-15);
  }
  EXPECT_THROW(sample_gamma(0.0, 10, kSeed), DomainError);
  EXPECT_THROW(sample_gamma(1.0, 0, kSeed), DomainError);
}

TEST(Gamma, TinyShapeStaysPositive) {
  const SampleSet s = sample_gamma(0.05, 20000, 7);
  for (double v : s.values) ASSERT_GT(v, 0.0);
  const KsReport ks =
      ks_one_sample(s.values, [](double x) { return boost::math::gamma_p(0.05, x); }, 0.01);
  EXPECT_TRUE(ks.pass) << ks.statistic;
}

TEST(Stable, LaplaceTransform) {
  const Verdict spec_case = verify_stable_laplace(0.3, {0.5, 1.0, 2.0}, kN, kSeed);
  EXPECT_EQ(spec_case.status, Status::Pass) << spec_case.detail;
  for (double a : {0.2, 0.5, 0.8}) {
    const Verdict v = verify_stable_laplace(a, {0.25, 1.0, 4.0}, kN, kSeed);
    EXPECT_EQ(v.status, Status::Pass) << a << ": " << v.detail;
  }
}

TEST(Stable, HalfIsInverseGamma) {
  const SampleSet z = sample_positive_stable(0.5, kN, kSeed);
  SampleSet g = sample_gamma(0.5, kN, kSeed);
  for (double& v : g.values) v = 1.0 / (4.0 * v);
  const KsReport ks = ks_two_sample(z.values, g.values, 0.01);
  EXPECT_TRUE(ks.pass) << ks.statistic << " " << ks.threshold;
  EXPECT_NEAR(ks.threshold, 1.63 * std::sqrt(2.0 / kN), 1e-15);
}

TEST(Stable, MellinMoment) {
  const double a = 0.4, s = 0.1;
  const SampleSet z = sample_positive_stable(a, kN, kSeed);
  const MeanEstimate m = empirical_mean(z.values, [s](double x) { return std::pow(x, s); });
  const double exact = std::tgamma(1.0 - s / a) / std::tgamma(1.0 - s);
  EXPECT_NEAR(m.mean, exact, 4.0 * m.std_error);
}

TEST(TAlpha, KsAcrossAlpha) {
  for (int i = 1; i <= 9; ++i) {
    const double a = 0.1 * i;
    const KsReport r = ks_with_rerun(
        [a](std::uint64_t seed) { return verify_T_alpha_density(a, kN, seed, 0.01); }, kSeed);
    EXPECT_TRUE(r.pass) << a << " D=" << r.statistic << " " << r.detail;
  }
  const KsReport five = verify_T_alpha_density(0.3, kN, kSeed, 0.05);
  EXPECT_TRUE(five.pass) << five.statistic;
}

TEST(TAlpha, HalfCauchyAndReciprocalSymmetry) {
  const SampleSet s = sample_T_alpha(0.5, kN, kSeed);
  const KsReport half =
      ks_one_sample(s.values, [](double x) { return 2.0 / kPi * std::atan(x); }, 0.01);
  EXPECT_TRUE(half.pass) << half.statistic;

  const SampleSet t = sample_T_alpha(0.3, kN, kSeed);
  std::vector<double> inv(t.values.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / t.values[i];
  // reciprocal of the same sample: compare against an independent draw
  const SampleSet other = sample_T_alpha(0.3, kN, kSeed + 1);
  EXPECT_TRUE(ks_two_sample(inv, other.values, 0.01).pass);
}

TEST(TAlpha, MomentsMatchMellin) {
  // the variance of T^s is finite only for |s| < 1/2
  for (double a : {0.3, 0.7}) {
    const SampleSet t = sample_T_alpha(a, kN, kSeed);
    for (double s : {-0.4, -0.2, 0.2, 0.4}) {
      const MeanEstimate m = empirical_mean(t.values, [s](double x) { return std::pow(x, s); });
      EXPECT_NEAR(m.mean, mellin_T_alpha(s, a), 4.0 * m.std_error) << a << " " << s;
    }
  }
}

TEST(Factorization, ZinvMatchesGammaProducts) {
  for (int n : {2, 3, 4}) {
    const KsReport r = verify_factorization_zinv(n, kN, kSeed);
    EXPECT_TRUE(r.pass) << n << " D=" << r.statistic << " thr=" << r.threshold;
  }
  EXPECT_THROW(verify_factorization_zinv(5, 10, kSeed), DomainError);
}

TEST(Factorization, MomentCrossCheckThirds) {
  const double s = 0.2;
  const SampleSet z = sample_positive_stable(1.0 / 3.0, kN, kSeed);
  const MeanEstimate lhs = empirical_mean(z.values, [s](double x) { return std::pow(x, -s); });
  const double exact = std::tgamma(1.0 + 3.0 * s) / std::tgamma(1.0 + s);
  EXPECT_NEAR(lhs.mean, exact, 4.0 * lhs.std_error);
  const SampleSet g1 = sample_gamma(1.0 / 3.0, kN, 5);
  const SampleSet g2 = sample_gamma(2.0 / 3.0, kN, 6);
  std::vector<double> prod(kN);
  for (std::size_t i = 0; i < kN; ++i) prod[i] = 27.0 * g1.values[i] * g2.values[i];
  const MeanEstimate rhs = empirical_mean(prod, [s](double x) { return std::pow(x, s); });
  EXPECT_NEAR(rhs.mean, exact, 4.0 * rhs.std_error);
  EXPECT_NEAR(lhs.mean, rhs.mean, 4.0 * std::hypot(lhs.std_error, rhs.std_error));
}

TEST(SqrtGammaProduct, KsAgainstDensity) {
  for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{1.0 / 3.0, 2.0 / 3.0}, std::pair{5.0, 0.2}}) {
    const KsReport r = verify_sqrt_gamma_product_density(t, s, kN, kSeed);
    EXPECT_TRUE(r.pass) << t << " " << s << " D=" << r.statistic << " " << r.detail;
  }
}

TEST(SqrtZOneThird, KsAgainstDensity) {
  SampleSet z = sample_positive_stable(1.0 / 3.0, kN, kSeed);
  for (double& v : z.values) v = std::sqrt(v);
  const auto [mn, mx] = std::minmax_element(z.values.begin(), z.values.end());
  QuadratureSpec q;
  q.abs_tol = 1e-14;
  const detail::TabulatedCdf cdf([](double x) { return density_sqrt_Z_one_third(x); },
                                 0.5 * *mn, 2.0 * *mx, 4000, q);
  const KsReport r = ks_one_sample(z.values, cdf, 0.01);
  EXPECT_LT(r.statistic, 0.01);
  EXPECT_TRUE(r.pass) << r.statistic;
}

TEST(BesselProduct, Formula) {
  for (auto [a, x, y] : {std::tuple{1.0 / 6.0, 1.0, 2.0}, std::tuple{0.25, 1.0, 1.0},
                         std::tuple{0.0, 0.5, 3.0}, std::tuple{-0.3, 2.0, 0.7}}) {
    const Verdict v = verify_bessel_product_formula(a, x, y);
    EXPECT_EQ(v.status, Status::Pass) << a << " " << x << " " << y << ": " << v.detail;
  }
  EXPECT_THROW(verify_bessel_product_formula(0.5, 1.0, 1.0), DomainError);
}

TEST(BesselProduct, AlphaZeroIndependentOracle) {
  for (auto [x, y] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{0.5, 3.0}}) {
    const double lhs = boost::math::cyl_bessel_k(0.0, x) * boost::math::cyl_bessel_k(0.0, y);
    const double root = 2.0 * std::sqrt(x * y);
    const double rhs =
        2.0 * integrate_half_line(
                  [&](double u) {
                    const double w = std::exp(-(x + y) * std::cosh(u));
                    return w == 0.0 ? 0.0 : boost::math::cyl_bessel_k(0.0, root * std::sinh(u)) * w;
                  },
                  QuadratureSpec{})
                  .value;
    EXPECT_NEAR(lhs, rhs, 1e-8 * lhs);
    const Verdict v = verify_bessel_product_formula(0.0, x, y);
    EXPECT_EQ(v.status, Status::Pass);
  }
}

TEST(BesselProduct, WitnessOnFailure) {
  // a loose quadrature cannot meet a zero tolerance
  QuadratureSpec q;
  q.rel_tol = 1e-3;
  q.abs_tol = 1e-3;
  const Verdict v = verify_bessel_product_formula(0.2, 1.0, 2.0, q, 0.0);
  ASSERT_EQ(v.status, Status::Fail) << v.detail;
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->point, (std::vector<double>{0.2, 1.0, 2.0}));
}

TEST(Kanter, ConsequenceIsCm) {
  const ScanGrid grid = ScanGrid::geometric(0.01, 100.0, 60);
  for (double a : {0.3, 0.5, 0.7}) {
    const Verdict v = verify_kanter_cm(a, grid);
    EXPECT_EQ(v.status, Status::Pass) << a << ": " << v.detail;
  }
  for (double x : {0.2, 3.0}) {
    EXPECT_NEAR(kanter_function(x, 0.5), 1.0 / (std::sqrt(x) * (x + 1.0)), 1e-15);
  }
}

TEST(Determinism, BitExactAndSeedSensitive) {
  const SampleSet a = sample_T_alpha(0.4, 40000, 123);
  const SampleSet b = sample_T_alpha(0.4, 40000, 123);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.generator_id, b.generator_id);
  EXPECT_NE(a.values, sample_T_alpha(0.4, 40000, 124).values);
  // a prefix of a larger run is the smaller run
  const SampleSet big = sample_gamma(0.7, 50000, 9);
  const SampleSet small = sample_gamma(0.7, 20000, 9);
  EXPECT_TRUE(std::equal(small.values.begin(), small.values.end(), big.values.begin()));
  // thread count does not enter the stream layout
  set_max_threads(1);
  const SampleSet serial = sample_positive_stable(0.6, 40000, 5);
  set_max_threads(0);
  EXPECT_EQ(serial.values, sample_positive_stable(0.6, 40000, 5).values);
}

TEST(Export, HeaderAndValues) {
  const SampleSet s = sample_gamma(2.0, 5, 11);
  std::ostringstream os;
  write_sample_set(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  const auto header = nlohmann::json::parse(line);
  EXPECT_EQ(header["seed"], 11);
  EXPECT_EQ(header["n"], 5);
  EXPECT_EQ(header["generator_id"], s.generator_id);
  EXPECT_EQ(header["params"]["t"], 2.0);
  std::vector<double> back;
  while (std::getline(is, line)) back.push_back(std::stod(line));
  EXPECT_EQ(back, s.values);  // 17 digits round-trip exactly
}

TEST(Ks, CoefficientsAndRerun) {
  EXPECT_EQ(ks_coefficient(0.05), 1.36);
  EXPECT_EQ(ks_coefficient(0.01), 1.63);
  EXPECT_NEAR(ks_coefficient(0.1), 1.2239, 1e-4);
  int calls = 0;
  const KsReport r = ks_with_rerun(
      [&](std::uint64_t) {
        KsReport k;
        k.pass = ++calls > 1;
        return k;
      },
      1);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(r.reruns, 1);
  EXPECT_TRUE(r.pass);
  // pass <=> statistic < threshold
  const KsReport exact = ks_one_sample({0.5}, [](double x) { return x; }, 0.05);
  EXPECT_EQ(exact.pass, exact.statistic < exact.threshold);
  EXPECT_NEAR(exact.statistic, 0.5, 1e-15);
}
