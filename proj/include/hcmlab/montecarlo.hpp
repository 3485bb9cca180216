#pragma once

// Samplers for gamma, positive stable and T_alpha variables, Kolmogorov-
// Smirnov statistics, and the distributional identities checked against
// them.
//
// Random streams: std::mt19937_64 seeded through std::seed_seq from
// (seed, stream tag, block index). Samples are generated in blocks of
// kBlockSize values, one stream per block, so the output depends only on
// (seed, generator, n) and not on the number of threads. Uniforms, normals
// and exponentials are built from raw engine output rather than the
// <random> distributions, whose algorithms are implementation-defined.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcmlab/densities.hpp"
#include "hcmlab/errors.hpp"
#include "hcmlab/monotone.hpp"
#include "hcmlab/parallel.hpp"
#include "hcmlab/quadrature.hpp"
#include "hcmlab/specfun.hpp"

namespace hcmlab {

inline constexpr const char* kEngineId = "mt19937_64+seed_seq";

/// One independent random stream.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double exponential() { return -std::log(uniform()); }
  /// Standard normal by Box-Muller; the second variate is kept.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * kPi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SampleSet {
  std::vector<double> values;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string generator_id;
  std::map<std::string, double> params;
};

inline constexpr std::size_t kBlockSize = 1 << 14;

namespace detail {

// Stream tags keep the samplers' streams apart under a shared seed.
enum StreamTag : std::uint64_t {
  kTagGamma = 1,
  kTagStable = 2,
  kTagStableSecond = 3,
  kTagGammaProduct = 16,  // + factor index
};

template <class Draw>
std::vector<double> generate(std::size_t n, std::uint64_t seed, std::uint64_t tag, Draw draw) {
  std::vector<double> out(n);
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  parallel_for(blocks, [&](std::size_t b) {
    Stream s(seed, tag, b);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) out[i] = draw(s);
  });
  return out;
}

// Marsaglia-Tsang for shape >= 1; for shape < 1, G_{a+1} U^{1/a}, formed in
// logs. A result that underflows to 0 is redrawn.
inline double draw_gamma(Stream& s, double shape) {
  const double a = shape < 1.0 ? shape + 1.0 : shape;
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = s.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = s.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      if (shape >= 1.0) return d * v;
      const double value = std::exp(std::log(d * v) + std::log(s.uniform()) / shape);
      if (value > 0.0) return value;
    }
  }
}

// log Z_alpha by the sine-ratio (Kanter) representation
// Z = (A(U) / E)^{(1-alpha)/alpha}, U ~ Unif(0, pi), E ~ Exp(1),
// A(U) = sin(alpha U)^{alpha/(1-alpha)} sin((1-alpha) U) / sin(U)^{1/(1-alpha)}.
inline double draw_log_stable(Stream& s, double alpha) {
  const double u = kPi * s.uniform();
  const double e = s.exponential();
  const double log_a = alpha / (1.0 - alpha) * std::log(std::sin(alpha * u)) +
                       std::log(std::sin((1.0 - alpha) * u)) -
                       std::log(std::sin(u)) / (1.0 - alpha);
  return (1.0 - alpha) / alpha * (log_a - std::log(e));
}

inline void require_sample_size(std::size_t n, const char* who) {
  if (n < 1) throw DomainError(std::string(who) + ": n must be >= 1");
}

inline std::string id_with_params(const std::string& name,
                                  const std::map<std::string, double>& params) {
  std::ostringstream s;
  s.precision(17);
  s << name << "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    s << (first ? "" : ",") << k << "=" << v;
    first = false;
  }
  s << ")/" << kEngineId;
  return s.str();
}

inline SampleSet make_set(std::vector<double> values, std::uint64_t seed, const std::string& name,
                          std::map<std::string, double> params) {
  SampleSet out;
  out.n = values.size();
  out.values = std::move(values);
  out.seed = seed;
  out.generator_id = id_with_params(name, params);
  out.params = std::move(params);
  return out;
}

}  // namespace detail

inline SampleSet sample_gamma(double t, std::size_t n, std::uint64_t seed) {
  if (!(t > 0.0)) throw DomainError("sample_gamma: shape must be > 0");
  detail::require_sample_size(n, "sample_gamma");
  auto v = detail::generate(n, seed, detail::kTagGamma,
                            [t](Stream& s) { return detail::draw_gamma(s, t); });
  return detail::make_set(std::move(v), seed, "gamma", {{"t", t}});
}

/// Positive alpha-stable samples, E[exp(-lambda Z)] = exp(-lambda^alpha).
inline SampleSet sample_positive_stable(double alpha, std::size_t n, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("sample_positive_stable: alpha must lie in (0, 1)");
  }
  detail::require_sample_size(n, "sample_positive_stable");
  auto v = detail::generate(n, seed, detail::kTagStable, [alpha](Stream& s) {
    return std::exp(detail::draw_log_stable(s, alpha));
  });
  return detail::make_set(std::move(v), seed, "positive_stable", {{"alpha", alpha}});
}

/// T_alpha = (Z / Z')^alpha with Z, Z' from two independent streams.
inline SampleSet sample_T_alpha(double alpha, std::size_t n, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("sample_T_alpha: alpha must lie in (0, 1)");
  }
  detail::require_sample_size(n, "sample_T_alpha");
  auto draw = [alpha](Stream& s) { return detail::draw_log_stable(s, alpha); };
  std::vector<double> num = detail::generate(n, seed, detail::kTagStable, draw);
  const std::vector<double> den = detail::generate(n, seed, detail::kTagStableSecond, draw);
  for (std::size_t i = 0; i < n; ++i) num[i] = std::exp(alpha * (num[i] - den[i]));
  return detail::make_set(std::move(num), seed, "T_alpha", {{"alpha", alpha}});
}

/// Newline-delimited decimals (17 significant digits) after a one-line JSON
/// header carrying seed, generator_id, n and params.
inline void write_sample_set(std::ostream& os, const SampleSet& s) {
  nlohmann::json header;
  header["seed"] = s.seed;
  header["generator_id"] = s.generator_id;
  header["n"] = s.n;
  header["params"] = s.params;
  os << header.dump() << '\n';
  const auto precision = os.precision();
  os.precision(17);
  for (double v : s.values) os << v << '\n';
  os.precision(precision);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

struct KsReport {
  double statistic = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;  // second sample size; 0 for a one-sample test
  double level = 0.05;
  double threshold = 0.0;
  bool pass = false;
  int reruns = 0;
  std::string detail;
};

/// Asymptotic critical coefficient: 1.36 at 5%, 1.63 at 1%, otherwise
/// sqrt(-log(level/2)/2).
inline double ks_coefficient(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("ks_coefficient: level in (0,1)");
  if (level == 0.05) return 1.36;
  if (level == 0.01) return 1.63;
  return std::sqrt(-0.5 * std::log(0.5 * level));
}

template <class Cdf>
KsReport ks_one_sample(std::vector<double> values, Cdf&& cdf, double level = 0.05) {
  if (values.empty()) throw DomainError("ks_one_sample: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  KsReport r;
  r.statistic = d;
  r.n = values.size();
  r.level = level;
  r.threshold = ks_coefficient(level) / std::sqrt(n);
  r.pass = d < r.threshold;
  return r;
}

/// Two-sample statistic; threshold c(level) sqrt((n + m) / (n m)).
inline KsReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                              double level = 0.05) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  KsReport r;
  r.statistic = d;
  r.n = a.size();
  r.m = b.size();
  r.level = level;
  r.threshold = ks_coefficient(level) * std::sqrt((n + m) / (n * m));
  r.pass = d < r.threshold;
  return r;
}

/// Runs a randomized KS check; on failure reruns it once with a derived seed.
/// Two failures are reported as a failure.
template <class Run>
KsReport ks_with_rerun(Run&& run, std::uint64_t seed) {
  KsReport r = run(seed);
  if (r.pass) return r;
  const double first = r.statistic;
  r = run(seed ^ 0x9E3779B97F4A7C15ull);
  r.reruns = 1;
  std::ostringstream d;
  d << "first run failed (D = " << first << "), rerun with a derived seed";
  r.detail = r.detail.empty() ? d.str() : d.str() + "; " + r.detail;
  return r;
}

/// Monte Carlo mean with its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

template <class Fn>
MeanEstimate empirical_mean(const std::vector<double>& values, Fn&& fn) {
  if (values.size() < 2) throw DomainError("empirical_mean: needs at least 2 values");
  // Welford
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double x : values) {
    const double y = fn(x);
    ++k;
    const double delta = y - mean;
    mean += delta / k;
    m2 += delta * (y - mean);
  }
  const double var = m2 / (k - 1);
  return {mean, std::sqrt(var / k)};
}

// ---------------------------------------------------------------------------
// Identities

/// T_alpha samples against cdf_T_alpha.
inline KsReport verify_T_alpha_density(double alpha, std::size_t sample_n, std::uint64_t seed,
                                       double level = 0.01) {
  const SampleSet s = sample_T_alpha(alpha, sample_n, seed);
  KsReport r = ks_one_sample(s.values, [alpha](double x) { return cdf_T_alpha(x, alpha); }, level);
  r.detail = "T_alpha samples vs cdf_T_alpha, alpha = " + std::to_string(alpha);
  return r;
}

/// Z_{1/n}^{-1} against n^n gamma_{1/n} ... gamma_{(n-1)/n}, two-sample KS.
inline KsReport verify_factorization_zinv(int n_gamma, std::size_t sample_n, std::uint64_t seed,
                                          double level = 0.01) {
  if (n_gamma < 2 || n_gamma > 4) {
    throw DomainError("verify_factorization_zinv: n_gamma must be 2, 3 or 4");
  }
  SampleSet z = sample_positive_stable(1.0 / n_gamma, sample_n, seed);
  for (double& v : z.values) v = 1.0 / v;

  std::vector<double> product(sample_n, std::pow(static_cast<double>(n_gamma), n_gamma));
  for (int j = 1; j < n_gamma; ++j) {
    const double shape = static_cast<double>(j) / n_gamma;
    const std::vector<double> g =
        detail::generate(sample_n, seed, detail::kTagGammaProduct + j,
                         [shape](Stream& s) { return detail::draw_gamma(s, shape); });
    for (std::size_t i = 0; i < sample_n; ++i) product[i] *= g[i];
  }
  KsReport r = ks_two_sample(std::move(z.values), std::move(product), level);
  r.detail = "1/Z_{1/" + std::to_string(n_gamma) + "} vs scaled gamma product";
  return r;
}

namespace detail {

// Distribution function of a density on (0, inf) on [lo, hi]: the mass of
// (0, lo] by tanh-sinh, then adaptive Gauss-Kronrod on a geometric mesh,
// and cubic Hermite interpolation of F between mesh nodes using F' = pdf.
class TabulatedCdf {
 public:
  template <class Pdf>
  TabulatedCdf(Pdf&& pdf, double lo, double hi, int nodes, const QuadratureSpec& q)
      : x_(static_cast<std::size_t>(nodes)), f_(x_.size()), d_(x_.size()) {
    if (!(lo > 0.0 && hi > lo) || nodes < 2) throw DomainError("TabulatedCdf: bad range");
    for (int i = 0; i < nodes; ++i) {
      x_[i] = std::exp(std::log(lo) + i * (std::log(hi) - std::log(lo)) / (nodes - 1));
    }
    x_.front() = lo;
    x_.back() = hi;
    std::vector<double> pieces(x_.size(), 0.0);
    pieces[0] = integrate_tanh_sinh(pdf, 0.0, lo, q).value;
    parallel_for(x_.size() - 1, [&](std::size_t i) {
      pieces[i + 1] = gauss_kronrod(pdf, x_[i], x_[i + 1], q).value;
      d_[i] = pdf(x_[i]);
    });
    d_.back() = pdf(hi);
    double running = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      running += pieces[i];
      f_[i] = running;
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return f_.front();
    if (x >= x_.back()) return f_.back();
    const std::size_t k = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1);
    const double h = x_[k + 1] - x_[k];
    const double s = (x - x_[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f_[k] + (s3 - 2 * s2 + s) * h * d_[k] +
           (-2 * s3 + 3 * s2) * f_[k + 1] + (s3 - s2) * h * d_[k + 1];
  }

  double total() const { return f_.back(); }

 private:
  std::vector<double> x_, f_, d_;
};

}  // namespace detail

/// sqrt(gamma_t gamma_s) samples against the distribution function obtained
/// by quadrature of density_sqrt_gamma_product.
inline KsReport verify_sqrt_gamma_product_density(double t, double s, std::size_t sample_n,
                                                  std::uint64_t seed, double level = 0.01) {
  if (!(t > 0.0 && s > 0.0)) {
    throw DomainError("verify_sqrt_gamma_product_density: shapes must be > 0");
  }
  detail::require_sample_size(sample_n, "verify_sqrt_gamma_product_density");
  const std::vector<double> a =
      detail::generate(sample_n, seed, detail::kTagGammaProduct + 1,
                       [t](Stream& st) { return detail::draw_gamma(st, t); });
  const std::vector<double> b =
      detail::generate(sample_n, seed, detail::kTagGammaProduct + 2,
                       [s](Stream& st) { return detail::draw_gamma(st, s); });
  std::vector<double> values(sample_n);
  for (std::size_t i = 0; i < sample_n; ++i) values[i] = std::sqrt(a[i] * b[i]);
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  QuadratureSpec q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  const detail::TabulatedCdf cdf(
      [t, s](double x) { return density_sqrt_gamma_product(x, t, s); }, 0.5 * *mn, 2.0 * *mx,
      4000, q);
  KsReport r = ks_one_sample(std::move(values), cdf, level);
  std::ostringstream d;
  d << "sqrt(gamma_" << t << " gamma_" << s << ") vs quadrature CDF (mass on range "
    << cdf.total() << ")";
  r.detail = d.str();
  return r;
}

/// K_a(x) K_a(y) = 2 cos(pi a) int_0^inf K_{2a}(2 sqrt(xy) sinh u) e^{-(x+y) cosh u} du.
/// Witness on FAIL: {alpha, x, y} with the relative difference.
inline Verdict verify_bessel_product_formula(double alpha, double x, double y,
                                             const QuadratureSpec& q = {},
                                             double rel_tol = 1e-8) {
  if (!(alpha > -0.5 && alpha < 0.5)) {
    throw DomainError("verify_bessel_product_formula: alpha must lie in (-1/2, 1/2)");
  }
  if (!(x > 0.0 && y > 0.0)) {
    throw DomainError("verify_bessel_product_formula: x, y must be > 0");
  }
  const double lhs = bessel_k(alpha, x) * bessel_k(alpha, y);
  const double root = 2.0 * std::sqrt(x * y);
  QuadratureSpec inner = q;
  inner.rel_tol = std::min(q.rel_tol, 1e-12);
  const QuadResult integral = integrate_half_line(
      [&](double u) {
        const double weight = std::exp(-(x + y) * std::cosh(u));
        if (weight == 0.0) return 0.0;
        return bessel_k(2.0 * alpha, root * std::sinh(u)) * weight;
      },
      inner);
  const double rhs = 2.0 * std::cos(kPi * alpha) * integral.value;
  const double rel = std::abs(lhs - rhs) / std::abs(lhs);
  Verdict v;
  v.tolerance = rel_tol;
  v.extremum = rel;
  v.grid = "exp-sinh quadrature of the u-integral";
  std::ostringstream d;
  d.precision(16);
  d << "lhs = " << lhs << ", rhs = " << rhs << ", relative difference " << rel;
  v.detail = d.str();
  if (rel <= rel_tol) {
    v.status = Status::Pass;
  } else {
    v.status = Status::Fail;
    v.witness = Witness{{alpha, x, y}, rel};
  }
  return v;
}

/// Empirical E[exp(-lambda Z_alpha)] against exp(-lambda^alpha) within
/// `sigmas` standard errors at each lambda. Witness: {lambda} with the
/// deviation in standard errors.
inline Verdict verify_stable_laplace(double alpha, const std::vector<double>& lambdas,
                                     std::size_t sample_n, std::uint64_t seed,
                                     double sigmas = 4.0) {
  const SampleSet s = sample_positive_stable(alpha, sample_n, seed);
  Verdict v;
  v.tolerance = sigmas;
  v.grid = "lambda set of size " + std::to_string(lambdas.size());
  double worst = 0.0;
  double worst_lambda = 0.0;
  std::ostringstream d;
  for (double lambda : lambdas) {
    const MeanEstimate m = empirical_mean(s.values, [lambda](double z) {
      return std::exp(-lambda * z);
    });
    const double z_score = std::abs(m.mean - std::exp(-std::pow(lambda, alpha))) / m.std_error;
    d << "[lambda " << lambda << ": " << m.mean << " vs " << std::exp(-std::pow(lambda, alpha))
      << ", " << z_score << " se] ";
    if (z_score > worst) {
      worst = z_score;
      worst_lambda = lambda;
    }
  }
  v.extremum = worst;
  v.detail = d.str();
  if (worst <= sigmas) {
    v.status = Status::Pass;
  } else {
    v.status = Status::Fail;
    v.witness = Witness{{worst_lambda}, worst};
  }
  return v;
}

/// The function x^{-alpha} / (x^{2(1-alpha)} + 2 cos(pi alpha) x^{1-alpha} + 1),
/// whose complete monotonicity follows from the Kanter factorization.
inline double kanter_function(double x, double alpha) {
  return std::pow(x, -alpha) * f_family(x, FamilyParams(alpha, 1.0 - alpha));
}

inline Verdict verify_kanter_cm(double alpha, const ScanGrid& grid, int order = 8,
                                double tol = 1e-9) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("verify_kanter_cm: alpha must lie in (0, 1)");
  }
  return cm_check_by_differences([alpha](double x) { return kanter_function(x, alpha); },
                                 grid, order, {0.05, 0.2, 1.0}, tol);
}

}  // namespace hcmlab
