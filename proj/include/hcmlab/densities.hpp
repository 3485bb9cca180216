#pragma once

// Closed-form densities, the T_alpha distribution function and its Mellin
// transform, and the HCM product form c x^a prod (1 + c_i x)^{-b_i}.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hcmlab/errors.hpp"
#include "hcmlab/quadrature.hpp"
#include "hcmlab/specfun.hpp"

namespace hcmlab {

namespace detail {
inline void require_open_unit(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(who) + ": alpha must lie in (0, 1)");
  }
}
}  // namespace detail

/// Density of T_alpha = (Z_alpha / Z'_alpha)^alpha, a drifted Cauchy law
/// conditioned to be positive.
inline double density_T_alpha(double x, double alpha) {
  detail::require_open_unit(alpha, "density_T_alpha");
  if (!(x > 0.0)) throw DomainError("density_T_alpha: x must be positive");
  const double s = std::sin(kPi * alpha);
  const double c = std::cos(kPi * alpha);
  if (x > 1.0) {
    // x^{-2} / (1 + 2c/x + 1/x^2) keeps precision and range for large x.
    const double r = 1.0 / x;
    return s / (kPi * alpha) * r * r / (1.0 + 2.0 * c * r + r * r);
  }
  return s / (kPi * alpha * (x * x + 2.0 * c * x + 1.0));
}

/// P(T_alpha <= x) = (arctan((x + cos pi a) / sin pi a) - (pi/2 - pi a)) / (pi a).
inline double cdf_T_alpha(double x, double alpha) {
  detail::require_open_unit(alpha, "cdf_T_alpha");
  if (!(x >= 0.0)) throw DomainError("cdf_T_alpha: x must be >= 0");
  if (std::isinf(x)) return 1.0;
  const double s = std::sin(kPi * alpha);
  const double c = std::cos(kPi * alpha);
  if (x > 1.0) {
    // Upper tail: (pi/2 - arctan(y)) = arctan(1/y), computed directly.
    const double tail = std::atan(s / (x + c)) / (kPi * alpha);
    return 1.0 - tail;
  }
  return (std::atan((x + c) / s) - (0.5 * kPi - kPi * alpha)) / (kPi * alpha);
}

/// E[T_alpha^s] = Gamma(1-s) Gamma(1+s) / (Gamma(1-alpha s) Gamma(1+alpha s)),
/// obtained from E[Z_alpha^s] = Gamma(1 - s/alpha) / Gamma(1 - s).
inline double mellin_T_alpha(double s, double alpha) {
  detail::require_open_unit(alpha, "mellin_T_alpha");
  if (!(std::abs(s) < 1.0)) {
    throw DomainError("mellin_T_alpha: needs |s| < 1 (moment diverges)");
  }
  return std::exp(log_gamma(1.0 - s) + log_gamma(1.0 + s) -
                  log_gamma(1.0 - alpha * s) - log_gamma(1.0 + alpha * s));
}

/// Density of sqrt(gamma_t gamma_s): 4 x^{t+s-1} K_{t-s}(2x) / (Gamma(t) Gamma(s)).
inline double density_sqrt_gamma_product(double x, double t, double s) {
  if (!(t > 0.0 && s > 0.0)) {
    throw DomainError("density_sqrt_gamma_product: shapes must be positive");
  }
  if (!(x > 0.0)) {
    throw DomainError("density_sqrt_gamma_product: x must be positive");
  }
  if (2.0 * x > 700.0) return 0.0;  // K underflows
  const double log_front = std::log(4.0) + (t + s - 1.0) * std::log(x) -
                           log_gamma(t) - log_gamma(s);
  if (x < 1e-3) return std::exp(log_front + log_bessel_k(t - s, 2.0 * x));
  return std::exp(log_front) * bessel_k(t - s, 2.0 * x);
}

/// Density of sqrt(Z_{1/3}): 2 / (3 pi x^2) K_{1/3}(2 / (3 sqrt(3) x)).
inline double density_sqrt_Z_one_third(double x) {
  if (!(x > 0.0)) {
    throw DomainError("density_sqrt_Z_one_third: x must be positive");
  }
  const double arg = 2.0 / (3.0 * std::sqrt(3.0) * x);
  if (arg > 700.0) return 0.0;
  return 2.0 / (3.0 * kPi * x * x) * bessel_k(1.0 / 3.0, arg);
}

// ---------------------------------------------------------------------------

/// c x^a prod_i (1 + c_i x)^{-b_i}, c, c_i, b_i > 0.
class HcmProductForm {
 public:
  struct Factor {
    double scale;     // c_i
    double exponent;  // b_i
  };

  HcmProductForm(double c, double a, std::vector<Factor> factors = {})
      : c_(c), a_(a), factors_(std::move(factors)) {
    if (!(c_ > 0.0)) throw DomainError("HcmProductForm: c must be > 0");
    if (!std::isfinite(a_)) throw DomainError("HcmProductForm: a must be finite");
    for (const auto& f : factors_) {
      if (!(f.scale > 0.0) || !(f.exponent > 0.0)) {
        throw DomainError("HcmProductForm: c_i and b_i must be > 0");
      }
    }
  }

  double c() const { return c_; }
  double a() const { return a_; }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Evaluated in log space; strictly positive for x > 0.
  double operator()(double x) const {
    if (!(x > 0.0)) throw DomainError("HcmProductForm: x must be positive");
    double log_value = std::log(c_) + a_ * std::log(x);
    for (const auto& f : factors_) log_value -= f.exponent * std::log1p(f.scale * x);
    return std::exp(log_value);
  }

  /// Analytic continuation to C minus (-inf, 0] (principal branches).
  Complex operator()(Complex z) const {
    Complex log_value = std::log(c_) + a_ * std::log(z);
    for (const auto& f : factors_) log_value -= f.exponent * std::log(1.0 + f.scale * z);
    return std::exp(log_value);
  }

 private:
  double c_;
  double a_;
  std::vector<Factor> factors_;
};

inline double eval_hcm_product_form(const HcmProductForm& form, double x) {
  return form(x);
}

// ---------------------------------------------------------------------------

/// A probability density on (0, inf) named by kind and parameters.
class DensitySpec {
 public:
  enum class Kind { TAlpha, Gamma, SqrtGammaProduct, SqrtZOneThird, FamilyNormalized };

  static DensitySpec t_alpha(double alpha) {
    detail::require_open_unit(alpha, "DensitySpec::t_alpha");
    return DensitySpec(Kind::TAlpha, {alpha});
  }
  static DensitySpec gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("DensitySpec::gamma: shape must be > 0");
    return DensitySpec(Kind::Gamma, {shape});
  }
  static DensitySpec sqrt_gamma_product(double t, double s) {
    if (!(t > 0.0 && s > 0.0)) {
      throw DomainError("DensitySpec::sqrt_gamma_product: shapes must be > 0");
    }
    return DensitySpec(Kind::SqrtGammaProduct, {t, s});
  }
  static DensitySpec sqrt_z_one_third() { return DensitySpec(Kind::SqrtZOneThird, {}); }

  /// f_{alpha,t} / int f_{alpha,t}; integrable only when t > 1/2. The
  /// normalizing constant is computed by quadrature.
  static DensitySpec family_normalized(const FamilyParams& p,
                                       const QuadratureSpec& q = {}) {
    if (!(p.t > 0.5)) {
      throw DomainError("DensitySpec::family_normalized: needs t > 1/2");
    }
    if (p.alpha >= 1.0) {
      throw DomainError("DensitySpec::family_normalized: needs alpha < 1");
    }
    const double mass =
        integrate_half_line([&](double x) { return f_family(x, p); }, q).value;
    return DensitySpec(Kind::FamilyNormalized, {p.alpha, p.t, mass});
  }

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

  std::string name() const {
    switch (kind_) {
      case Kind::TAlpha: return "T_alpha";
      case Kind::Gamma: return "gamma";
      case Kind::SqrtGammaProduct: return "sqrt_gamma_product";
      case Kind::SqrtZOneThird: return "sqrt_Z_one_third";
      case Kind::FamilyNormalized: return "f_family_normalized";
    }
    return "unknown";
  }

  double pdf(double x) const {
    switch (kind_) {
      case Kind::TAlpha: return density_T_alpha(x, params_[0]);
      case Kind::Gamma: {
        if (!(x > 0.0)) throw DomainError("gamma pdf: x must be positive");
        const double t = params_[0];
        return std::exp((t - 1.0) * std::log(x) - x - log_gamma(t));
      }
      case Kind::SqrtGammaProduct:
        return density_sqrt_gamma_product(x, params_[0], params_[1]);
      case Kind::SqrtZOneThird: return density_sqrt_Z_one_third(x);
      case Kind::FamilyNormalized:
        return f_family(x, FamilyParams(params_[0], params_[1])) / params_[2];
    }
    return 0.0;
  }

  double operator()(double x) const { return pdf(x); }

 private:
  DensitySpec(Kind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}

  Kind kind_;
  std::vector<double> params_;
};

/// int_0^inf pdf; callers compare against 1 to certify a DensitySpec.
inline QuadResult total_mass(const DensitySpec& d, const QuadratureSpec& q = {}) {
  return integrate_half_line([&](double x) { return d.pdf(x); }, q);
}

}  // namespace hcmlab
