#pragma once

// Special functions and the complex kernels shared by every other module:
// complex log-gamma, the modified Bessel function K_nu, the quadratic
// P_alpha(z) = z^2 + 2 cos(pi alpha) z + 1 and the family
// f_{alpha,t}(z) = 1 / P_alpha(z^t).
//
// Complex powers always use the principal branch, arg in (-pi, pi], so the
// branch cut of z^t sits on the closed negative real axis.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "hcmlab/errors.hpp"

namespace hcmlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// The pair (alpha, t) indexing f_{alpha,t}. eps() = 1 - alpha - t is the
/// distance to the HCM boundary t = 1 - alpha; it is negative past it.
struct FamilyParams {
  double alpha = 0.5;
  double t = 0.5;

  FamilyParams() = default;
  FamilyParams(double alpha_, double t_) : alpha(alpha_), t(t_) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw DomainError("FamilyParams: alpha must lie in [0, 1]");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw DomainError("FamilyParams: t must be finite and >= 0");
    }
  }

  static FamilyParams from_eps(double alpha, double eps) {
    return FamilyParams(alpha, 1.0 - alpha - eps);
  }

  double eps() const { return 1.0 - alpha - t; }
  double cos_pi_alpha() const { return std::cos(kPi * alpha); }
};

// ---------------------------------------------------------------------------
// log-gamma

namespace detail {

// Godfrey's coefficients for g = 607/128, N = 15.
inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr std::array<double, 15> kLanczosCoef = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5};

// log Gamma(z) for Re(z) >= 1/2.
inline Complex lanczos_log_gamma(Complex z) {
  const Complex zm = z - 1.0;
  Complex series = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) {
    series += kLanczosCoef[k] / (zm + static_cast<double>(k));
  }
  const Complex t = zm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t +
         std::log(series);
}

}  // namespace detail

/// Principal branch of log Gamma(z): the branch that is real on (0, inf) and
/// continuous on the plane cut along (-inf, 0]. For Re(z) < 1/2 the value is
/// obtained by the upward recurrence log G(z) = log G(z+n) - sum log(z+k),
/// which selects that branch without a separate unwrapping step.
inline Complex log_gamma(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    std::ostringstream msg;
    msg << "log_gamma: pole at z = " << z.real();
    throw PoleError(msg.str());
  }
  if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);
  const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
  Complex correction = 0.0;
  for (int k = 0; k < shift; ++k) correction += std::log(z + double(k));
  return detail::lanczos_log_gamma(z + double(shift)) - correction;
}

/// Real log|Gamma(x)| for the positive arguments used by Mellin formulas.
inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma(real): argument must be positive");
  }
  return log_gamma(Complex(x, 0.0)).real();
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind

namespace detail {

struct ScaledBesselK {
  double log_scale;  // K = exp(log_scale) * value
  double value;
};

/// K_nu(x) = int_0^inf cosh(nu y) exp(-x cosh y) dy.
///
/// The integrand is entire in y and decays like exp(-x e^y / 2), so the
/// trapezoidal rule on [0, inf) converges double-exponentially in the step.
/// The step is halved until two successive sums agree to 1e-14; the range is
/// truncated once past the peak the integrand drops below 1e-18 of the sum.
/// For tiny x the peak exponent is factored out so nothing overflows.
inline ScaledBesselK bessel_k_scaled(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_k: x must be positive and finite");
  }
  nu = std::abs(nu);
  auto log_cosh = [](double v) {
    v = std::abs(v);
    return v + std::log1p(std::exp(-2.0 * v)) - std::numbers::ln2;
  };
  // Past asinh(nu/x) the exponent is decreasing.
  const double y_peak = std::asinh(nu / x);
  const double shift = std::max(0.0, log_cosh(nu * y_peak) - x * std::cosh(y_peak));
  auto term = [&](double y) {
    return std::exp(log_cosh(nu * y) - x * std::cosh(y) - shift);
  };

  double h = 0.5;
  double sum = 0.5 * term(0.0);
  double y_max = 0.0;
  for (int k = 1;; ++k) {
    const double y = k * h;
    const double v = term(y);
    sum += v;
    y_max = y;
    if (y > y_peak && v <= 1e-18 * sum) break;
    if (k > 100000) throw NonConvergence("bessel_k: range search");
  }
  double estimate = h * sum;
  for (int level = 0; level < 12; ++level) {
    double mid = 0.0;
    for (double y = 0.5 * h; y < y_max; y += h) mid += term(y);
    sum += mid;
    h *= 0.5;
    const double refined = h * sum;
    const bool done = std::abs(refined - estimate) <= 1e-14 * refined;
    estimate = refined;
    if (done && level >= 1) return {shift, estimate};
  }
  throw NonConvergence("bessel_k: step refinement did not settle");
}

}  // namespace detail

inline double bessel_k(double nu, double x) {
  const detail::ScaledBesselK k = detail::bessel_k_scaled(nu, x);
  return k.log_scale == 0.0 ? k.value : std::exp(k.log_scale) * k.value;
}

inline double log_bessel_k(double nu, double x) {
  const detail::ScaledBesselK k = detail::bessel_k_scaled(nu, x);
  return k.log_scale + std::log(k.value);
}

// ---------------------------------------------------------------------------
// P_alpha and the family f_{alpha,t}

/// P_alpha(z) = z^2 + 2 cos(pi alpha) z + 1.
inline Complex p_alpha(Complex z, double alpha) {
  return z * z + 2.0 * std::cos(kPi * alpha) * z + 1.0;
}

/// 1 / P_alpha(w), rescaled for |w| > 1 so that huge |w| neither overflows
/// nor produces inf/inf.
inline Complex inv_p_alpha(Complex w, double alpha) {
  const double c = std::cos(kPi * alpha);
  if (std::abs(w) <= 1.0) {
    const Complex p = w * w + 2.0 * c * w + 1.0;
    if (p == 0.0) throw PoleError("inv_p_alpha: zero of P_alpha");
    return 1.0 / p;
  }
  const Complex r = 1.0 / w;
  const Complex q = 1.0 + 2.0 * c * r + r * r;
  if (q == 0.0) throw PoleError("inv_p_alpha: zero of P_alpha");
  return r * r / q;
}

/// Principal-branch power z^t.
inline Complex principal_pow(Complex z, double t) {
  if (z == 0.0) return t == 0.0 ? Complex(1.0) : Complex(0.0);
  return std::exp(t * std::log(z));
}

/// f_{alpha,t}(z) = 1 / P_alpha(z^t) on C minus (-inf, 0].
inline Complex f_family(Complex z, const FamilyParams& p) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    throw DomainError("f_family: z lies on the branch cut (-inf, 0]");
  }
  return inv_p_alpha(principal_pow(z, p.t), p.alpha);
}

inline double f_family(double x, const FamilyParams& p) {
  return f_family(Complex(x, 0.0), p).real();
}

/// Derivative f'(z) = -2t z^{t-1} (z^t + cos pi alpha) / P_alpha(z^t)^2.
inline Complex f_family_derivative(Complex z, const FamilyParams& p) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    throw DomainError("f_family_derivative: z lies on the branch cut");
  }
  const Complex w = principal_pow(z, p.t);
  const Complex inv = inv_p_alpha(w, p.alpha);
  return -2.0 * p.t * (w / z) * (w + p.cos_pi_alpha()) * inv * inv;
}

namespace detail {
// Zeros of P_alpha(z^t) off the cut for any alpha in [0, 1]. At alpha = 0 or
// 1 the two zeros of P_alpha coincide and each entry is a double pole.
inline std::vector<Complex> family_poles(double alpha, double t) {
  std::vector<Complex> poles;
  if (!(t > 0.0)) return poles;
  for (int k = 0;; ++k) {
    const double angle = ((1.0 - alpha) + 2.0 * k) * kPi / t;
    if (!(angle < kPi * (1.0 - 1e-12))) break;
    poles.push_back(std::polar(1.0, angle));
    if (angle != 0.0) poles.push_back(std::polar(1.0, -angle));
  }
  return poles;
}
}  // namespace detail

/// Zeros of P_alpha(z^t) in C minus (-inf, 0], i.e. the poles of the
/// continuation of f_{alpha,t}. The zeros e^{+-i(1-alpha)pi} of P_alpha pull
/// back to e^{+-i(1-alpha)pi/t}, which leave the cut exactly when
/// t > 1 - alpha. Further sheets (angles ((1-alpha)+2k)pi/t) contribute only
/// for t > 3 - alpha. Upper half-plane member of each pair first.
inline std::vector<Complex> pole_locations(const FamilyParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0) || !(p.t > 0.0)) {
    throw DomainError("pole_locations: needs alpha in (0,1) and t > 0");
  }
  return detail::family_poles(p.alpha, p.t);
}

}  // namespace hcmlab
