#pragma once

// Laplace transform, Bromwich inversion and the branch-cut representation of
// the inverse transform of f_{alpha,t}.
//
// Bromwich: g(lambda) = (1/pi) e^{lambda c} int_0^inf Re[e^{i lambda y} f(c+iy)] dy
// (the line integral folded by conjugate symmetry). The integrand oscillates
// with period 2 pi / lambda and decays like y^{-2t}; it is integrated on
// half-period panels by adaptive Gauss-Kronrod, and the alternating tail of
// panel sums is accelerated by iterated averaging (Euler's transform).
// For t < 1/2 one integration by parts replaces f by -f'/lambda, whose
// decay y^{-2t-1} makes the tail absolutely convergent.
//
// Branch cut: for t < 1 - alpha the contour can be collapsed onto the cut,
// g(lambda) = -(1/pi) int_0^inf Im[1/P_alpha(x^t e^{i t pi})] e^{-lambda x} dx.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hcmlab/errors.hpp"
#include "hcmlab/parallel.hpp"
#include "hcmlab/quadrature.hpp"
#include "hcmlab/specfun.hpp"

namespace hcmlab {

enum class InversionMethod { Bromwich, BranchCut, ClosedForm };

inline std::string to_string(InversionMethod m) {
  switch (m) {
    case InversionMethod::Bromwich: return "bromwich";
    case InversionMethod::BranchCut: return "branch_cut";
    case InversionMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

/// g = L^{-1} f sampled on a strictly increasing lambda grid.
struct InversionResult {
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> errors;  // per-point error estimates
  InversionMethod method = InversionMethod::Bromwich;
  double est_error = 0.0;      // max of errors
};

/// A single inverse-transform value with its error estimate.
struct InverseValue {
  double value = 0.0;
  double error = 0.0;
};

// ---------------------------------------------------------------------------

/// int_0^inf e^{-x lambda} g(lambda) d lambda.
template <class G>
double laplace_forward(G&& g, double x, const QuadratureSpec& q = {}) {
  if (!(x > 0.0)) throw DomainError("laplace_forward: x must be positive");
  return integrate_half_line(
             [&](double lambda) {
               const double weight = std::exp(-x * lambda);
               return weight == 0.0 ? 0.0 : weight * g(lambda);
             },
             q)
      .value;
}

/// e^{-lambda cos pi alpha} sin(lambda sin pi alpha) / sin pi alpha, the
/// inverse transform of f_{alpha,1}(x) = 1/(x^2 + 2 cos(pi alpha) x + 1).
inline double closed_form_inverse_t1(double lambda, double alpha) {
  if (!(lambda >= 0.0)) throw DomainError("closed_form_inverse_t1: lambda < 0");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("closed_form_inverse_t1: alpha must lie in (0, 1)");
  }
  const double a = std::cos(kPi * alpha);
  const double b = std::sin(kPi * alpha);
  return std::exp(-lambda * a) * std::sin(lambda * b) / b;
}

// ---------------------------------------------------------------------------
// Bromwich

namespace detail {

/// Euler transform of the tail of a sequence of partial sums: `levels`
/// rounds of neighbour averaging applied to the last levels+1 entries.
inline double euler_average(const std::vector<double>& partial, std::size_t end,
                            int levels) {
  std::vector<double> s(partial.begin() + static_cast<long>(end - levels - 1),
                        partial.begin() + static_cast<long>(end));
  for (int l = 0; l < levels; ++l) {
    for (std::size_t i = 0; i + 1 < s.size() - l; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
  }
  return s[0];
}

/// int_0^inf Re[e^{i lambda y} h(y)] dy for h decaying like y^{-p} with
/// asymptotic phase `phase` (h(y) ~ |h| e^{-i phase}). `feature_scale`
/// bounds the region where h is not yet in its asymptotic regime.
template <class H>
InverseValue oscillatory_half_line(H&& h, double lambda, double phase,
                                   double feature_scale, double abs_tol,
                                   int max_subdivisions) {
  const double half_period = kPi / lambda;
  auto integrand = [&](double y) {
    const Complex e = std::polar(1.0, std::fmod(lambda * y, 2.0 * kPi));
    return (e * h(y)).real();
  };

  // Panel edges at the asymptotic zeros lambda y - phase = pi/2 + k pi.
  double first_edge = (phase + 0.5 * kPi) / lambda;
  while (first_edge > half_period) first_edge -= half_period;
  while (first_edge <= 0.0) first_edge += half_period;
  const int head_panels =
      std::max(1, static_cast<int>(std::ceil((feature_scale - first_edge) / half_period)));

  QuadratureSpec panel_q;
  panel_q.rel_tol = 1e-15;
  panel_q.max_subdivisions = max_subdivisions;
  constexpr int kTailPanels = 64;
  // Below roundoff of the integrand no panel can converge; e^{lambda c}
  // amplification can ask for that when a pole sits right of the origin.
  const double floor = 1e-15 * std::abs(h(0.0)) * half_period;
  panel_q.abs_tol = std::max(abs_tol / (head_panels + kTailPanels + 1), floor);

  InverseValue out;
  auto panel = [&](double a, double b) {
    QuadResult r = gauss_kronrod_unchecked(integrand, a, b, panel_q);
    if (!r.converged) {
      std::ostringstream msg;
      msg << "bromwich: panel [" << a << ", " << b << "] did not converge";
      throw NonConvergence(msg.str());
    }
    out.error += r.error;
    return r.value;
  };

  double head = panel(0.0, first_edge);
  for (int k = 0; k < head_panels; ++k) {
    head += panel(first_edge + k * half_period, first_edge + (k + 1) * half_period);
  }
  const double tail_start = first_edge + head_panels * half_period;

  std::vector<double> partial;
  partial.reserve(kTailPanels);
  double running = 0.0;
  for (int k = 0; k < kTailPanels; ++k) {
    running += panel(tail_start + k * half_period, tail_start + (k + 1) * half_period);
    partial.push_back(running);
  }
  constexpr int kLevels = 24;
  const double accelerated = euler_average(partial, partial.size(), kLevels);
  const double coarser = euler_average(partial, partial.size() - 4, kLevels - 4);
  out.value = head + accelerated;
  out.error += std::abs(accelerated - coarser);
  return out;
}

}  // namespace detail

/// Abscissa used when the caller does not pick one: just right of every
/// singularity (the branch point at 0 and any pole), by 1/lambda but at most
/// 1, so that the e^{lambda c} amplification of roundoff stays below e.
inline double default_abscissa(const FamilyParams& p, double lambda) {
  double sigma = 0.0;
  for (const Complex& pole : detail::family_poles(p.alpha, p.t)) {
    sigma = std::max(sigma, pole.real());
  }
  return sigma + std::min(1.0, 1.0 / lambda);
}

/// Bromwich inversion of f_{alpha,t} along Re z = c, with error estimate.
inline InverseValue bromwich_invert_detail(const FamilyParams& p, double c,
                                           double lambda,
                                           const QuadratureSpec& q = {}) {
  q.validate();
  if (!(c > 0.0)) throw DomainError("bromwich_invert: abscissa c must be > 0");
  if (!(lambda > 0.0)) throw DomainError("bromwich_invert: lambda must be > 0");
  if (!(p.t > 0.0)) throw DomainError("bromwich_invert: needs t > 0");
  double feature = std::max(1.0, c);
  for (const Complex& pole : detail::family_poles(p.alpha, p.t)) {
    if (pole.real() >= c) {
      std::ostringstream msg;
      msg << "bromwich_invert: pole " << pole.real() << (pole.imag() < 0 ? "" : "+")
          << pole.imag() << "i lies on or right of the line Re z = " << c;
      throw PoleError(msg.str());
    }
    feature = std::max(feature, std::abs(pole.imag()));
  }
  feature *= 8.0;
  const double amplification = std::exp(lambda * c);
  const bool by_parts = p.t < 0.5;
  // Target on the integral such that the error on g is q.abs_tol.
  const double scale = by_parts ? amplification / (kPi * lambda) : amplification / kPi;
  const double integral_tol = q.abs_tol / scale;

  InverseValue r;
  if (by_parts) {
    auto h = [&](double y) { return f_family_derivative(Complex(c, y), p); };
    // f'(iy) ~ -2t (iy)^{-2t-1}: phase pi (2t+1)/2 plus the sign.
    r = detail::oscillatory_half_line(h, lambda, kPi * (p.t + 0.5), feature,
                                      integral_tol, q.max_subdivisions);
    r.value = -r.value;
  } else {
    auto h = [&](double y) { return f_family(Complex(c, y), p); };
    r = detail::oscillatory_half_line(h, lambda, kPi * p.t, feature, integral_tol,
                                      q.max_subdivisions);
  }
  r.value *= scale;
  r.error *= scale;
  return r;
}

inline double bromwich_invert(const FamilyParams& p, double c, double lambda,
                              const QuadratureSpec& q = {}) {
  return bromwich_invert_detail(p, c, lambda, q).value;
}

/// Bromwich inversion with the default abscissa.
inline double bromwich_invert(const FamilyParams& p, double lambda,
                              const QuadratureSpec& q = {}) {
  return bromwich_invert(p, default_abscissa(p, lambda), lambda, q);
}

// ---------------------------------------------------------------------------
// Branch cut

namespace detail {
inline void require_inside_region(const FamilyParams& p, const char* who) {
  if (!(p.t > 0.0) || !(p.eps() > 0.0)) {
    throw DomainError(std::string(who) + ": needs 0 < t < 1 - alpha");
  }
}
}  // namespace detail

/// Im[1 / P_alpha(x^t e^{i t pi})]: the jump of f across the negative axis
/// at -x (upper side), negative on (0, x0) and positive beyond.
inline double branch_cut_kernel(double x, const FamilyParams& p) {
  detail::require_inside_region(p, "branch_cut_kernel");
  if (!(x > 0.0)) throw DomainError("branch_cut_kernel: x must be positive");
  const Complex w = std::polar(std::pow(x, p.t), p.t * kPi);
  return inv_p_alpha(w, p.alpha).imag();
}

/// g(lambda) = -(1/pi) int_0^inf kernel(x) e^{-lambda x} dx.
inline InverseValue branch_cut_invert_detail(double lambda, const FamilyParams& p,
                                             const QuadratureSpec& q = {}) {
  detail::require_inside_region(p, "branch_cut_invert");
  if (!(lambda >= 0.0)) throw DomainError("branch_cut_invert: lambda must be >= 0");
  if (lambda == 0.0 && !(p.t > 0.5)) {
    throw DomainError("branch_cut_invert: at lambda = 0 the kernel needs t > 1/2");
  }
  QuadratureSpec inner = q;
  inner.abs_tol = q.abs_tol * kPi;
  const QuadResult r = integrate_half_line(
      [&](double x) {
        const double weight = std::exp(-lambda * x);
        return weight == 0.0 ? 0.0 : branch_cut_kernel(x, p) * weight;
      },
      inner);
  return {-r.value / kPi, r.error / kPi};
}

inline double branch_cut_invert(double lambda, const FamilyParams& p,
                                const QuadratureSpec& q = {}) {
  return branch_cut_invert_detail(lambda, p, q).value;
}

/// int_0^inf kernel(x) dx; vanishes for every 0 < t < 1 - alpha with t > 1/2.
inline QuadResult kernel_total_integral(const FamilyParams& p,
                                        const QuadratureSpec& q = {}) {
  detail::require_inside_region(p, "kernel_total_integral");
  if (!(p.t > 0.5)) {
    throw DomainError("kernel_total_integral: kernel is integrable only for t > 1/2");
  }
  return integrate_half_line([&](double x) { return branch_cut_kernel(x, p); }, q);
}

// ---------------------------------------------------------------------------

/// Evaluates g on a grid. For Bromwich the error of each point is the max of
/// the quadrature estimate and the change when c moves by 1/lambda.
inline InversionResult invert_grid(const FamilyParams& p,
                                   const std::vector<double>& lambdas,
                                   InversionMethod method,
                                   const QuadratureSpec& q = {}) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1]))) {
      throw DomainError("invert_grid: lambdas must be positive and strictly increasing");
    }
  }
  InversionResult out;
  out.lambdas = lambdas;
  out.method = method;
  out.values.assign(lambdas.size(), 0.0);
  out.errors.assign(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const double lambda = lambdas[i];
    switch (method) {
      case InversionMethod::Bromwich: {
        const double c = default_abscissa(p, lambda);
        const InverseValue a = bromwich_invert_detail(p, c, lambda, q);
        const InverseValue b =
            bromwich_invert_detail(p, c + std::min(1.0, 1.0 / lambda), lambda, q);
        out.values[i] = a.value;
        out.errors[i] = std::max({a.error, b.error, std::abs(a.value - b.value)});
        break;
      }
      case InversionMethod::BranchCut: {
        const InverseValue r = branch_cut_invert_detail(lambda, p, q);
        out.values[i] = r.value;
        out.errors[i] = r.error;
        break;
      }
      case InversionMethod::ClosedForm: {
        if (p.t != 1.0) {
          throw DomainError("invert_grid: closed form exists only for t = 1");
        }
        out.values[i] = closed_form_inverse_t1(lambda, p.alpha);
        break;
      }
    }
  });
  out.est_error = out.errors.empty()
                      ? 0.0
                      : *std::max_element(out.errors.begin(), out.errors.end());
  return out;
}

}  // namespace hcmlab
