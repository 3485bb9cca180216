#pragma once

// Quadrature shared by the Laplace, density and Bessel-product code:
//  * adaptive Gauss-Kronrod (7/15) on finite intervals,
//  * tanh-sinh on finite intervals with endpoint singularities,
//  * exp-sinh (x = exp(pi/2 sinh u)) on (0, inf), which absorbs both
//    algebraic endpoint singularities at 0 and algebraic tails at infinity.

#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "hcmlab/errors.hpp"

namespace hcmlab {

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
  /// Outward sweeps of the double-exponential rules stop after a run of
  /// terms below this fraction of the running total.
  double truncation_threshold = 1e-18;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      throw DomainError("QuadratureSpec: tolerances must be positive");
    }
    if (max_subdivisions < 1) {
      throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    }
    if (!(truncation_threshold > 0.0)) {
      throw DomainError("QuadratureSpec: truncation_threshold must be > 0");
    }
  }

  double target(double value) const {
    return std::max(abs_tol, rel_tol * std::abs(value));
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights on the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 7/15 on [a, b]. Never throws on budget exhaustion;
/// check QuadResult::converged.
template <class F>
QuadResult gauss_kronrod_unchecked(F&& f, double a, double b,
                                   const QuadratureSpec& q) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  long evaluations = 15;
  int segments = 1;
  while (error > q.target(total)) {
    if (segments >= q.max_subdivisions) {
      out.converged = false;
      break;
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval at roundoff width
      heap.push(worst);
      out.converged = false;
      break;
    }
    const detail::Segment left = detail::gk15(f, worst.a, mid);
    const detail::Segment right = detail::gk15(f, mid, worst.b);
    evaluations += 30;
    ++segments;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Resum to shed the drift of the incremental updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = error;
  out.evaluations = evaluations;
  return out;
}

template <class F>
QuadResult gauss_kronrod(F&& f, double a, double b, const QuadratureSpec& q) {
  QuadResult r = gauss_kronrod_unchecked(f, a, b, q);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "gauss_kronrod: tolerance not met on [" << a << ", " << b
        << "] within " << q.max_subdivisions << " subdivisions (error "
        << r.error << ")";
    throw NonConvergence(msg.str());
  }
  return r;
}

namespace detail {

// Trapezoidal sum of g(u) over u = k h, sweeping outward from 0 in both
// directions until a run of negligible terms or |u| > u_max.
template <class G>
double de_level(G& g, double h, double u_max, double threshold,
                long& evaluations) {
  double sum = g(0.0);
  ++evaluations;
  for (int direction : {1, -1}) {
    int quiet = 0;
    for (int k = 1; k * h <= u_max; ++k) {
      const double term = g(direction * k * h);
      ++evaluations;
      if (!std::isfinite(term)) {
        throw NonConvergence("double-exponential rule: non-finite integrand");
      }
      sum += term;
      quiet = std::abs(term) <= threshold * std::abs(sum) ? quiet + 1 : 0;
      if (quiet >= 6) break;
    }
  }
  return h * sum;
}

template <class G>
QuadResult de_refine(G& g, double u_max, const QuadratureSpec& q,
                     const char* name) {
  QuadResult out;
  double h = 0.5;
  double previous = de_level(g, h, u_max, q.truncation_threshold, out.evaluations);
  constexpr int kMaxLevels = 11;
  for (int level = 1; level <= kMaxLevels; ++level) {
    h *= 0.5;
    const double current =
        de_level(g, h, u_max, q.truncation_threshold, out.evaluations);
    const double diff = std::abs(current - previous);
    previous = current;
    // Each halving roughly squares the error, so the last difference bounds
    // the error of the previous level and overstates that of the current one.
    if (level >= 2 && diff <= q.target(current)) {
      out.value = current;
      out.error = diff;
      return out;
    }
    out.value = current;
    out.error = diff;
  }
  out.converged = false;
  std::ostringstream msg;
  msg << name << ": no convergence after " << kMaxLevels
      << " step halvings (last change " << out.error << ")";
  throw NonConvergence(msg.str());
}

}  // namespace detail

/// int_0^inf f(x) dx by the exp-sinh substitution x = exp(pi/2 sinh u).
template <class F>
QuadResult integrate_half_line(F&& f, const QuadratureSpec& q) {
  q.validate();
  constexpr double kHalfPi = 1.5707963267948966;
  auto g = [&](double u) {
    const double s = kHalfPi * std::sinh(u);
    const double x = std::exp(s);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double value = f(x);
    if (value == 0.0) return 0.0;
    return value * x * kHalfPi * std::cosh(u);
  };
  // exp(pi/2 sinh 6.5) ~ e^{522}: inside double range with room for x^{1.3}.
  return detail::de_refine(g, 6.5, q, "integrate_half_line");
}

/// int_a^b f(x) dx by tanh-sinh. f receives points strictly inside (a, b);
/// points near an endpoint are formed as endpoint + distance so that
/// integrable endpoint singularities are resolved.
template <class F>
QuadResult integrate_tanh_sinh(F&& f, double a, double b,
                               const QuadratureSpec& q) {
  q.validate();
  if (a == b) return {};
  if (!(b > a)) {
    QuadResult r = integrate_tanh_sinh(f, b, a, q);
    r.value = -r.value;
    return r;
  }
  constexpr double kHalfPi = 1.5707963267948966;
  const double half = 0.5 * (b - a);
  auto g = [&](double u) {
    const double s = kHalfPi * std::sinh(u);
    const double e = std::exp(-2.0 * std::abs(s));
    // distance from the nearer endpoint: half * (1 - tanh|s|)
    const double dist = half * 2.0 * e / (1.0 + e);
    if (dist == 0.0) return 0.0;
    const double x = s < 0 ? a + dist : b - dist;
    if (!(x > a && x < b)) return 0.0;
    const double ch = std::cosh(s);
    const double weight = half * kHalfPi * std::cosh(u) / (ch * ch);
    if (weight == 0.0) return 0.0;
    return f(x) * weight;
  };
  return detail::de_refine(g, 4.0, q, "integrate_tanh_sinh");
}

}  // namespace hcmlab
