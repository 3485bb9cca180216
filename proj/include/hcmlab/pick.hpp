#pragma once

// The Pick criterion for f_{alpha,t}: h(z) = Im(f'(z)/f(z)) on the upper
// half-plane, its closed form on the negative axis, a scan for the infimum of
// h, the data behind the two horizontal-line plots of h, and a probe of the
// Stieltjes inversion of f_{alpha,1-alpha}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hcmlab/errors.hpp"
#include "hcmlab/monotone.hpp"
#include "hcmlab/parallel.hpp"
#include "hcmlab/specfun.hpp"

namespace hcmlab {

struct HalfPlaneScan {
  std::pair<double, double> re_range{-50.0, 50.0};
  std::vector<double> im_levels{0.01, 0.1, 1.0, 10.0};
  int n_per_level = 2000;
  bool include_negative_axis = true;
  /// rho-grid for the negative axis, x = -rho^{1/t}.
  ScanGrid rho_grid = ScanGrid::geometric(1e-4, 1e4, 2001);

  void validate() const {
    if (!(re_range.first < re_range.second) || !std::isfinite(re_range.first) ||
        !std::isfinite(re_range.second)) {
      throw DomainError("HalfPlaneScan: re_range must be finite with lo < hi");
    }
    if (im_levels.empty()) throw DomainError("HalfPlaneScan: needs at least one level");
    for (double y : im_levels) {
      if (!(y > 0.0) || !std::isfinite(y)) {
        throw DomainError("HalfPlaneScan: im_levels must be positive and finite");
      }
    }
    if (n_per_level < 2) throw DomainError("HalfPlaneScan: n_per_level must be >= 2");
    if (include_negative_axis) rho_grid.validate();
  }
};

namespace detail {
// -2t Im(z^{t-1} (z^t + cos pi alpha) / P_alpha(z^t)), with z^{t-1} formed
// as z^t / z.
inline double h_formula(Complex z, const FamilyParams& p) {
  const Complex w = principal_pow(z, p.t);
  const Complex inv = inv_p_alpha(w, p.alpha);
  return -2.0 * p.t * ((w / z) * (w + p.cos_pi_alpha()) * inv).imag();
}
}  // namespace detail

/// h(z) = Im(f'(z) / f(z)) for Im z > 0, principal-branch powers.
inline double h_value(Complex z, const FamilyParams& p) {
  if (!(z.imag() > 0.0)) throw DomainError("h_value: needs Im z > 0");
  if (!(p.t > 0.0)) throw DomainError("h_value: needs t > 0");
  return detail::h_formula(z, p);
}

/// Boundary value of h on the upper side of the negative axis at -x.
inline double h_upper_boundary(double x, const FamilyParams& p) {
  if (!(x > 0.0)) throw DomainError("h_upper_boundary: needs x > 0");
  return detail::h_formula(std::polar(x, kPi), p);
}

/// Closed form of h at -x, x = rho^{1/(1-alpha-eps)}:
/// A cos(pi a) sin((a+e) pi) [(rho - r)^2 + 1 - r^2], r = cos((a+e) pi) / cos(pi a),
/// A = 2 (1-a-e) rho^{-(a+e)/(1-a-e)} / |rho^2 e^{2i(1-a-e)pi} + 2 cos(pi a) rho e^{i(1-a-e)pi} + 1|^2.
inline double h_negative_axis(double rho, const FamilyParams& p) {
  if (!(rho > 0.0)) throw DomainError("h_negative_axis: needs rho > 0");
  if (!(p.alpha > 0.0) || !(p.eps() > 0.0)) {
    throw DomainError("h_negative_axis: needs alpha > 0 and eps > 0");
  }
  const double ae = p.alpha + p.eps();  // = 1 - t
  if (!(ae < 0.5)) {
    throw DomainError("h_negative_axis: needs alpha + eps < 1/2");
  }
  const double t = p.t;
  const double c = p.cos_pi_alpha();
  const Complex e1 = std::polar(1.0, t * kPi);
  const double denom = std::norm(rho * rho * e1 * e1 + 2.0 * c * rho * e1 + 1.0);
  const double a_factor = 2.0 * t * std::pow(rho, -ae / t) / denom;
  const double r = std::cos(ae * kPi) / c;
  return a_factor * c * std::sin(ae * kPi) * ((rho - r) * (rho - r) + 1.0 - r * r);
}

// ---------------------------------------------------------------------------

namespace detail {

// Locates a zero of P_alpha(z^t) in the upper half-plane: coarse polar grid
// for the smallest |P(z^t)| / (1 + |z^t|^2), then Newton on z.
inline Complex locate_upper_pole(const FamilyParams& p) {
  auto residual = [&](Complex z) { return p_alpha(principal_pow(z, p.t), p.alpha); };
  Complex best = 1.0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 97; ++i) {
    const double r = std::exp(std::log(0.25) + i * std::log(16.0) / 96.0);
    for (int j = 1; j < 720; ++j) {
      const Complex z = std::polar(r, kPi * j / 720.0);
      const Complex w = principal_pow(z, p.t);
      const double v = std::abs(p_alpha(w, p.alpha)) / (1.0 + std::norm(w));
      if (v < best_value) {
        best_value = v;
        best = z;
      }
    }
  }
  Complex z = best;
  for (int it = 0; it < 60; ++it) {
    const Complex w = principal_pow(z, p.t);
    const Complex derivative = (2.0 * w + 2.0 * p.cos_pi_alpha()) * p.t * w / z;
    const Complex step = residual(z) / derivative;
    z -= step;
    if (std::abs(step) <= 1e-15 * std::abs(z)) break;
  }
  return z;
}

}  // namespace detail

/// PASS if f_{alpha,t} has no zero of its denominator off the cut and the
/// scanned minimum of h is >= -tol. Poles give an immediate FAIL whose
/// witness {Re, Im} is the upper pole found by Newton iteration; a negative
/// h gives the witness {Re z, Im z} (Im z = 0 on the negative axis).
/// extremum = the scanned minimum m_hat when the scan runs.
inline Verdict ggc_pick_scan(const FamilyParams& p, const HalfPlaneScan& scan = {},
                             double tol = 1e-6) {
  scan.validate();
  Verdict v;
  v.tolerance = tol;
  if (!(p.alpha > 0.0 && p.alpha < 1.0) || !(p.t > 0.0)) {
    throw DomainError("ggc_pick_scan: needs alpha in (0,1) and t > 0");
  }
  const std::vector<Complex> poles = pole_locations(p);
  if (!poles.empty()) {
    const Complex z = detail::locate_upper_pole(p);
    v.status = Status::Fail;
    v.witness = Witness{{z.real(), z.imag()}, std::abs(p_alpha(principal_pow(z, p.t), p.alpha))};
    std::ostringstream d;
    d << poles.size() << " zero(s) of P_alpha(z^t) off the cut; f is not analytic on "
      << "C minus (-inf, 0]. Upper zero located at " << z.real() << (z.imag() < 0 ? "" : "+")
      << z.imag() << "i";
    v.detail = d.str();
    v.grid = "pole check";
    return v;
  }

  struct Sample {
    double value = std::numeric_limits<double>::infinity();
    Complex z;
  };
  const std::size_t per_level = static_cast<std::size_t>(scan.n_per_level);
  const std::size_t line_count = scan.im_levels.size() * per_level;
  const std::vector<double> rhos =
      scan.include_negative_axis ? scan.rho_grid.points() : std::vector<double>{};
  std::vector<Sample> samples(line_count + rhos.size());
  const auto [re_lo, re_hi] = scan.re_range;
  parallel_for(samples.size(), [&](std::size_t i) {
    if (i < line_count) {
      const double y = scan.im_levels[i / per_level];
      const double s = static_cast<double>(i % per_level) / (per_level - 1);
      const Complex z(re_lo + s * (re_hi - re_lo), y);
      samples[i] = {h_value(z, p), z};
    } else {
      const double x = std::pow(rhos[i - line_count], 1.0 / p.t);
      samples[i] = {h_upper_boundary(x, p), Complex(-x, 0.0)};
    }
  });
  const auto worst = std::min_element(
      samples.begin(), samples.end(),
      [](const Sample& a, const Sample& b) { return a.value < b.value; });

  std::ostringstream g;
  g << "Re [" << re_lo << ", " << re_hi << "] x Im {";
  for (std::size_t i = 0; i < scan.im_levels.size(); ++i) {
    g << (i ? ", " : "") << scan.im_levels[i];
  }
  g << "}, " << scan.n_per_level << " points per level";
  if (scan.include_negative_axis) g << "; negative axis rho " << scan.rho_grid.describe();
  v.grid = g.str();
  v.extremum = worst->value;

  std::ostringstream d;
  d << "m_hat = " << worst->value << " at z = " << worst->z.real()
    << (worst->z.imag() < 0 ? "" : "+") << worst->z.imag() << "i";
  if (worst->value >= -tol) {
    v.status = Status::Pass;
    d << "; no negative h beyond tolerance (numerical evidence for m = 0)";
  } else {
    v.status = Status::Fail;
    v.witness = Witness{{worst->z.real(), worst->z.imag()}, worst->value};
    d << "; h < 0, so the Pick condition fails";
  }
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------------------

struct Figure2Point {
  double re = 0.0;
  double h = 0.0;
};

/// h sampled along Im z = im_level at the points of re_grid.
inline std::vector<Figure2Point> figure2_data(const FamilyParams& p, double im_level,
                                              const ScanGrid& re_grid) {
  if (!(im_level > 0.0)) throw DomainError("figure2_data: im_level must be > 0");
  const std::vector<double> xs = re_grid.points();
  std::vector<Figure2Point> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    out[i] = {xs[i], h_value(Complex(xs[i], im_level), p)};
  });
  return out;
}

/// CSV with header `re,h`, 15 significant digits.
inline void write_figure2_csv(std::ostream& os, const std::vector<Figure2Point>& data) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os.precision(15);
  os << "re,h\n";
  for (const auto& row : data) os << row.re << ',' << row.h << '\n';
  os.flags(flags);
  os.precision(precision);
}

// ---------------------------------------------------------------------------

struct StieltjesProbeResult {
  std::vector<double> eps;
  std::vector<double> minima;  // min over x of -(1/pi) Im f(-x + i eps)
  std::vector<double> argmin;
};

/// Probes whether f_alpha = f_{alpha,1-alpha} is a Stieltjes transform by
/// the inversion formula: the density -(1/pi) Im f(-x + i eps) must be
/// nonnegative in the limit eps -> 0. FAIL (with witness {x, eps}) means a
/// value below -tol was found at every eps of the sequence, so f_alpha is
/// not a Stieltjes transform; PASS means none was found at any eps.
/// Mixed signs across the sequence give INCONCLUSIVE.
inline Verdict stieltjes_probe(double alpha, const ScanGrid& x_grid,
                               const std::vector<double>& eps_seq = {1e-2, 1e-3, 1e-4},
                               double tol = 1e-6,
                               StieltjesProbeResult* trace = nullptr) {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw DomainError("stieltjes_probe: alpha must lie in (0, 1/2]");
  }
  if (eps_seq.empty()) throw DomainError("stieltjes_probe: eps sequence is empty");
  for (double e : eps_seq) {
    if (!(e > 0.0)) throw DomainError("stieltjes_probe: eps must be > 0");
  }
  const FamilyParams p(alpha, 1.0 - alpha);
  const std::vector<double> xs = x_grid.points();
  StieltjesProbeResult result;
  for (double e : eps_seq) {
    std::vector<double> m(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      m[i] = -f_family(Complex(-xs[i], e), p).imag() / kPi;
    });
    const auto it = std::min_element(m.begin(), m.end());
    result.eps.push_back(e);
    result.minima.push_back(*it);
    result.argmin.push_back(xs[static_cast<std::size_t>(it - m.begin())]);
  }

  Verdict v;
  v.tolerance = tol;
  v.grid = "x " + x_grid.describe();
  std::size_t negative = 0;
  for (double m : result.minima) negative += m < -tol ? 1 : 0;
  const std::size_t last = result.minima.size() - 1;
  v.extremum = *std::min_element(result.minima.begin(), result.minima.end());

  // Smallest index from which the location of the minimum stays put (1%).
  std::size_t stable = last;
  while (stable > 0 &&
         std::abs(result.argmin[stable - 1] - result.argmin[last]) <= 0.01 * result.argmin[last]) {
    --stable;
  }
  const auto most_negative = std::min_element(result.minima.begin(), result.minima.end());
  std::ostringstream d;
  d << "min density by eps:";
  for (std::size_t i = 0; i < result.eps.size(); ++i) {
    d << " [" << result.eps[i] << ": " << result.minima[i] << " at x = " << result.argmin[i]
      << "]";
  }
  d << "; most negative " << *most_negative << "; location of the minimum stable from eps = "
    << result.eps[stable];
  if (negative == result.minima.size()) {
    v.status = Status::Fail;
    v.witness = Witness{{result.argmin[last], result.eps[last]}, result.minima[last]};
    d << "; negative density: not a Stieltjes transform";
  } else if (negative == 0) {
    v.status = Status::Pass;
    d << "; no negative density found";
  } else {
    v.status = Status::Inconclusive;
    d << "; sign of the minimum depends on eps";
  }
  v.detail = d.str();
  if (trace) *trace = std::move(result);
  return v;
}

}  // namespace hcmlab
