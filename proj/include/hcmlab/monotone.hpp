#pragma once

// Numerical complete-monotonicity (CM) and hyperbolic complete-monotonicity
// (HCM) predicates, the sign-change lemma, and the bisection estimate of the
// critical exponent t_alpha.
//
// Every check is a necessary-condition battery: FAIL comes with a certified
// negative value, PASS only says nothing negative was found on the grids
// that were scanned.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "hcmlab/errors.hpp"
#include "hcmlab/laplace.hpp"
#include "hcmlab/parallel.hpp"
#include "hcmlab/quadrature.hpp"
#include "hcmlab/specfun.hpp"

namespace hcmlab {

enum class Status { Pass, Fail, Inconclusive };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

struct Witness {
  std::vector<double> point;
  double value = 0.0;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<Witness> witness;
  double tolerance = 0.0;
  std::string detail;
  std::string grid;                // grids actually scanned
  std::optional<double> extremum;  // most adverse value seen, in the units of the test

  bool pass() const { return status == Status::Pass; }
  bool fail() const { return status == Status::Fail; }
};

// ---------------------------------------------------------------------------

struct ScanGrid {
  enum class Spacing { Geometric, Linear };

  double lo = 1.0;
  double hi = 2.0;
  int n = 2;
  Spacing spacing = Spacing::Geometric;

  static ScanGrid geometric(double lo, double hi, int n) {
    return {lo, hi, n, Spacing::Geometric};
  }
  static ScanGrid linear(double lo, double hi, int n) {
    return {lo, hi, n, Spacing::Linear};
  }

  /// Geometric grids need 0 < lo; linear grids (used for Re z) only lo < hi.
  void validate() const {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw DomainError("ScanGrid: needs finite lo < hi");
    }
    if (spacing == Spacing::Geometric && !(lo > 0.0)) {
      throw DomainError("ScanGrid: geometric grid needs lo > 0");
    }
    if (n < 2) throw DomainError("ScanGrid: needs n >= 2");
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / (n - 1);
      x[i] = spacing == Spacing::Geometric
                 ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo)))
                 : lo + s * (hi - lo);
    }
    x.front() = lo;
    x.back() = hi;
    return x;
  }

  /// Same range with (n - 1) * factor + 1 points, containing the old ones.
  ScanGrid refined(int factor) const {
    return {lo, hi, (n - 1) * factor + 1, spacing};
  }

  std::string describe() const {
    std::ostringstream s;
    s << (spacing == Spacing::Geometric ? "geometric" : "linear") << "[" << lo
      << ", " << hi << "] n=" << n;
    return s.str();
  }
};

// ---------------------------------------------------------------------------
// CM by inversion

namespace detail {

// Golden-section refinement of a local minimum of g bracketed by [a, b].
template <class G>
std::pair<double, double> golden_minimum(G&& g, double a, double b, int iterations) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int i = 0; i < iterations; ++i) {
    if (g1 < g2) {
      b = x2; x2 = x1; g2 = g1;
      x1 = b - r * (b - a); g1 = g(x1);
    } else {
      a = x1; x1 = x2; g1 = g2;
      x2 = a + r * (b - a); g2 = g(x2);
    }
  }
  return g1 < g2 ? std::make_pair(x1, g1) : std::make_pair(x2, g2);
}

}  // namespace detail

/// PASS if g(lambda) >= -tol * max(1, |g|_inf) at every grid point, where g
/// is the Bromwich inverse of f_{alpha,t}. A FAIL witness is the most
/// negative grid point, then polished by a golden-section search between
/// its neighbours. Inversion errors are reported as INCONCLUSIVE.
inline Verdict cm_check_by_inversion(const FamilyParams& p, const ScanGrid& lambda_grid,
                                     double tol = 1e-12, const QuadratureSpec& q = {}) {
  Verdict v;
  v.tolerance = tol;
  v.grid = "lambda " + lambda_grid.describe();
  const std::vector<double> lambdas = lambda_grid.points();
  InversionResult r;
  try {
    r = invert_grid(p, lambdas, InversionMethod::Bromwich, q);
  } catch (const std::exception& e) {
    v.status = Status::Inconclusive;
    v.detail = std::string("inversion failed: ") + e.what();
    return v;
  }
  double scale = 1.0;
  for (double g : r.values) scale = std::max(scale, std::abs(g));
  const auto worst = std::min_element(r.values.begin(), r.values.end());
  const std::size_t i = static_cast<std::size_t>(worst - r.values.begin());
  v.extremum = *worst / scale;

  if (*worst >= -tol * scale) {
    v.status = Status::Pass;
    std::ostringstream d;
    d << "no value of g below -tol*max(1,|g|) on the grid (min g = " << *worst
      << ", max error estimate " << r.est_error
      << "); evidence for CM, not a proof";
    v.detail = d.str();
    return v;
  }
  if (*worst + r.errors[i] >= -tol * scale) {
    v.status = Status::Inconclusive;
    std::ostringstream d;
    d << "g(" << lambdas[i] << ") = " << *worst << " is negative only within its error "
      << r.errors[i];
    v.detail = d.str();
    return v;
  }

  Witness w{{lambdas[i]}, *worst};
  if (i > 0 && i + 1 < lambdas.size()) {
    try {
      auto g = [&](double lambda) { return bromwich_invert(p, lambda, q); };
      const auto [lambda_star, g_star] =
          detail::golden_minimum(g, lambdas[i - 1], lambdas[i + 1], 40);
      if (g_star < w.value) w = Witness{{lambda_star}, g_star};
    } catch (const std::exception&) {
      // keep the grid witness
    }
  }
  v.status = Status::Fail;
  v.witness = w;
  v.extremum = w.value / scale;
  std::ostringstream d;
  d << "g(" << w.point[0] << ") = " << w.value << " < -tol*max(1,|g|) = " << -tol * scale;
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------------------
// CM by finite differences

/// Forward differences (-1)^k Delta_h^k f(x) for k <= order, h = s * x for
/// each s in steps, at every grid point. A difference below -tol * f(x)
/// fails. Nonnegative differences at every h are necessary for CM.
template <class F>
Verdict cm_check_by_differences(F&& f, const ScanGrid& grid, int order = 8,
                                const std::vector<double>& steps = {0.05, 0.2, 1.0},
                                double tol = 1e-9) {
  if (order < 1) throw DomainError("cm_check_by_differences: order must be >= 1");
  for (double s : steps) {
    if (!(s > 0.0)) throw DomainError("cm_check_by_differences: steps must be > 0");
  }
  const std::vector<double> xs = grid.points();
  Verdict v;
  v.tolerance = tol;
  {
    std::ostringstream g;
    g << "x " << grid.describe() << ", order " << order << ", relative steps {";
    for (std::size_t i = 0; i < steps.size(); ++i) g << (i ? ", " : "") << steps[i];
    g << "}";
    v.grid = g.str();
  }

  struct Local {
    double value = std::numeric_limits<double>::infinity();
    Witness witness;
    std::string error;
  };
  std::vector<Local> local(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    Local& out = local[i];
    try {
      const double fx = f(x);
      if (!(fx > 0.0) || !std::isfinite(fx)) {
        out.error = "f is not positive and finite at x = " + std::to_string(x);
        return;
      }
      std::vector<double> d(static_cast<std::size_t>(order) + 1);
      for (double s : steps) {
        const double h = s * x;
        for (int j = 0; j <= order; ++j) d[j] = f(x + j * h);
        // After pass k, d[0] holds Delta_h^k f(x).
        for (int k = 1; k <= order; ++k) {
          for (int j = 0; j + k <= order; ++j) d[j] = d[j + 1] - d[j];
          const double signed_diff = (k % 2 == 0 ? d[0] : -d[0]) / fx;
          if (signed_diff < out.value) {
            out.value = signed_diff;
            out.witness = Witness{{x, h, static_cast<double>(k)}, signed_diff};
          }
        }
      }
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  double worst = std::numeric_limits<double>::infinity();
  const Local* worst_local = nullptr;
  for (const Local& l : local) {
    if (!l.error.empty()) {
      v.status = Status::Inconclusive;
      v.detail = "evaluation failed: " + l.error;
      return v;
    }
    if (l.value < worst) {
      worst = l.value;
      worst_local = &l;
    }
  }
  v.extremum = worst;
  if (worst >= -tol) {
    v.status = Status::Pass;
    std::ostringstream d;
    d << "all alternating differences >= -tol*f(x) (min " << worst
      << "); necessary condition only, evidence for CM";
    v.detail = d.str();
  } else {
    v.status = Status::Fail;
    v.witness = worst_local->witness;
    std::ostringstream d;
    d << "(-1)^k Delta_h^k f(x) / f(x) = " << worst << " at x = "
      << worst_local->witness.point[0] << ", h = " << worst_local->witness.point[1]
      << ", k = " << worst_local->witness.point[2];
    v.detail = d.str();
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sign-change lemma

/// Checks the lemma "h < 0 on (0, x0), h > 0 on (x0, inf) and int h <= 0
/// imply int h(x) e^{-lambda x} dx <= 0 for all lambda >= 0".
///
/// The hypothesis is checked on a geometric scan of (0, inf); more than one
/// sign change, or a change from + to -, throws HypothesisViolated. The
/// change is located by bisection inside x0_bracket when it lies there.
/// Witness point on FAIL: {lambda}.
template <class H>
Verdict sign_change_lemma_check(H&& h, std::pair<double, double> x0_bracket,
                                const QuadratureSpec& q = {}, double tol = 1e-10,
                                const ScanGrid& scan = ScanGrid::geometric(1e-6, 1e6, 4001),
                                const ScanGrid& lambda_grid = ScanGrid::geometric(1e-3, 1e3, 41)) {
  const std::vector<double> xs = scan.points();
  std::vector<double> hs(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { hs[i] = h(xs[i]); });

  int changes = 0;
  int last_sign = 0;
  std::size_t last_index = 0;
  double change_lo = 0.0, change_hi = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int sign = hs[i] > 0.0 ? 1 : (hs[i] < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      ++changes;
      if (sign == -1) {
        throw HypothesisViolated("sign_change_lemma_check: h changes from + to - near x = " +
                                 std::to_string(xs[i]));
      }
      change_lo = xs[last_index];
      change_hi = xs[i];
    }
    last_sign = sign;
    last_index = i;
  }
  if (changes > 1) {
    throw HypothesisViolated("sign_change_lemma_check: " + std::to_string(changes) +
                             " sign changes found on " + scan.describe());
  }

  // Locate x0 by bisection, on the bracket when it straddles the change.
  double x0 = std::numeric_limits<double>::quiet_NaN();
  if (changes == 1) {
    double a = change_lo, b = change_hi;
    auto [ba, bb] = x0_bracket;
    if (ba > 0.0 && bb > ba && h(ba) < 0.0 && h(bb) > 0.0) {
      a = ba;
      b = bb;
    }
    for (int i = 0; i < 200 && b - a > 1e-14 * b; ++i) {
      const double m = 0.5 * (a + b);
      (h(m) < 0.0 ? a : b) = m;
    }
    x0 = 0.5 * (a + b);
  }

  Verdict v;
  v.tolerance = tol;
  v.grid = "scan " + scan.describe() + ", lambda {0} + " + lambda_grid.describe();
  std::vector<double> lambdas = lambda_grid.points();
  lambdas.insert(lambdas.begin(), 0.0);
  std::vector<double> values(lambdas.size());
  std::vector<std::string> errors(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const double lambda = lambdas[i];
    try {
      values[i] = integrate_half_line(
                      [&](double x) {
                        const double w = std::exp(-lambda * x);
                        return w == 0.0 ? 0.0 : h(x) * w;
                      },
                      q)
                      .value;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const std::string& e : errors) {
    if (!e.empty()) {
      v.status = Status::Inconclusive;
      v.detail = "integration failed: " + e;
      return v;
    }
  }
  const auto worst = std::max_element(values.begin(), values.end());
  const std::size_t i = static_cast<std::size_t>(worst - values.begin());
  v.extremum = *worst;
  std::ostringstream d;
  d << "sign changes: " << changes;
  if (changes == 1) d << " at x0 = " << x0;
  d << "; int h = " << values[0] << "; max over lambda of int h e^{-lambda x} = " << *worst;
  if (*worst <= tol) {
    v.status = Status::Pass;
  } else {
    v.status = Status::Fail;
    v.witness = Witness{{lambdas[i]}, *worst};
  }
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------------------
// HCM

/// v >= 1 with v + 1/v = w, for w >= 2.
inline double v_from_w(double w) {
  if (!(w >= 2.0)) throw DomainError("v_from_w: needs w >= 2");
  return 0.5 * (w + std::sqrt((w - 2.0) * (w + 2.0)));
}

/// The algebraic rewriting of f_{alpha,t}(uv) f_{alpha,t}(u/v) as
/// 1 / (u^{4t} + c^2 u^{2t} + 1 + c (u^t + u^{3t}) w_t + u^{2t} w_{2t}),
/// c = 2 cos(pi alpha), w_a = v^a + v^{-a}.
inline double hcm_product_rewrite(const FamilyParams& p, double u, double w) {
  if (!(u > 0.0)) throw DomainError("hcm_product_rewrite: needs u > 0");
  const double v = v_from_w(w);
  const double c = 2.0 * p.cos_pi_alpha();
  const double ut = std::pow(u, p.t);
  const double w_t = std::pow(v, p.t) + std::pow(v, -p.t);
  const double w_2t = std::pow(v, 2.0 * p.t) + std::pow(v, -2.0 * p.t);
  const double u2t = ut * ut;
  return 1.0 / (u2t * u2t + c * c * u2t + 1.0 + c * (ut + u2t * ut) * w_t + u2t * w_2t);
}

struct HcmOptions {
  std::vector<double> steps = {0.05, 0.2, 1.0};
  /// Taylor battery, run when f accepts complex arguments: signs of the
  /// Taylor coefficients of g_u around each centre w0, from a discrete
  /// Cauchy integral on the circle of radius 0.95 (w0 - 2).
  bool taylor = true;
  std::vector<double> taylor_centers = {3.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  int taylor_order = 160;
  int taylor_nodes = 2048;  // power of two
  double taylor_tol = 1e-13;
};

namespace detail {

// In-place iterative radix-2 FFT, forward sign convention e^{-2 pi i jk/N}.
inline void fft(std::vector<Complex>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw DomainError("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * kPi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex w = std::polar(1.0, angle * static_cast<double>(k));
        const Complex even = a[start + k];
        const Complex odd = w * a[start + k + len / 2];
        a[start + k] = even + odd;
        a[start + k + len / 2] = even - odd;
      }
    }
  }
}

// Worst normalized (-1)^n a_n r^n / max|g| over n <= order, with its n.
template <class G>
std::pair<double, int> taylor_sign_scan(G&& g, double w0, double radius, int nodes,
                                        int order) {
  std::vector<Complex> values(static_cast<std::size_t>(nodes));
  double peak = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Complex w = w0 + std::polar(radius, 2.0 * kPi * j / nodes);
    values[j] = g(w);
    peak = std::max(peak, std::abs(values[j]));
  }
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw NonConvergence("taylor battery: non-finite values on the contour");
  }
  fft(values);
  double worst = std::numeric_limits<double>::infinity();
  int worst_n = 0;
  for (int n = 0; n <= std::min(order, nodes / 2); ++n) {
    const double coef = values[n].real() / nodes;
    const double signed_coef = (n % 2 == 0 ? coef : -coef) / peak;
    if (signed_coef < worst) {
      worst = signed_coef;
      worst_n = n;
    }
  }
  return {worst, worst_n};
}

}  // namespace detail

/// For each u, g_u(w) = f(uv) f(u/v) with v = (w + sqrt(w^2 - 4)) / 2 must be
/// CM in w > 2. Runs cm_check_by_differences on w_grid for every u, and, if f
/// accepts std::complex<double>, the Taylor battery of HcmOptions. FAIL
/// witness: {u, w, h, k} from the differences or {u, w0, n} from the Taylor
/// coefficients.
template <class F>
Verdict hcm_check(F&& f, const ScanGrid& u_grid, const ScanGrid& w_grid, int order = 8,
                  double tol = 1e-9, const HcmOptions& options = {}) {
  if (!(w_grid.lo > 2.0)) throw DomainError("hcm_check: w_grid.lo must exceed 2");
  const std::vector<double> us = u_grid.points();
  constexpr bool kComplex = std::is_invocable_v<F&, Complex>;
  const bool taylor = kComplex && options.taylor;

  Verdict v;
  v.tolerance = tol;
  v.grid = "u " + u_grid.describe() + ", w " + w_grid.describe() + ", order " +
           std::to_string(order);
  if (taylor) {
    std::ostringstream g;
    g << "; Taylor centres {";
    for (std::size_t i = 0; i < options.taylor_centers.size(); ++i) {
      g << (i ? ", " : "") << options.taylor_centers[i];
    }
    g << "} up to order " << options.taylor_order << ", tol " << options.taylor_tol;
    v.grid += g.str();
  }

  struct Local {
    Verdict diff;
    double taylor_worst = std::numeric_limits<double>::infinity();
    Witness taylor_witness;
    std::string error;
  };
  std::vector<Local> local(us.size());
  parallel_for(us.size(), [&](std::size_t i) {
    const double u = us[i];
    Local& out = local[i];
    try {
      auto g = [&](double w) {
        const double vv = v_from_w(w);
        return static_cast<double>(f(u * vv)) * static_cast<double>(f(u / vv));
      };
      out.diff = cm_check_by_differences(g, w_grid, order, options.steps, tol);
      if constexpr (kComplex) {
        if (taylor) {
          auto gc = [&](Complex w) {
            const Complex vv = 0.5 * (w + w * std::sqrt(1.0 - 4.0 / (w * w)));
            return Complex(f(u * vv)) * Complex(f(u / vv));
          };
          for (double w0 : options.taylor_centers) {
            if (!(w0 > 2.0)) throw DomainError("hcm_check: Taylor centres must exceed 2");
            const auto [worst, n] = detail::taylor_sign_scan(
                gc, w0, 0.95 * (w0 - 2.0), options.taylor_nodes, options.taylor_order);
            if (worst < out.taylor_worst) {
              out.taylor_worst = worst;
              out.taylor_witness = Witness{{u, w0, static_cast<double>(n)}, worst};
            }
          }
        }
      }
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  const Local* worst_diff = nullptr;
  const Local* worst_taylor = nullptr;
  double diff_min = std::numeric_limits<double>::infinity();
  for (const Local& l : local) {
    if (!l.error.empty()) {
      v.status = Status::Inconclusive;
      v.detail = "evaluation failed: " + l.error;
      return v;
    }
    if (l.diff.status == Status::Inconclusive) {
      v.status = Status::Inconclusive;
      v.detail = l.diff.detail;
      return v;
    }
    const double e = l.diff.extremum.value_or(0.0);
    if (e < diff_min) {
      diff_min = e;
      worst_diff = &l;
    }
    if (taylor && (!worst_taylor || l.taylor_worst < worst_taylor->taylor_worst)) {
      worst_taylor = &l;
    }
  }
  v.extremum = diff_min;

  std::ostringstream d;
  if (worst_diff && worst_diff->diff.fail()) {
    const Witness& w = *worst_diff->diff.witness;
    const std::size_t idx = static_cast<std::size_t>(worst_diff - local.data());
    v.status = Status::Fail;
    v.witness = Witness{{us[idx], w.point[0], w.point[1], w.point[2]}, w.value};
    d << "difference battery: (-1)^k Delta_h^k g_u(w) / g_u(w) = " << w.value
      << " at u = " << us[idx] << ", w = " << w.point[0] << ", h = " << w.point[1]
      << ", k = " << w.point[2];
  } else if (worst_taylor && worst_taylor->taylor_worst < -options.taylor_tol) {
    const Witness& w = worst_taylor->taylor_witness;
    v.status = Status::Fail;
    v.witness = w;
    v.extremum = w.value;
    d << "Taylor battery: (-1)^n a_n r^n / max|g_u| = " << w.value << " at u = "
      << w.point[0] << ", w0 = " << w.point[1] << ", n = " << w.point[2];
  } else {
    v.status = Status::Pass;
    d << "difference battery min " << diff_min;
    if (worst_taylor) d << ", Taylor battery min " << worst_taylor->taylor_worst;
    d << "; necessary conditions only, evidence for HCM";
  }
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------------------
// Critical exponent

struct CriticalTOptions {
  ScanGrid lambda_grid = ScanGrid::geometric(0.05, 60.0, 96);
  double tol = 1e-12;
  int refine_factor = 4;
  QuadratureSpec quadrature{};
};

struct CriticalTProbe {
  double t = 0.0;
  Status status = Status::Inconclusive;
  bool refined = false;
  std::string detail;
};

struct CriticalTResult {
  Status status = Status::Pass;  // INCONCLUSIVE if a probe was
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::vector<CriticalTProbe> trace;
  std::string detail;
};

namespace detail {

// CM predicate used by the bisection. A PASS whose minimum is negative
// (within tolerance, but beyond the error estimate) is a sign ambiguity: the
// grid is refined and the check repeated; an ambiguity that survives the
// refinement counts as FAIL.
inline CriticalTProbe critical_t_probe(double alpha, double t, const CriticalTOptions& o) {
  CriticalTProbe probe;
  probe.t = t;
  const FamilyParams p(alpha, t);
  auto ambiguous = [&](const Verdict& v) {
    return v.pass() && v.extremum && *v.extremum < -1e-3 * o.tol;
  };
  Verdict v = cm_check_by_inversion(p, o.lambda_grid, o.tol, o.quadrature);
  if (ambiguous(v)) {
    probe.refined = true;
    v = cm_check_by_inversion(p, o.lambda_grid.refined(o.refine_factor), o.tol,
                              o.quadrature);
    if (ambiguous(v)) {
      v.status = Status::Fail;
      v.detail = "sign ambiguity after refinement, counted as FAIL: " + v.detail;
    }
  }
  probe.status = v.status;
  probe.detail = v.detail;
  return probe;
}

}  // namespace detail

/// Bisection for t_alpha on [1 - alpha, 1] with cm_check_by_inversion as the
/// predicate. The returned bracket has PASS at t_lo and FAIL at t_hi. The
/// midpoints are those of [1 - alpha, 1], so a run with a smaller bisect_tol
/// refines the same bracket.
inline CriticalTResult estimate_critical_t(double alpha, double bisect_tol,
                                           const CriticalTOptions& o = {}) {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw DomainError("estimate_critical_t: alpha must lie in (0, 1/2]");
  }
  if (!(bisect_tol > 0.0)) throw DomainError("estimate_critical_t: bisect_tol must be > 0");
  CriticalTResult out;
  out.t_lo = 1.0 - alpha;
  out.t_hi = 1.0;

  auto probe = [&](double t) {
    out.trace.push_back(detail::critical_t_probe(alpha, t, o));
    return out.trace.back().status;
  };
  const Status lo = probe(out.t_lo);
  const Status hi = probe(out.t_hi);
  if (lo != Status::Pass || hi != Status::Fail) {
    out.status = Status::Inconclusive;
    out.detail = "endpoint check failed: expected PASS at t = 1 - alpha and FAIL at t = 1, got " +
                 to_string(lo) + " and " + to_string(hi);
    return out;
  }
  while (out.t_hi - out.t_lo > bisect_tol) {
    const double mid = 0.5 * (out.t_lo + out.t_hi);
    const Status s = probe(mid);
    if (s == Status::Inconclusive) {
      out.status = Status::Inconclusive;
      out.detail = "predicate inconclusive at t = " + std::to_string(mid);
      return out;
    }
    (s == Status::Pass ? out.t_lo : out.t_hi) = mid;
  }
  std::ostringstream d;
  d << "t_alpha in [" << out.t_lo << ", " << out.t_hi << "] on "
    << o.lambda_grid.describe() << "; beta_hat = 1/t_hat = "
    << 2.0 / (out.t_lo + out.t_hi);
  out.detail = d.str();
  return out;
}

}  // namespace hcmlab
