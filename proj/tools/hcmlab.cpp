// hcmlab: command-line front end. Each subcommand prints one JSON report on
// stdout and exits 0 (PASS), 1 (FAIL), 2 (INCONCLUSIVE) or 64 (usage).

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcmlab/hcmlab.hpp"

namespace {

using namespace hcmlab;
using nlohmann::json;

constexpr int kExitUsage = 64;

CLI::Validator open_interval(double lo, double hi) {
  std::ostringstream name;
  name << "(" << lo << ", " << hi << ")";
  return CLI::Validator(
      [lo, hi](std::string& s) -> std::string {
        double v = 0.0;
        try {
          std::size_t pos = 0;
          v = std::stod(s, &pos);
          if (pos != s.size()) return "not a number: " + s;
        } catch (const std::exception&) {
          return "not a number: " + s;
        }
        if (!(v > lo && v < hi)) {
          std::ostringstream msg;
          msg << "value " << s << " not in (" << lo << ", " << hi << ")";
          return msg.str();
        }
        return {};
      },
      name.str());
}

const CLI::Validator kPositive = open_interval(0.0, std::numeric_limits<double>::infinity());
const CLI::Validator kUnitOpen = open_interval(0.0, 1.0);

struct GridFlags {
  double lo, hi;
  int n;
  ScanGrid geometric() const { return ScanGrid::geometric(lo, hi, n); }
};

void add_grid(CLI::App* app, GridFlags& g, const std::string& prefix, const std::string& what,
              const std::string& n_alias = "") {
  app->add_option("--" + prefix + "-min", g.lo, "lower end of the " + what + " grid");
  app->add_option("--" + prefix + "-max", g.hi, "upper end of the " + what + " grid");
  const std::string n_names = "--" + prefix + "-n" + (n_alias.empty() ? "" : "," + n_alias);
  app->add_option(n_names, g.n, "number of " + what + " grid points")
      ->check(CLI::PositiveNumber);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

// fig.csv -> fig.im1.csv, fig.im0.1.csv
std::string figure2_path(const std::string& base, double level) {
  std::ostringstream tag;
  tag << ".im" << level;
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return base + tag.str() + ".csv";
  }
  return base.substr(0, dot) + tag.str() + base.substr(dot);
}

// ---------------------------------------------------------------------------

struct CmFlags {
  double alpha = 0.0, t = 0.0;
  GridFlags lambda{defaults::kLambdaMin, defaults::kLambdaMax, defaults::kLambdaN};
  double tol = defaults::kCmTol;
  std::string method = "invert";
  GridFlags x{defaults::kDiffXMin, defaults::kDiffXMax, defaults::kDiffXN};
  int order = defaults::kDiffOrder;
  std::vector<double> steps = defaults::kDiffSteps;
  double diff_tol = defaults::kDiffTol;
};

RunReport run_cm_check(const CmFlags& f) {
  const FamilyParams p(f.alpha, f.t);
  RunReport r;
  r.command = "cm-check";
  r.params = {{"alpha", f.alpha}, {"t", f.t}, {"method", f.method}};
  if (f.method == "invert" || f.method == "both") {
    r.params["lambda_grid"] = {f.lambda.lo, f.lambda.hi, f.lambda.n};
    r.params["tol"] = f.tol;
    r.add("cm_by_inversion", cm_check_by_inversion(p, f.lambda.geometric(), f.tol));
  }
  if (f.method == "diff" || f.method == "both") {
    r.params["x_grid"] = {f.x.lo, f.x.hi, f.x.n};
    r.params["order"] = f.order;
    r.params["steps"] = f.steps;
    r.params["diff_tol"] = f.diff_tol;
    r.add("cm_by_differences",
          cm_check_by_differences([&](double x) { return f_family(x, p); }, f.x.geometric(),
                                  f.order, f.steps, f.diff_tol));
  }
  return r;
}

struct HcmFlags {
  double alpha = 0.0, t = 0.0;
  GridFlags u{NAN, NAN, defaults::kHcmUN};  // unset bounds follow t
  GridFlags w{defaults::kHcmWMin, defaults::kHcmWMax, defaults::kHcmWN};
  int order = defaults::kDiffOrder;
  double tol = defaults::kDiffTol;
  double taylor_tol = defaults::kTaylorTol;
  int taylor_order = defaults::kTaylorOrder;
  bool no_taylor = false;
};

RunReport run_hcm_check(HcmFlags f) {
  const FamilyParams p(f.alpha, f.t);
  if (std::isnan(f.u.lo)) f.u.lo = std::pow(defaults::kHcmUMin, 1.0 / f.t);
  if (std::isnan(f.u.hi)) f.u.hi = std::pow(defaults::kHcmUMax, 1.0 / f.t);
  HcmOptions o;
  o.taylor = !f.no_taylor;
  o.taylor_tol = f.taylor_tol;
  o.taylor_order = f.taylor_order;
  RunReport r;
  r.command = "hcm-check";
  r.params = {{"alpha", f.alpha},          {"t", f.t},
              {"u_grid", {f.u.lo, f.u.hi, f.u.n}},
              {"w_grid", {f.w.lo, f.w.hi, f.w.n}},
              {"order", f.order},          {"tol", f.tol},
              {"taylor", o.taylor},        {"taylor_tol", f.taylor_tol},
              {"taylor_order", f.taylor_order}};
  auto fn = [p](auto z) { return f_family(z, p); };
  r.add("hcm", hcm_check(fn, f.u.geometric(), f.w.geometric(), f.order, f.tol, o));
  return r;
}

struct PickFlags {
  double alpha = 0.0;
  std::optional<double> eps, t;
  double re_min = defaults::kPickReMin, re_max = defaults::kPickReMax;
  std::vector<double> im_levels = defaults::kPickImLevels;
  int n_per_level = defaults::kPickNPerLevel;
  GridFlags rho{defaults::kPickRhoMin, defaults::kPickRhoMax, defaults::kPickRhoN};
  bool no_negative_axis = false;
  double tol = defaults::kPickTol;
  std::string figure2;
  int figure2_n = defaults::kFigure2N;
};

RunReport run_pick_scan(const PickFlags& f) {
  if (f.eps.has_value() == f.t.has_value()) {
    throw DomainError("pick-scan: give exactly one of --eps and --t");
  }
  const FamilyParams p = f.eps ? FamilyParams::from_eps(f.alpha, *f.eps) : FamilyParams(f.alpha, *f.t);
  HalfPlaneScan scan;
  scan.re_range = {f.re_min, f.re_max};
  scan.im_levels = f.im_levels;
  scan.n_per_level = f.n_per_level;
  scan.include_negative_axis = !f.no_negative_axis;
  scan.rho_grid = f.rho.geometric();
  RunReport r;
  r.command = "pick-scan";
  r.params = {{"alpha", p.alpha},
              {"t", p.t},
              {"eps", p.eps()},
              {"re_range", {f.re_min, f.re_max}},
              {"im_levels", f.im_levels},
              {"n_per_level", f.n_per_level},
              {"negative_axis", scan.include_negative_axis},
              {"rho_grid", {f.rho.lo, f.rho.hi, f.rho.n}},
              {"tol", f.tol}};
  const Verdict v = ggc_pick_scan(p, scan, f.tol);
  r.add("pick", v);
  if (v.extremum) r.results["m_hat"] = *v.extremum;
  if (!f.figure2.empty()) {
    const ScanGrid re_grid = ScanGrid::linear(f.re_min, f.re_max, f.figure2_n);
    for (double level : defaults::kFigure2ImLevels) {
      std::ostringstream csv;
      write_figure2_csv(csv, figure2_data(p, level, re_grid));
      const std::string path = figure2_path(f.figure2, level);
      write_file(path, csv.str());
      r.artifacts.push_back(path);
    }
  }
  return r;
}

struct CriticalFlags {
  double alpha = 0.0;
  double bisect_tol = defaults::kBisectTol;
  GridFlags lambda{defaults::kLambdaMin, defaults::kLambdaMax, defaults::kLambdaN};
  double tol = defaults::kCmTol;
};

RunReport run_critical_t(const CriticalFlags& f) {
  CriticalTOptions o;
  o.lambda_grid = f.lambda.geometric();
  o.tol = f.tol;
  const CriticalTResult c = estimate_critical_t(f.alpha, f.bisect_tol, o);
  RunReport r;
  r.command = "critical-t";
  r.params = {{"alpha", f.alpha},
              {"bisect_tol", f.bisect_tol},
              {"lambda_grid", {f.lambda.lo, f.lambda.hi, f.lambda.n}},
              {"tol", f.tol}};
  json trace = json::array();
  for (const auto& probe : c.trace) {
    trace.push_back({{"t", probe.t},
                     {"status", to_string(probe.status)},
                     {"refined", probe.refined},
                     {"detail", probe.detail}});
  }
  r.results = {{"t_lo", c.t_lo}, {"t_hi", c.t_hi}, {"beta_hat", 2.0 / (c.t_lo + c.t_hi)},
               {"trace", trace}};
  Verdict v;
  // A valid bracket is the expected outcome; the verdict reports whether it was obtained.
  v.status = c.status == Status::Pass ? Status::Pass : Status::Inconclusive;
  v.tolerance = f.bisect_tol;
  v.detail = c.status == Status::Pass ? c.detail + "; evidence only, t_alpha is open"
                                      : c.detail;
  v.grid = "lambda " + o.lambda_grid.describe();
  r.add("bracket", v);
  return r;
}

struct McFlags {
  std::string check;
  std::size_t n = defaults::kSampleN;
  std::uint64_t seed = defaults::kSeed;
  double level = defaults::kKsLevel;
  double alpha = 0.3;
  int n_gamma = 3;
  double t = 1.0, s = 1.0;
  double x = 1.0, y = 2.0;
  std::vector<double> lambdas = defaults::kStableLaplaceLambdas;
  GridFlags grid{defaults::kDiffXMin, defaults::kDiffXMax, defaults::kDiffXN};
  int order = defaults::kDiffOrder;
  double tol = defaults::kDiffTol;
  std::string samples;
};

Verdict ks_verdict(const KsReport& k) {
  Verdict v;
  v.status = k.pass ? Status::Pass : Status::Fail;
  v.tolerance = k.threshold;
  v.extremum = k.statistic;
  std::ostringstream d;
  d << k.detail << (k.detail.empty() ? "" : "; ") << "KS statistic " << k.statistic
    << ", threshold " << k.threshold << " at level " << k.level;
  v.detail = d.str();
  if (!k.pass) v.witness = Witness{{static_cast<double>(k.n)}, k.statistic};
  return v;
}

json ks_json(const KsReport& k) {
  return {{"statistic", k.statistic}, {"n", k.n}, {"m", k.m}, {"threshold", k.threshold},
          {"level", k.level}, {"pass", k.pass}};
}

RunReport run_mc_verify(const McFlags& f) {
  RunReport r;
  r.command = "mc-verify";
  r.params = {{"check", f.check}, {"n", f.n}, {"seed", f.seed}};
  auto record_ks = [&](const KsReport& k) {
    r.add(f.check, ks_verdict(k));
    r.results["ks"] = ks_json(k);
  };
  if (f.check == "T-density") {
    r.params["alpha"] = f.alpha;
    r.params["level"] = f.level;
    record_ks(verify_T_alpha_density(f.alpha, f.n, f.seed, f.level));
    if (!f.samples.empty()) {
      std::ostringstream out;
      write_sample_set(out, sample_T_alpha(f.alpha, f.n, f.seed));
      write_file(f.samples, out.str());
      r.artifacts.push_back(f.samples);
    }
  } else if (f.check == "zinv-factorization") {
    r.params["n_gamma"] = f.n_gamma;
    r.params["level"] = f.level;
    record_ks(verify_factorization_zinv(f.n_gamma, f.n, f.seed, f.level));
  } else if (f.check == "sqrt-gamma") {
    r.params["t"] = f.t;
    r.params["s"] = f.s;
    r.params["level"] = f.level;
    record_ks(verify_sqrt_gamma_product_density(f.t, f.s, f.n, f.seed, f.level));
  } else if (f.check == "bessel-product") {
    r.params = {{"check", f.check}, {"alpha", f.alpha}, {"x", f.x}, {"y", f.y}};
    r.add(f.check, verify_bessel_product_formula(f.alpha, f.x, f.y, {}, defaults::kBesselRelTol));
  } else if (f.check == "stable-laplace") {
    r.params["alpha"] = f.alpha;
    r.params["lambdas"] = f.lambdas;
    r.add(f.check, verify_stable_laplace(f.alpha, f.lambdas, f.n, f.seed, defaults::kSigmas));
    if (!f.samples.empty()) {
      std::ostringstream out;
      write_sample_set(out, sample_positive_stable(f.alpha, f.n, f.seed));
      write_file(f.samples, out.str());
      r.artifacts.push_back(f.samples);
    }
  } else if (f.check == "kanter-cm") {
    r.params = {{"check", f.check},
                {"alpha", f.alpha},
                {"grid", {f.grid.lo, f.grid.hi, f.grid.n}},
                {"order", f.order},
                {"tol", f.tol}};
    r.add(f.check, verify_kanter_cm(f.alpha, f.grid.geometric(), f.order, f.tol));
  }
  return r;
}

struct InvertFlags {
  double alpha = 0.0, t = 0.0;
  std::vector<double> lambdas;
  GridFlags lambda{0.1, 20.0, 50};
  std::string method = "bromwich";
  std::optional<double> c;
  std::string csv;
  double agree_tol = 1e-6;
};

RunReport run_invert(const InvertFlags& f) {
  const FamilyParams p(f.alpha, f.t);
  std::vector<double> lambdas = f.lambdas;
  if (lambdas.empty()) lambdas = f.lambda.geometric().points();
  for (double l : lambdas) {
    if (!(l > 0.0)) throw DomainError("invert: lambda values must be positive");
  }

  auto run_method = [&](const std::string& m) {
    InversionResult res;
    res.lambdas = lambdas;
    if (m == "bromwich" && f.c) {
      res.method = InversionMethod::Bromwich;
      for (double l : lambdas) {
        const InverseValue v = bromwich_invert_detail(p, *f.c, l);
        res.values.push_back(v.value);
        res.errors.push_back(v.error);
      }
      res.est_error = *std::max_element(res.errors.begin(), res.errors.end());
      return res;
    }
    std::vector<double> sorted = lambdas;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const InversionMethod method = m == "bromwich"      ? InversionMethod::Bromwich
                                   : m == "branch-cut" ? InversionMethod::BranchCut
                                                       : InversionMethod::ClosedForm;
    const InversionResult on_sorted = invert_grid(p, sorted, method);
    res.method = method;
    res.est_error = on_sorted.est_error;
    for (double l : lambdas) {
      const auto k = std::lower_bound(sorted.begin(), sorted.end(), l) - sorted.begin();
      res.values.push_back(on_sorted.values[k]);
      res.errors.push_back(on_sorted.errors[k]);
    }
    return res;
  };

  std::vector<InversionResult> results;
  if (f.method == "both") {
    results.push_back(run_method("bromwich"));
    if (p.t == 1.0) {
      results.push_back(run_method("closed-form"));
    } else if (p.eps() > 0.0) {
      results.push_back(run_method("branch-cut"));
    } else {
      throw DomainError(
          "invert --method both: a second method needs t < 1 - alpha (branch cut) or t = 1");
    }
  } else {
    results.push_back(run_method(f.method));
  }

  std::ostringstream csv;
  csv.precision(15);
  csv << "lambda,g,err";
  if (results.size() == 2) csv << ",g2,err2";
  csv << '\n';
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    csv << lambdas[i];
    for (const auto& res : results) csv << ',' << res.values[i] << ',' << res.errors[i];
    csv << '\n';
  }

  RunReport r;
  r.command = "invert";
  r.params = {{"alpha", f.alpha}, {"t", f.t}, {"method", f.method}, {"lambdas", lambdas}};
  if (f.c) r.params["c"] = *f.c;
  json series = json::array();
  for (const auto& res : results) {
    series.push_back({{"method", to_string(res.method)},
                      {"g", res.values},
                      {"err", res.errors},
                      {"est_error", res.est_error}});
  }
  r.results["series"] = series;

  Verdict v;
  v.grid = "lambda list of size " + std::to_string(lambdas.size());
  if (results.size() == 2) {
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double d = std::abs(results[0].values[i] - results[1].values[i]);
      if (d > worst) {
        worst = d;
        at = i;
      }
    }
    v.tolerance = f.agree_tol;
    v.extremum = worst;
    v.status = worst <= f.agree_tol ? Status::Pass : Status::Fail;
    if (!v.pass()) v.witness = Witness{{lambdas[at]}, worst};
    v.detail = "max |" + to_string(results[0].method) + " - " + to_string(results[1].method) +
               "| = " + std::to_string(worst);
  } else {
    v.status = Status::Pass;
    v.tolerance = results[0].est_error;
    v.detail = "values computed; tolerance field holds the largest error estimate";
  }
  r.add("inversion", v);

  if (f.csv == "-") {
    std::cout << csv.str();
  } else if (!f.csv.empty()) {
    write_file(f.csv, csv.str());
    r.artifacts.push_back(f.csv);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcmlab: numerical checks of complete and hyperbolic complete monotonicity "
               "for the family 1/(x^{2t} + 2 cos(pi alpha) x^t + 1)"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "maximum worker threads (0 = all cores)");

  CmFlags cm;
  auto* cm_cmd = app.add_subcommand("cm-check", "complete monotonicity of f_{alpha,t}");
  cm_cmd->add_option("--alpha", cm.alpha, "alpha in (0, 1)")->required()->check(kUnitOpen);
  cm_cmd->add_option("--t", cm.t, "exponent t > 0")->required()->check(kPositive);
  add_grid(cm_cmd, cm.lambda, "lambda", "lambda (inversion)", "--n");
  cm_cmd->add_option("--tol", cm.tol, "inversion tolerance, relative to max(1, |g|)")
      ->check(kPositive);
  cm_cmd->add_option("--method", cm.method, "invert, diff or both")
      ->check(CLI::IsMember({"invert", "diff", "both"}));
  add_grid(cm_cmd, cm.x, "x", "x (differences)");
  cm_cmd->add_option("--order", cm.order, "maximal difference order")->check(CLI::PositiveNumber);
  cm_cmd->add_option("--steps", cm.steps, "relative difference steps h/x");
  cm_cmd->add_option("--diff-tol", cm.diff_tol, "difference tolerance, relative to f(x)")
      ->check(kPositive);

  HcmFlags hcm;
  auto* hcm_cmd = app.add_subcommand("hcm-check", "hyperbolic complete monotonicity of f_{alpha,t}");
  hcm_cmd->add_option("--alpha", hcm.alpha, "alpha in (0, 1)")->required()->check(kUnitOpen);
  hcm_cmd->add_option("--t", hcm.t, "exponent t > 0")->required()->check(kPositive);
  add_grid(hcm_cmd, hcm.u, "u", "u");
  hcm_cmd->get_option("--u-min")->default_str("1e-4^(1/t)");
  hcm_cmd->get_option("--u-max")->default_str("1e4^(1/t)");
  add_grid(hcm_cmd, hcm.w, "w", "w (must start above 2)");
  hcm_cmd->add_option("--order", hcm.order, "maximal difference order")->check(CLI::PositiveNumber);
  hcm_cmd->add_option("--tol", hcm.tol, "difference tolerance, relative to g_u(w)")
      ->check(kPositive);
  hcm_cmd->add_option("--taylor-tol", hcm.taylor_tol, "Taylor battery tolerance")
      ->check(kPositive);
  hcm_cmd->add_option("--taylor-order", hcm.taylor_order, "Taylor battery maximal order")
      ->check(CLI::PositiveNumber);
  hcm_cmd->add_flag("--no-taylor", hcm.no_taylor, "skip the Taylor battery");

  PickFlags pick;
  auto* pick_cmd = app.add_subcommand("pick-scan", "Pick criterion scan of Im(f'/f)");
  pick_cmd->add_option("--alpha", pick.alpha, "alpha in (0, 1)")->required()->check(kUnitOpen);
  auto* eps_opt = pick_cmd->add_option("--eps", pick.eps, "eps = 1 - alpha - t");
  auto* t_opt = pick_cmd->add_option("--t", pick.t, "exponent t > 0")->check(kPositive);
  eps_opt->excludes(t_opt);
  pick_cmd->add_option("--re-min", pick.re_min, "lower end of Re z");
  pick_cmd->add_option("--re-max", pick.re_max, "upper end of Re z");
  pick_cmd->add_option("--im-levels", pick.im_levels, "horizontal lines Im z scanned");
  pick_cmd->add_option("--n-per-level", pick.n_per_level, "points per line")
      ->check(CLI::Range(2, 100000000));
  add_grid(pick_cmd, pick.rho, "rho", "negative-axis rho");
  pick_cmd->add_flag("--no-negative-axis", pick.no_negative_axis, "skip the negative axis");
  pick_cmd->add_option("--tol", pick.tol, "absolute tolerance on h")->check(kPositive);
  pick_cmd->add_option("--emit-figure2", pick.figure2,
                       "write h along Im z = 1 and 0.1 to PATH.im1.csv and PATH.im0.1.csv");
  pick_cmd->add_option("--figure2-n", pick.figure2_n, "points per plotted line")
      ->check(CLI::Range(2, 100000000));

  CriticalFlags crit;
  auto* crit_cmd = app.add_subcommand("critical-t", "bisection bracket for t_alpha");
  crit_cmd->add_option("--alpha", crit.alpha, "alpha in (0, 1/2]")
      ->required()
      ->check(CLI::Range(0.0, 0.5) & open_interval(0.0, 1.0));
  crit_cmd->add_option("--bisect-tol", crit.bisect_tol, "bracket width")->check(kPositive);
  add_grid(crit_cmd, crit.lambda, "lambda", "lambda");
  crit_cmd->add_option("--tol", crit.tol, "CM tolerance")->check(kPositive);

  McFlags mc;
  auto* mc_cmd = app.add_subcommand("mc-verify", "Monte Carlo and quadrature identities");
  mc_cmd->add_option("--check", mc.check, "which identity")
      ->required()
      ->check(CLI::IsMember({"T-density", "zinv-factorization", "sqrt-gamma", "bessel-product",
                             "stable-laplace", "kanter-cm"}));
  mc_cmd->add_option("--n", mc.n, "sample size")->check(CLI::Range(1.0, 1e9));
  mc_cmd->add_option("--seed", mc.seed, "random seed");
  mc_cmd->add_option("--level", mc.level, "KS level")->check(kUnitOpen);
  mc_cmd->add_option("--alpha", mc.alpha, "alpha (T-density, stable-laplace, kanter-cm, bessel-product)");
  mc_cmd->add_option("--n-gamma", mc.n_gamma, "n in the Z_{1/n} factorization")
      ->check(CLI::Range(2, 4));
  mc_cmd->add_option("--t", mc.t, "first gamma shape (sqrt-gamma)")->check(kPositive);
  mc_cmd->add_option("--s", mc.s, "second gamma shape (sqrt-gamma)")->check(kPositive);
  mc_cmd->add_option("--x", mc.x, "x (bessel-product)")->check(kPositive);
  mc_cmd->add_option("--y", mc.y, "y (bessel-product)")->check(kPositive);
  mc_cmd->add_option("--lambdas", mc.lambdas, "lambda values (stable-laplace)");
  add_grid(mc_cmd, mc.grid, "x", "x (kanter-cm)");
  mc_cmd->add_option("--order", mc.order, "difference order (kanter-cm)")
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--tol", mc.tol, "difference tolerance (kanter-cm)")->check(kPositive);
  mc_cmd->add_option("--emit-samples", mc.samples,
                     "write the sample set (T-density, stable-laplace) to PATH");

  InvertFlags inv;
  auto* inv_cmd = app.add_subcommand("invert", "inverse Laplace transform of f_{alpha,t}");
  inv_cmd->add_option("--alpha", inv.alpha, "alpha in (0, 1)")->required()->check(kUnitOpen);
  inv_cmd->add_option("--t", inv.t, "exponent t > 0")->required()->check(kPositive);
  inv_cmd->add_option("--lambda", inv.lambdas, "lambda values (overrides the grid)")
      ->check(kPositive);
  add_grid(inv_cmd, inv.lambda, "lambda", "lambda");
  inv_cmd->add_option("--method", inv.method, "bromwich, branch-cut, closed-form or both")
      ->check(CLI::IsMember({"bromwich", "branch-cut", "closed-form", "both"}));
  inv_cmd->add_option("--c", inv.c, "Bromwich abscissa (default: adaptive)")->check(kPositive);
  inv_cmd->add_option("--csv", inv.csv, "write lambda,g,err CSV to PATH ('-' = stdout)");
  inv_cmd->add_option("--agree-tol", inv.agree_tol, "agreement tolerance for --method both")
      ->check(kPositive);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  set_max_threads(threads);

  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  try {
    if (*cm_cmd) report = run_cm_check(cm);
    else if (*hcm_cmd) report = run_hcm_check(hcm);
    else if (*pick_cmd) report = run_pick_scan(pick);
    else if (*crit_cmd) report = run_critical_t(crit);
    else if (*mc_cmd) report = run_mc_verify(mc);
    else if (*inv_cmd) report = run_invert(inv);
  } catch (const DomainError& e) {
    std::cerr << "hcmlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PoleError& e) {
    std::cerr << "hcmlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hcmlab: " << e.what() << '\n';
    return 2;
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (inv.csv != "-" || !*inv_cmd) std::cout << report.to_json().dump(2) << '\n';
  std::cerr << "hcmlab: " << report.command << " " << report.overall() << " in "
            << report.wall_time << " s\n";
  return report.exit_code();
}
