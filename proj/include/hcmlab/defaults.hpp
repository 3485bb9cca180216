#pragma once

// Default grids, tolerances and sample sizes used by the command-line tool
// and the tests. Every entry can be overridden by a flag.

#include <cmath>
#include <cstdint>
#include <vector>

#include "hcmlab/monotone.hpp"

namespace hcmlab::defaults {

// CM by inversion: lambda grid and tolerance relative to max(1, |g|_inf).
inline constexpr double kLambdaMin = 0.05;
inline constexpr double kLambdaMax = 60.0;
inline constexpr int kLambdaN = 96;
inline constexpr double kCmTol = 1e-12;

// CM by differences: x grid, order, relative steps, tolerance relative to f(x).
inline constexpr double kDiffXMin = 0.01;
inline constexpr double kDiffXMax = 100.0;
inline constexpr int kDiffXN = 60;
inline constexpr int kDiffOrder = 8;
inline const std::vector<double> kDiffSteps = {0.05, 0.2, 1.0};
inline constexpr double kDiffTol = 1e-9;

// HCM: u and w grids; Taylor battery.
inline constexpr double kHcmUMin = 1e-4;
inline constexpr double kHcmUMax = 1e4;
inline constexpr int kHcmUN = 61;
inline constexpr double kHcmWMin = 2.01;
inline constexpr double kHcmWMax = 200.0;
inline constexpr int kHcmWN = 40;
inline constexpr double kTaylorTol = 1e-13;
inline constexpr int kTaylorOrder = 160;

// Pick scan.
inline constexpr double kPickReMin = -50.0;
inline constexpr double kPickReMax = 50.0;
inline const std::vector<double> kPickImLevels = {0.01, 0.1, 1.0, 10.0};
inline constexpr int kPickNPerLevel = 2000;
inline constexpr double kPickRhoMin = 1e-4;
inline constexpr double kPickRhoMax = 1e4;
inline constexpr int kPickRhoN = 2001;
inline constexpr double kPickTol = 1e-6;
inline const std::vector<double> kFigure2ImLevels = {1.0, 0.1};
inline constexpr int kFigure2N = 2001;

// Stieltjes probe.
inline constexpr double kStieltjesXMin = 1e-3;
inline constexpr double kStieltjesXMax = 1e3;
inline constexpr int kStieltjesXN = 2001;
inline const std::vector<double> kStieltjesEps = {1e-2, 1e-3, 1e-4};

// Critical exponent.
inline constexpr double kBisectTol = 0.01;

// Monte Carlo.
inline constexpr std::size_t kSampleN = 100000;
inline constexpr std::uint64_t kSeed = 42;
inline constexpr double kKsLevel = 0.01;
inline const std::vector<double> kStableLaplaceLambdas = {0.25, 1.0, 4.0};
inline constexpr double kSigmas = 4.0;
inline constexpr double kBesselRelTol = 1e-8;

inline ScanGrid lambda_grid() { return ScanGrid::geometric(kLambdaMin, kLambdaMax, kLambdaN); }
inline ScanGrid diff_grid() { return ScanGrid::geometric(kDiffXMin, kDiffXMax, kDiffXN); }
inline ScanGrid hcm_u_grid() { return ScanGrid::geometric(kHcmUMin, kHcmUMax, kHcmUN); }
// f_{alpha,t} depends on x through x^t, so its u grid spans [kHcmUMin, kHcmUMax] in u^t.
inline ScanGrid hcm_u_grid(double t) {
  return ScanGrid::geometric(std::pow(kHcmUMin, 1.0 / t), std::pow(kHcmUMax, 1.0 / t), kHcmUN);
}
inline ScanGrid hcm_w_grid() { return ScanGrid::geometric(kHcmWMin, kHcmWMax, kHcmWN); }

}  // namespace hcmlab::defaults
