#pragma once

#include "hcmlab/defaults.hpp"
#include "hcmlab/densities.hpp"
#include "hcmlab/errors.hpp"
#include "hcmlab/laplace.hpp"
#include "hcmlab/montecarlo.hpp"
#include "hcmlab/monotone.hpp"
#include "hcmlab/parallel.hpp"
#include "hcmlab/pick.hpp"
#include "hcmlab/quadrature.hpp"
#include "hcmlab/report.hpp"
#include "hcmlab/specfun.hpp"
