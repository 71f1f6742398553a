#pragma once

#include "specbuckle/avp_finite.hpp"
#include "specbuckle/ball_spectra.hpp"
#include "specbuckle/bound_report.hpp"
#include "specbuckle/errors.hpp"
#include "specbuckle/interval_spectra.hpp"
#include "specbuckle/problem_kind.hpp"
#include "specbuckle/riesz_bounds.hpp"
#include "specbuckle/specfun.hpp"
#include "specbuckle/spectrum.hpp"
