#pragma once

// Umbrella header: the whole library in dependency order.

#include "version.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "lattice.hpp"
#include "eigen.hpp"
#include "fit.hpp"
#include "spectral.hpp"
#include "bessel.hpp"
#include "analytic.hpp"
#include "detect.hpp"
#include "timegrid.hpp"
#include "parallel.hpp"
#include "dynamics.hpp"
#include "config.hpp"
#include "csvio.hpp"
#include "experiments.hpp"
