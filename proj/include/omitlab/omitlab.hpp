#pragma once

// Umbrella header: the whole nonlinear-OMIT toolkit.
//
//   params       physical configuration, presets, drive amplitudes
//   steady       self-consistent steady state + linear stability
//   resp         closed-form sideband response (t_p, eta, lambda sets)
//   sweeps       spectra, power/gain scans, group delays, figure datasets
//   oracle       time-domain RK4 + demodulation cross-check
//   io           CSV/JSON/SVG serialization

#include "omitlab/errors.hpp"
#include "omitlab/io.hpp"
#include "omitlab/oracle.hpp"
#include "omitlab/params.hpp"
#include "omitlab/response.hpp"
#include "omitlab/steady_state.hpp"
#include "omitlab/sweeps.hpp"
#include "omitlab/version.hpp"
