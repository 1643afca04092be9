#pragma once

// Umbrella header: the full visco-elastic damped-wave laboratory.
//
//   coefficients  — dissipation coefficient catalog g(t) and regime conditions
//   phase_space   — zone classification and separating lines in the (t, r) plane
//   mode_solver   — per-frequency ODE integration with log-magnitude carrying
//   quadrature    — Gauss-Legendre panels, adaptive integrals, radial grids
//   energy        — radial data profiles, Sobolev norms, energy curves
//   bounds        — closed-form decay envelopes and curve verification
//   decay_fit     — log-log rate fitting and the parabolic-effect verdict
//   wkb           — eigenvalues, phase weights, surrogates, symbol constants
//   io            — CSV/JSON/SVG artifacts, configs, deterministic naming

#include "common.hpp"
#include "quadrature.hpp"
#include "coefficients.hpp"
#include "phase_space.hpp"
#include "mode_solver.hpp"
#include "energy.hpp"
#include "bounds.hpp"
#include "decay_fit.hpp"
#include "wkb.hpp"
#include "io.hpp"
