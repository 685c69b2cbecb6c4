#pragma once

// Pseudospectral simulation and diagnostics for the defocusing stochastic
// cubic Schrodinger flow on a periodic box, with the smoothed-energy
// (I-operator) machinery: multipliers, Hilbert-Schmidt forcing, exact
// stochastic convolution, split-step integrators, the Ito energy ledger,
// scaling maps, and ensemble orchestration.

#include "snls/config.hpp"
#include "snls/convolution.hpp"
#include "snls/diagnostics.hpp"
#include "snls/ensemble.hpp"
#include "snls/errors.hpp"
#include "snls/field.hpp"
#include "snls/grid.hpp"
#include "snls/hs_operator.hpp"
#include "snls/i_operator.hpp"
#include "snls/integrator.hpp"
#include "snls/io.hpp"
#include "snls/ledger.hpp"
#include "snls/multiplier.hpp"
#include "snls/norms.hpp"
#include "snls/pipeline.hpp"
#include "snls/plot.hpp"
#include "snls/report.hpp"
#include "snls/scaling.hpp"
#include "snls/spacetime.hpp"
#include "snls/stats.hpp"
#include "snls/wiener.hpp"
