#pragma once

// Umbrella header for the whole library: potential games, private constraints,
// congestion instances, the regularized-Lagrangian descent solver, solution
// metrics, and the experiment harness.

#include "potg/game.hpp"
#include "potg/constraints.hpp"
#include "potg/congestion.hpp"
#include "potg/metrics.hpp"
#include "potg/solver.hpp"
#include "potg/svg.hpp"
#include "potg/config.hpp"
#include "potg/harness.hpp"
