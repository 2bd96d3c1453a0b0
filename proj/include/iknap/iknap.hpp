#pragma once

// Umbrella header for the iknap library: a deterministic 2-D multi-robot
// navigation simulator with bandwidth-constrained observation sharing.

#include "iknap/belief.hpp"
#include "iknap/body.hpp"
#include "iknap/candidates.hpp"
#include "iknap/comms.hpp"
#include "iknap/config.hpp"
#include "iknap/control.hpp"
#include "iknap/geometry.hpp"
#include "iknap/knapsack.hpp"
#include "iknap/path.hpp"
#include "iknap/planner.hpp"
#include "iknap/report.hpp"
#include "iknap/rng.hpp"
#include "iknap/spline.hpp"
#include "iknap/sweep.hpp"
#include "iknap/trial.hpp"
#include "iknap/utility.hpp"
#include "iknap/vec2.hpp"
#include "iknap/world.hpp"
