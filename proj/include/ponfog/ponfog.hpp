#pragma once

#include "ponfog/config.hpp"
#include "ponfog/control_sim.hpp"
#include "ponfog/error.hpp"
#include "ponfog/power.hpp"
#include "ponfog/rwa.hpp"
#include "ponfog/rwa_csv.hpp"
#include "ponfog/sim_io.hpp"
#include "ponfog/sim_stats.hpp"
#include "ponfog/topology.hpp"
#include "ponfog/topology_export.hpp"
