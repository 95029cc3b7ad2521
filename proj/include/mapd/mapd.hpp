#pragma once

// Everything except the command-line front end.
#include "mapd/cbs.hpp"
#include "mapd/central.hpp"
#include "mapd/events.hpp"
#include "mapd/grid_map.hpp"
#include "mapd/heuristics.hpp"
#include "mapd/hungarian.hpp"
#include "mapd/io.hpp"
#include "mapd/path.hpp"
#include "mapd/simulation.hpp"
#include "mapd/space_time_astar.hpp"
#include "mapd/task.hpp"
#include "mapd/token.hpp"
#include "mapd/types.hpp"
#include "mapd/well_formed.hpp"
