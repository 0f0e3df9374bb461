#pragma once

#include "battery.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "hybrid.hpp"
#include "link.hpp"
#include "mission.hpp"
#include "numeric.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "sim.hpp"
#include "solar.hpp"
#include "sweep.hpp"
#include "validate.hpp"
#include "wind.hpp"
