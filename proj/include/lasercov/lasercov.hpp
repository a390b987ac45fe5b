#pragma once

#include "lasercov/channel.hpp"
#include "lasercov/config.hpp"
#include "lasercov/coverage.hpp"
#include "lasercov/errors.hpp"
#include "lasercov/montecarlo.hpp"
#include "lasercov/numerics.hpp"
#include "lasercov/power.hpp"
#include "lasercov/rng.hpp"
#include "lasercov/scenario.hpp"
#include "lasercov/sweep.hpp"
#include "lasercov/version.hpp"
