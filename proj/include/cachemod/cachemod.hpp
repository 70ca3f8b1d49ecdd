#pragma once

#include "cachemod/analysis.hpp"
#include "cachemod/caching.hpp"
#include "cachemod/mask.hpp"
#include "cachemod/modem.hpp"
#include "cachemod/rng.hpp"
#include "cachemod/scenario.hpp"
#include "cachemod/simulation.hpp"
