#pragma once

#include "rama/exact.hpp"
#include "rama/mpreal.hpp"
#include "rama/series.hpp"
#include "rama/bernoulli.hpp"
#include "rama/congruence.hpp"
#include "rama/solver.hpp"
#include "rama/numeric.hpp"
#include "rama/catalog.hpp"
