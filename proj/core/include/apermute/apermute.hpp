#pragma once

#include "apermute/counting.hpp"
#include "apermute/cycle_sets.hpp"
#include "apermute/cycle_types.hpp"
#include "apermute/error.hpp"
#include "apermute/exact.hpp"
#include "apermute/inclusion_exclusion.hpp"
#include "apermute/limits.hpp"
#include "apermute/sampler.hpp"
