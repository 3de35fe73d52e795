#pragma once

#include "edgeworth/cumulants.hpp"
#include "edgeworth/distributions.hpp"
#include "edgeworth/error.hpp"
#include "edgeworth/expansion.hpp"
#include "edgeworth/oracle.hpp"
#include "edgeworth/random.hpp"
#include "edgeworth/special_math.hpp"
