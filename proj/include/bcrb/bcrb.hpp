#pragma once

#include "bcrb/bounds_asymptotic.hpp"
#include "bcrb/bounds_exact.hpp"
#include "bcrb/compare.hpp"
#include "bcrb/distributions.hpp"
#include "bcrb/estimators.hpp"
#include "bcrb/io.hpp"
#include "bcrb/linmodel.hpp"
#include "bcrb/parallel.hpp"
#include "bcrb/rng.hpp"
#include "bcrb/stats.hpp"
#include "bcrb/sweep.hpp"
#include "bcrb/validate.hpp"
