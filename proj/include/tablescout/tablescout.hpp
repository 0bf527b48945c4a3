#pragma once

#include "tablescout/category.hpp"
#include "tablescout/config.hpp"
#include "tablescout/detector.hpp"
#include "tablescout/error.hpp"
#include "tablescout/evaluator.hpp"
#include "tablescout/pnm.hpp"
#include "tablescout/preprocess.hpp"
#include "tablescout/profile.hpp"
#include "tablescout/raster.hpp"
#include "tablescout/synth.hpp"
#include "tablescout/thresholds.hpp"
