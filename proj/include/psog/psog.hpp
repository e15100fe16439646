#pragma once

// Umbrella header for the PSOG simulation toolkit.

#include "psog/calibration.hpp"
#include "psog/designs.hpp"
#include "psog/errors.hpp"
#include "psog/experiments.hpp"
#include "psog/eye_model.hpp"
#include "psog/geometry.hpp"
#include "psog/hash.hpp"
#include "psog/image.hpp"
#include "psog/kvconfig.hpp"
#include "psog/metrics.hpp"
#include "psog/pipeline.hpp"
#include "psog/render.hpp"
#include "psog/results.hpp"
#include "psog/run_config.hpp"
#include "psog/scanpath.hpp"
#include "psog/sensing.hpp"
#include "psog/svg.hpp"
