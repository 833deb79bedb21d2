#pragma once

#include "lgipdaf/bench.hpp"
#include "lgipdaf/chi2.hpp"
#include "lgipdaf/filter.hpp"
#include "lgipdaf/gaussian.hpp"
#include "lgipdaf/lie/cv_state.hpp"
#include "lgipdaf/lie/rn.hpp"
#include "lgipdaf/lie/se2.hpp"
#include "lgipdaf/lie/series.hpp"
#include "lgipdaf/motion_model.hpp"
#include "lgipdaf/sim.hpp"
#include "lgipdaf/track.hpp"
#include "lgipdaf/track_manager.hpp"
