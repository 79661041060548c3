#pragma once

#include "bqm/types.hpp"
#include "bqm/sip_space.hpp"
#include "bqm/spectral_set.hpp"
#include "bqm/spectral.hpp"
#include "bqm/states.hpp"
#include "bqm/measurement.hpp"
#include "bqm/dynamics.hpp"
#include "bqm/scenarios.hpp"
