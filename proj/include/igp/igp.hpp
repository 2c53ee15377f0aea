#pragma once

#include "igp/branch.hpp"
#include "igp/critical_delay.hpp"
#include "igp/dde_sim.hpp"
#include "igp/error.hpp"
#include "igp/model.hpp"
#include "igp/spectrum_oracle.hpp"
#include "igp/stability.hpp"
