#pragma once

// Umbrella header for the whole simulator.

#include "beepsim/calibration.hpp"
#include "beepsim/channel.hpp"
#include "beepsim/codeword.hpp"
#include "beepsim/energy.hpp"
#include "beepsim/engine.hpp"
#include "beepsim/int128.hpp"
#include "beepsim/naming.hpp"
#include "beepsim/naming_state.hpp"
#include "beepsim/randnaml.hpp"
#include "beepsim/rng.hpp"
#include "beepsim/sweep.hpp"
#include "beepsim/trace.hpp"
#include "beepsim/verify.hpp"
