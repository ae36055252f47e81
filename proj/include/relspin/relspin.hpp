#pragma once

#include "relspin/spinor.hpp"
#include "relspin/decay_state.hpp"
#include "relspin/spin_operators.hpp"
#include "relspin/correlations.hpp"
#include "relspin/hidden_variables.hpp"
#include "relspin/photon.hpp"
