#pragma once

#include "monogamy/correlations.hpp"
#include "monogamy/measures.hpp"
#include "monogamy/montecarlo.hpp"
#include "monogamy/named_states.hpp"
#include "monogamy/state_io.hpp"
#include "monogamy/statekit.hpp"
