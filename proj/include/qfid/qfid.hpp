#pragma once

// Umbrella header for the qfid library (the JSON front end in spec_io.hpp is
// not included here; it needs nlohmann/json on the include path).

#include "qfid/channels.hpp"
#include "qfid/errors.hpp"
#include "qfid/fidelity.hpp"
#include "qfid/linalg.hpp"
#include "qfid/pulses.hpp"
#include "qfid/states.hpp"
