#pragma once

// Umbrella header: the whole toolchain in one include.

#include "tml/config.hpp"
#include "tml/diagnostics.hpp"
#include "tml/events.hpp"
#include "tml/grip.hpp"
#include "tml/interleave.hpp"
#include "tml/model.hpp"
#include "tml/normalize.hpp"
#include "tml/parse.hpp"
#include "tml/print.hpp"
#include "tml/render.hpp"
#include "tml/sim.hpp"
#include "tml/validate.hpp"
