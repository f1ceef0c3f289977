#pragma once

// Umbrella header: the full analytic-transport toolkit.

#include "kerrflux/config.hpp"
#include "kerrflux/correlators.hpp"
#include "kerrflux/decoherence.hpp"
#include "kerrflux/io.hpp"
#include "kerrflux/langevin.hpp"
#include "kerrflux/noise.hpp"
#include "kerrflux/params.hpp"
#include "kerrflux/quadrature.hpp"
#include "kerrflux/sweep.hpp"
#include "kerrflux/transport.hpp"
