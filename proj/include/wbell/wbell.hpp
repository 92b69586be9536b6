#pragma once

// Umbrella header.

#include "wbell/errors.hpp"
#include "wbell/event.hpp"
#include "wbell/inequality.hpp"
#include "wbell/lhv.hpp"
#include "wbell/noise.hpp"
#include "wbell/quantum.hpp"
#include "wbell/sampling.hpp"
#include "wbell/serialize.hpp"
#include "wbell/version.hpp"
