#pragma once

// Umbrella header.

#include "approxvar/approx.hpp"
#include "approxvar/closed_forms.hpp"
#include "approxvar/core.hpp"
#include "approxvar/oracle.hpp"
#include "approxvar/sampled.hpp"
#include "approxvar/selection.hpp"
#include "approxvar/space.hpp"
#include "approxvar/variations.hpp"
