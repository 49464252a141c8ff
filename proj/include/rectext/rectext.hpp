#pragma once

// Umbrella header.

#include "rectext/common.hpp"
#include "rectext/rational.hpp"
#include "rectext/exponents.hpp"
#include "rectext/sidelengths.hpp"
#include "rectext/surface.hpp"
#include "rectext/ellipticity.hpp"
#include "rectext/grid.hpp"
#include "rectext/extension.hpp"
#include "rectext/knapp.hpp"
#include "rectext/besicovitch.hpp"
#include "rectext/kakeya.hpp"
#include "rectext/train.hpp"
#include "rectext/beta.hpp"
#include "rectext/fit.hpp"
#include "rectext/io.hpp"
#include "rectext/sweep.hpp"
