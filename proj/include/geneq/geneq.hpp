#pragma once

// Umbrella header: exact construction of transforms between quadratic
// forms in the same genus, invertible away from a chosen prime set.

#include "cayley.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "genus.hpp"
#include "json_io.hpp"
#include "matrix.hpp"
#include "padic.hpp"
#include "padic_matrix.hpp"
#include "padiclin.hpp"
#include "pipeline.hpp"
#include "primes.hpp"
#include "quadform.hpp"
#include "rational.hpp"
#include "represent.hpp"
