#pragma once

// Umbrella header: a laboratory for single-point-reassignment k-means local
// search over a dual scalar field (exact rational / binary64), with the
// worst-case instance family on the line and a Gaussian perturbation harness.

#include "hartigan/clustering.hpp"
#include "hartigan/errors.hpp"
#include "hartigan/gadget.hpp"
#include "hartigan/geometry.hpp"
#include "hartigan/io.hpp"
#include "hartigan/local_search.hpp"
#include "hartigan/point_set.hpp"
#include "hartigan/rational.hpp"
#include "hartigan/rng.hpp"
#include "hartigan/scalar.hpp"
#include "hartigan/smoothed.hpp"
