#pragma once

#include "frechet/continuation.hpp"
#include "frechet/contraction.hpp"
#include "frechet/curve.hpp"
#include "frechet/error.hpp"
#include "frechet/inverse.hpp"
#include "frechet/maps.hpp"
#include "frechet/metric.hpp"
#include "frechet/ode.hpp"
#include "frechet/operator.hpp"
#include "frechet/point.hpp"
#include "frechet/rational.hpp"
#include "frechet/rng.hpp"
