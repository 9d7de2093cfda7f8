#pragma once

#include "distributions.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "fitting.hpp"
#include "measures.hpp"
#include "numeric.hpp"
#include "quadrature.hpp"
#include "simulation.hpp"
#include "spec_parser.hpp"
