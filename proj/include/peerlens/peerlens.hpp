#pragma once

#include "peerlens/beliefs.hpp"
#include "peerlens/decision.hpp"
#include "peerlens/error.hpp"
#include "peerlens/experiments.hpp"
#include "peerlens/io.hpp"
#include "peerlens/parallel.hpp"
#include "peerlens/propcheck.hpp"
#include "peerlens/quadrature.hpp"
#include "peerlens/random.hpp"
#include "peerlens/scenarios.hpp"
#include "peerlens/scoring.hpp"
#include "peerlens/valuation.hpp"
