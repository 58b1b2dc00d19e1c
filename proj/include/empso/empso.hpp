#pragma once

#include "empso/net.hpp"
#include "empso/numerics.hpp"
#include "empso/schrodinger.hpp"
#include "empso/stability.hpp"
#include "empso/swarm.hpp"

#include "empso/runner/bench.hpp"
#include "empso/runner/config.hpp"
#include "empso/runner/csv.hpp"
#include "empso/runner/experiment.hpp"
