#pragma once

// Everything in one include.

#include "mlqls/bench.hpp"
#include "mlqls/circuit.hpp"
#include "mlqls/cluster.hpp"
#include "mlqls/common.hpp"
#include "mlqls/device.hpp"
#include "mlqls/exact.hpp"
#include "mlqls/flow.hpp"
#include "mlqls/generators.hpp"
#include "mlqls/json_io.hpp"
#include "mlqls/oracle.hpp"
#include "mlqls/qasm.hpp"
#include "mlqls/region.hpp"
#include "mlqls/solution.hpp"
#include "mlqls/srefine/annealing.hpp"
#include "mlqls/srefine/astar.hpp"
#include "mlqls/srefine/cost.hpp"
#include "mlqls/srefine/forward_backward.hpp"
#include "mlqls/srefine/initial_mapper.hpp"
#include "mlqls/srefine/matching.hpp"
#include "mlqls/srefine/srefine.hpp"
#include "mlqls/verify.hpp"
