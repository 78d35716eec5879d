#pragma once

#include "bpo/classify.hpp"
#include "bpo/common.hpp"
#include "bpo/elimination.hpp"
#include "bpo/hypergraph.hpp"
#include "bpo/instance.hpp"
#include "bpo/instances.hpp"
#include "bpo/io.hpp"
#include "bpo/oracle.hpp"
#include "bpo/solver.hpp"
