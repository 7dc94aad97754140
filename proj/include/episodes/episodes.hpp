#pragma once

#include "episodes/core.hpp"
#include "episodes/oracle.hpp"
#include "episodes/parallel_miner.hpp"
#include "episodes/serial_miner.hpp"
#include "episodes/synfire.hpp"
#include "episodes/simulator.hpp"
#include "episodes/significance.hpp"
#include "episodes/similarity.hpp"
#include "episodes/json_io.hpp"
