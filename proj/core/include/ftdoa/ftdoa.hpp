#pragma once

#include "ftdoa/array_sim.hpp"
#include "ftdoa/error.hpp"
#include "ftdoa/experiment.hpp"
#include "ftdoa/failure_detect.hpp"
#include "ftdoa/hankel.hpp"
#include "ftdoa/linalg.hpp"
#include "ftdoa/pencil.hpp"
#include "ftdoa/snapshot_io.hpp"
#include "ftdoa/svt.hpp"
