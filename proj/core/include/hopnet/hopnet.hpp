#pragma once

#include "hopnet/error.hpp"
#include "hopnet/experiment_harness.hpp"
#include "hopnet/feature_map.hpp"
#include "hopnet/graph_codec.hpp"
#include "hopnet/hopfield_core.hpp"
#include "hopnet/invariant_subspace.hpp"
#include "hopnet/io.hpp"
#include "hopnet/learning_rules.hpp"
#include "hopnet/rng.hpp"
#include "hopnet/svm_solvers.hpp"
#include "hopnet/worker_pool.hpp"
