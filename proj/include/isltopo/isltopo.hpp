#pragma once

#include "isltopo/error.hpp"
#include "isltopo/orbit.hpp"
#include "isltopo/graph.hpp"
#include "isltopo/feasibility.hpp"
#include "isltopo/laplacian.hpp"
#include "isltopo/eigensolver.hpp"
#include "isltopo/metrics.hpp"
#include "isltopo/cheeger.hpp"
#include "isltopo/spectral_opt.hpp"
#include "isltopo/matching.hpp"
#include "isltopo/rounding.hpp"
#include "isltopo/heuristic.hpp"
#include "isltopo/config.hpp"
#include "isltopo/experiment.hpp"
#include "isltopo/results_io.hpp"
