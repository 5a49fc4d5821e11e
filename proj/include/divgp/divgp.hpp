// SPDX-License-Identifier: MIT

#pragma once

#include "bench.hpp"
#include "bottom_up.hpp"
#include "creator.hpp"
#include "dataset.hpp"
#include "distance.hpp"
#include "evolution.hpp"
#include "experiment.hpp"
#include "format.hpp"
#include "hash.hpp"
#include "interpreter.hpp"
#include "metrics.hpp"
#include "node.hpp"
#include "objectives.hpp"
#include "pareto.hpp"
#include "problems.hpp"
#include "random.hpp"
#include "tree.hpp"
#include "variation.hpp"
