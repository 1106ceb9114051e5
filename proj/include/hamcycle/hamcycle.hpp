#pragma once

#include "hamcycle/baseline.hpp"
#include "hamcycle/benchmark.hpp"
#include "hamcycle/concentration.hpp"
#include "hamcycle/core.hpp"
#include "hamcycle/cycle_join.hpp"
#include "hamcycle/expansion.hpp"
#include "hamcycle/graph.hpp"
#include "hamcycle/matching.hpp"
#include "hamcycle/oracle.hpp"
#include "hamcycle/path_seq.hpp"
#include "hamcycle/random.hpp"
#include "hamcycle/stats.hpp"
#include "hamcycle/verify.hpp"
