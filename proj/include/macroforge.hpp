#pragma once

#include "macroforge/action_algebra.hpp"
#include "macroforge/action_graph.hpp"
#include "macroforge/bench.hpp"
#include "macroforge/core_model.hpp"
#include "macroforge/domains.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/facts.hpp"
#include "macroforge/instance.hpp"
#include "macroforge/io.hpp"
#include "macroforge/library.hpp"
#include "macroforge/log.hpp"
#include "macroforge/macro_engine.hpp"
#include "macroforge/solver.hpp"
