#pragma once

#include "bounds.hpp"
#include "core.hpp"
#include "datasets.hpp"
#include "game.hpp"
#include "simplex.hpp"
#include "slack.hpp"
#include "solver.hpp"
