#pragma once

#include "syncgame/errors.hpp"
#include "syncgame/rational.hpp"
#include "syncgame/state_set.hpp"
#include "syncgame/game.hpp"
#include "syncgame/io.hpp"
#include "syncgame/operators.hpp"
#include "syncgame/statebased.hpp"
#include "syncgame/oracle.hpp"
#include "syncgame/graph.hpp"
#include "syncgame/subsets.hpp"
#include "syncgame/arena.hpp"
#include "syncgame/solver.hpp"
#include "syncgame/simulate.hpp"
#include "syncgame/strategies.hpp"
#include "syncgame/testgen.hpp"
