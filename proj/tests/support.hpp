#pragma once

#include <string>
#include <vector>

#include "syncgame/syncgame.hpp"

namespace testing {

using namespace syncgame;

inline Game instance(const std::string& name) {
    return load_game(std::string(SYNCGAME_INSTANCE_DIR) + "/" + name + ".json");
}

inline StateSet set(const Game& g, const std::vector<std::string>& names) { return g.set_of(names); }

inline std::vector<std::string> names(const Game& g, const StateSet& s) { return g.names_of(s); }

/// All subsets of the game's states, including the empty set.
inline std::vector<StateSet> all_subsets(const Game& g) {
    const std::size_t n = g.num_states();
    std::vector<StateSet> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        StateSet s(n);
        for (StateId q = 0; q < n; ++q)
            if (bits >> q & 1u) s.insert(q);
        out.push_back(std::move(s));
    }
    return out;
}

/// Mixed deterministic and stochastic games for the property suites.
inline Game suite_game(std::uint64_t seed, std::size_t max_states, std::size_t actions = 2) {
    RandomGameOptions opt;
    opt.states = 1 + seed % max_states;
    opt.actions = actions;
    opt.branching = 1 + (seed / max_states) % 3;
    opt.granularity = 4;
    opt.deterministic = seed % 3 == 0;
    return random_game(seed, opt);
}

inline Game deterministic_game(std::uint64_t seed, std::size_t max_states) {
    RandomGameOptions opt;
    opt.states = 1 + seed % max_states;
    opt.deterministic = true;
    return random_game(seed, opt);
}

inline Game mdp_game(std::uint64_t seed, std::size_t max_states) {
    RandomGameOptions opt;
    opt.states = 1 + seed % max_states;
    opt.branching = 2;
    opt.granularity = 2;
    opt.mdp = true;
    return random_game(seed, opt);
}

}  // namespace testing
