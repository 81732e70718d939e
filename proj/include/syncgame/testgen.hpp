#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "syncgame/game.hpp"

namespace syncgame {

struct RandomGameOptions {
    std::size_t states = 3;
    std::size_t actions = 2;
    std::size_t branching = 2;     // max support size of each δ(q,a,b)
    std::size_t granularity = 4;   // probabilities are multiples of 1/granularity
    bool deterministic = false;
    bool mdp = false;              // δ(q,a,b) independent of b
};

/// Seed-deterministic random game with a random nonempty target.
inline Game random_game(std::uint64_t seed, const RandomGameOptions& opt) {
    if (opt.states == 0 || opt.actions == 0) throw InputError("random games need at least one state and one action");
    if (opt.branching == 0 || opt.granularity == 0) throw InputError("branching and granularity must be positive");
    const std::size_t n = opt.states, m = opt.actions;
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };

    auto draw = [&]() {
        std::size_t k = opt.deterministic ? 1 : 1 + pick(std::min({opt.branching, n, opt.granularity}));
        std::vector<StateId> pool(n);
        for (StateId q = 0; q < n; ++q) pool[q] = q;
        std::shuffle(pool.begin(), pool.end(), rng);
        // k positive parts summing to the granularity: k-1 distinct cut points.
        std::vector<std::size_t> cuts;
        if (k > 1) {
            std::vector<std::size_t> points(opt.granularity - 1);
            for (std::size_t i = 0; i < points.size(); ++i) points[i] = i + 1;
            std::shuffle(points.begin(), points.end(), rng);
            cuts.assign(points.begin(), points.begin() + static_cast<long>(k - 1));
            std::sort(cuts.begin(), cuts.end());
        }
        cuts.push_back(opt.granularity);
        std::vector<Distribution::Entry> e;
        std::size_t prev = 0;
        for (std::size_t i = 0; i < k; ++i) {
            e.emplace_back(pool[i], Rational(static_cast<long>(cuts[i] - prev), static_cast<long>(opt.granularity)));
            prev = cuts[i];
        }
        return Distribution(std::move(e));
    };

    std::vector<Distribution> delta;
    delta.reserve(n * m * m);
    for (StateId q = 0; q < n; ++q)
        for (ActionId a = 0; a < m; ++a) {
            if (opt.mdp) {
                Distribution d = draw();
                for (ActionId b = 0; b < m; ++b) delta.push_back(d);
            } else {
                for (ActionId b = 0; b < m; ++b) delta.push_back(draw());
            }
        }
    StateSet target(n);
    for (StateId q = 0; q < n; ++q)
        if (rng() & 1u) target.insert(q);
    if (target.empty()) target.insert(pick(n));

    std::vector<std::string> states, actions;
    for (std::size_t i = 0; i < n; ++i) states.push_back("q" + std::to_string(i + 1));
    for (std::size_t i = 0; i < m; ++i) actions.push_back("a" + std::to_string(i + 1));
    return Game(std::move(states), std::move(actions), std::move(delta), std::move(target));
}

inline Game random_game(std::uint64_t seed, std::size_t n, std::size_t a, std::size_t branching,
                        std::size_t granularity) {
    RandomGameOptions opt;
    opt.states = n;
    opt.actions = a;
    opt.branching = branching;
    opt.granularity = granularity;
    opt.deterministic = branching == 1;
    return random_game(seed, opt);
}

struct ReducedGame {
    Game game;
    StateSet target;   // {q_sharp}
    StateId sharp_state = 0;
    StateId sink_state = 0;
    ActionId sharp_action = 0;
};

namespace detail {

inline std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    std::string name = base;
    for (int i = 1; std::find(taken.begin(), taken.end(), name) != taken.end(); ++i) name = base + std::to_string(i);
    return name;
}

}  // namespace detail

/// Branches of the MDP become player-2 choices: reply j picks the min(j, k-1)-th support
/// state of δ(q,a). A fresh action `#` leads from t to q_sharp and elsewhere to an absorbing
/// sink; q_sharp returns to q0 on every action. The new target is {q_sharp}.
inline ReducedGame mdp_to_weakly_game(const Game& mdp, const StateSet& t, StateId q0) {
    if (!is_mdp(mdp)) throw InputError("reduction needs a game in which every state belongs to player 1");
    const std::size_t n = mdp.num_states(), m = mdp.num_actions();
    if (q0 >= n) throw InputError("initial state outside the game");
    const std::size_t m2 = m + 1;
    for (StateId q = 0; q < n; ++q)
        for (ActionId a = 0; a < m; ++a)
            if (mdp.delta(q, a, 0).entries().size() > m2)
                throw InputError("branch fan-out at " + mdp.state_name(q) + " exceeds the action budget");

    std::vector<std::string> states = mdp.state_names();
    std::string sharp_name = detail::fresh_name(states, "q_sharp");
    states.push_back(sharp_name);
    std::string sink_name = detail::fresh_name(states, "q_sink");
    states.push_back(sink_name);
    std::vector<std::string> actions = mdp.action_names();
    actions.push_back(detail::fresh_name(actions, "#"));

    ReducedGame out;
    out.sharp_state = n;
    out.sink_state = n + 1;
    out.sharp_action = m;
    std::vector<Distribution> delta;
    for (StateId q = 0; q < n + 2; ++q)
        for (ActionId a = 0; a < m2; ++a)
            for (ActionId b = 0; b < m2; ++b) {
                if (q == out.sharp_state) {
                    delta.push_back(Distribution::dirac(q0));
                } else if (q == out.sink_state) {
                    delta.push_back(Distribution::dirac(out.sink_state));
                } else if (a == out.sharp_action) {
                    delta.push_back(Distribution::dirac(t.contains(q) ? out.sharp_state : out.sink_state));
                } else {
                    const auto& branches = mdp.delta(q, a, 0).entries();
                    delta.push_back(Distribution::dirac(branches[std::min<std::size_t>(b, branches.size() - 1)].first));
                }
            }
    StateSet target(n + 2);
    target.insert(out.sharp_state);
    out.game = Game(std::move(states), std::move(actions), std::move(delta), target);
    out.target = std::move(target);
    return out;
}

}  // namespace syncgame
