#pragma once

#include <vector>

#include "syncgame/operators.hpp"

namespace syncgame {

/// A subgame of G×[r], with local states mapped back to product indices ⟨q,i⟩ = i·n + q.
/// `played[x * |A| + a]` is the action of G that realizes local action a at x.
struct Arena {
    Game game;
    std::size_t n = 0;
    std::size_t period = 1;
    std::vector<StateId> origin;
    std::vector<StateId> local;
    std::vector<ActionId> played;

    std::size_t universe() const { return n * period; }

    StateSet domain() const { return to_product(game.all_states()); }

    StateSet to_local(const StateSet& s) const {
        StateSet out(origin.size());
        s.for_each([&](StateId x) {
            if (x < local.size() && local[x] != no_layer) out.insert(local[x]);
        });
        return out;
    }
    StateSet to_product(const StateSet& s) const {
        StateSet out(universe());
        s.for_each([&](StateId x) { out.insert(origin[x]); });
        return out;
    }
    ActionId played_action(StateId x, ActionId a) const { return played[x * game.num_actions() + a]; }
};

/// G×[r] restricted to s (a set of product indices).
inline Arena make_arena(const Game& g, std::size_t r, const StateSet& s,
                        std::size_t max_states = default_max_product_states) {
    Game h = product(g, r, max_states);
    Subgame sub = restrict_subgame(h, s);
    Arena a;
    a.n = g.num_states();
    a.period = r;
    a.origin = std::move(sub.origin);
    a.local = std::move(sub.local);
    a.played = std::move(sub.played_action);
    a.game = std::move(sub.game);
    return a;
}

/// Nested restriction: (A)↾[s] for s ⊆ A's domain, given as product indices.
inline Arena restrict_arena(const Arena& outer, const StateSet& s) {
    Subgame sub = restrict_subgame(outer.game, outer.to_local(s));
    const std::size_t m = outer.game.num_actions();
    Arena a;
    a.n = outer.n;
    a.period = outer.period;
    a.local.assign(outer.universe(), no_layer);
    for (StateId x = 0; x < sub.origin.size(); ++x) {
        StateId p = outer.origin[sub.origin[x]];
        a.origin.push_back(p);
        a.local[p] = x;
        for (ActionId act = 0; act < m; ++act)
            a.played.push_back(outer.played_action(sub.origin[x], sub.played_action[x * m + act]));
    }
    a.game = std::move(sub.game);
    return a;
}

/// The same arena unrolled to period p (a multiple of the current one): ⟨q,j⟩ behaves like
/// ⟨q, j mod r⟩ with counters taken mod p.
inline Arena lift_arena(const Arena& a, std::size_t p, std::size_t max_states = default_max_product_states) {
    const std::size_t r = a.period, n = a.n, m = a.game.num_actions();
    if (p % r != 0) throw InvariantError("lift period must be a multiple of the arena period");
    if (p > max_states / n) throw ResourceCapError("lifted arena exceeds " + std::to_string(max_states) + " states");
    Arena out;
    out.n = n;
    out.period = p;
    out.local.assign(n * p, no_layer);
    for (std::size_t j = 0; j < p; ++j)
        for (StateId q = 0; q < n; ++q)
            if (a.local[product_index(n, q, j % r)] != no_layer) {
                out.local[product_index(n, q, j)] = out.origin.size();
                out.origin.push_back(product_index(n, q, j));
            }
    std::vector<std::string> names;
    std::vector<Distribution> delta;
    StateSet target(out.origin.size());
    for (StateId x = 0; x < out.origin.size(); ++x) {
        StateId q = product_base(n, out.origin[x]);
        std::size_t j = product_counter(n, out.origin[x]);
        StateId src = a.local[product_index(n, q, j % r)];
        names.push_back(product_name(a.game.state_name(src).substr(0, a.game.state_name(src).rfind('@')), j));
        if (j == 0 && a.game.target().contains(src)) target.insert(x);
        std::size_t next = (j + p - 1) % p;
        for (ActionId act = 0; act < m; ++act) {
            out.played.push_back(a.played_action(src, act));
            for (ActionId b = 0; b < m; ++b) {
                std::vector<Distribution::Entry> e;
                for (const auto& [y, pr] : a.game.delta(src, act, b).entries())
                    e.emplace_back(out.local[product_index(n, product_base(n, a.origin[y]), next)], pr);
                delta.push_back(Distribution(std::move(e)));
            }
        }
    }
    out.game = Game(std::move(names), a.game.action_names(), std::move(delta), std::move(target));
    return out;
}

}  // namespace syncgame
