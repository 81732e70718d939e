#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "syncgame/game.hpp"

namespace syncgame {

/// Finite Markov chain over the game's states, obtained by fixing both players.
struct MarkovChain {
    std::vector<Distribution> next;

    std::size_t size() const { return next.size(); }

    /// Fixes pure memoryless strategies: player 1 plays sigma[q]; player 2 replies tau(q, a).
    template <class Reply>
    static MarkovChain from(const Game& g, const std::vector<ActionId>& sigma, Reply&& tau) {
        MarkovChain c;
        for (StateId q = 0; q < g.num_states(); ++q) c.next.push_back(g.delta(q, sigma[q], tau(q, sigma[q])));
        return c;
    }
};

inline StateSet chain_reachable(const MarkovChain& c, const StateSet& from) {
    StateSet seen = from;
    std::vector<StateId> stack = from.members();
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (const auto& e : c.next[q].entries())
            if (!seen.contains(e.first)) {
                seen.insert(e.first);
                stack.push_back(e.first);
            }
    }
    return seen;
}

/// Strongly connected components of the support graph (Tarjan), each with a flag telling
/// whether it is bottom and whether it contains a cycle.
struct ChainComponent {
    StateSet members;
    bool bottom = false;
    bool cyclic = false;
};

inline std::vector<ChainComponent> chain_components(const MarkovChain& c) {
    const std::size_t n = c.size();
    std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), comp(n, SIZE_MAX);
    std::vector<bool> on_stack(n, false);
    std::vector<StateId> stack;
    std::vector<ChainComponent> out;
    std::size_t counter = 0;

    std::function<void(StateId)> visit = [&](StateId v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (const auto& e : c.next[v].entries()) {
            StateId w = e.first;
            if (index[w] == SIZE_MAX) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            ChainComponent cc{StateSet(n), true, false};
            StateId w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                cc.members.insert(w);
                comp[w] = out.size();
            } while (w != v);
            out.push_back(std::move(cc));
        }
    };
    for (StateId v = 0; v < n; ++v)
        if (index[v] == SIZE_MAX) visit(v);

    for (StateId v = 0; v < n; ++v)
        for (const auto& e : c.next[v].entries()) {
            if (comp[e.first] != comp[v]) out[comp[v]].bottom = false;
            else out[comp[v]].cyclic = true;
        }
    return out;
}

/// Exact Pr(◇t) from every state, by solving the linear system on the states that can reach t.
inline std::vector<Rational> reach_probability(const MarkovChain& c, const StateSet& t) {
    const std::size_t n = c.size();
    // states that can reach t
    StateSet can(n);
    can |= t;
    for (bool grew = true; grew;) {
        grew = false;
        for (StateId q = 0; q < n; ++q)
            if (!can.contains(q) && c.next[q].support_meets(can)) {
                can.insert(q);
                grew = true;
            }
    }
    std::vector<StateId> unknowns;
    std::vector<std::size_t> col(n, SIZE_MAX);
    for (StateId q = 0; q < n; ++q)
        if (can.contains(q) && !t.contains(q)) {
            col[q] = unknowns.size();
            unknowns.push_back(q);
        }
    const std::size_t k = unknowns.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1));
    for (std::size_t i = 0; i < k; ++i) {
        StateId q = unknowns[i];
        a[i][i] = Rational(1);
        for (const auto& [s, p] : c.next[q].entries()) {
            if (t.contains(s)) a[i][k] += p;
            else if (col[s] != SIZE_MAX) a[i][col[s]] -= p;
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t piv = i;
        while (a[piv][i].is_zero()) ++piv;
        std::swap(a[i], a[piv]);
        Rational inv = Rational(1) / a[i][i];
        for (std::size_t j = i; j <= k; ++j) a[i][j] *= inv;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == i || a[r][i].is_zero()) continue;
            Rational f = a[r][i];
            for (std::size_t j = i; j <= k; ++j) a[r][j] -= f * a[i][j];
        }
    }
    std::vector<Rational> out(n);
    for (StateId q = 0; q < n; ++q) {
        if (t.contains(q)) out[q] = Rational(1);
        else if (col[q] != SIZE_MAX) out[q] = a[col[q]][k];
    }
    return out;
}

/// Exact Pr(◇^{≤h} t) from every state.
inline std::vector<Rational> bounded_reach_probability(const MarkovChain& c, const StateSet& t, std::size_t h) {
    const std::size_t n = c.size();
    std::vector<Rational> v(n);
    t.for_each([&](StateId q) { v[q] = Rational(1); });
    for (std::size_t step = 0; step < h; ++step) {
        std::vector<Rational> w(n);
        for (StateId q = 0; q < n; ++q) {
            if (t.contains(q)) {
                w[q] = Rational(1);
                continue;
            }
            for (const auto& [s, p] : c.next[q].entries()) w[q] += p * v[s];
        }
        v = std::move(w);
    }
    return v;
}

enum class StateObjective { as_reach, sure_safety, as_cobuchi, sure_cobuchi };

inline const char* to_string(StateObjective o) {
    switch (o) {
        case StateObjective::as_reach: return "as-reach";
        case StateObjective::sure_safety: return "sure-safety";
        case StateObjective::as_cobuchi: return "as-cobuchi";
        case StateObjective::sure_cobuchi: return "sure-cobuchi";
    }
    return "?";
}

inline StateObjective parse_objective(const std::string& s) {
    if (s == "as-reach") return StateObjective::as_reach;
    if (s == "sure-safety") return StateObjective::sure_safety;
    if (s == "as-cobuchi") return StateObjective::as_cobuchi;
    if (s == "sure-cobuchi") return StateObjective::sure_cobuchi;
    throw InputError("unknown objective \"" + s + "\"");
}

inline constexpr std::uint64_t default_oracle_cap = 10'000'000;

namespace detail {

/// States of the chain from which the objective holds.
inline StateSet chain_verdicts(const MarkovChain& c, const StateSet& t, StateObjective obj) {
    const std::size_t n = c.size();
    MarkovChain work = c;
    if (obj == StateObjective::as_reach)
        t.for_each([&](StateId q) { work.next[q] = Distribution::dirac(q); });
    auto comps = chain_components(work);

    // "bad" states: being reachable from them makes the start lose
    StateSet bad(n);
    for (const auto& cc : comps) {
        switch (obj) {
            case StateObjective::as_reach:
            case StateObjective::as_cobuchi:
                if (cc.bottom && !cc.members.subset_of(t)) bad |= cc.members;
                break;
            case StateObjective::sure_cobuchi:
                if (cc.cyclic) bad |= cc.members - t;
                break;
            case StateObjective::sure_safety:
                break;
        }
    }
    if (obj == StateObjective::sure_safety) bad = t.complement();

    StateSet win(n);
    for (StateId q = 0; q < n; ++q)
        if (!chain_reachable(work, StateSet::singleton(n, q)).intersects(bad)) win.insert(q);
    return win;
}

inline bool next_assignment(std::vector<ActionId>& v, std::size_t m) {
    for (auto& x : v) {
        if (++x < m) return true;
        x = 0;
    }
    return false;
}

}  // namespace detail

/// Winning region by exhaustive enumeration of pure memoryless strategies for both players.
/// Player 2's reply only matters against the action player 1 actually plays, so for each
/// player-1 strategy one reply per state is enumerated.
inline StateSet brute_force_statebased(const Game& g, const StateSet& t, StateObjective obj,
                                       std::uint64_t cap = default_oracle_cap) {
    const std::size_t n = g.num_states(), m = g.num_actions();
    double pairs = std::pow(static_cast<double>(m), 2.0 * static_cast<double>(n));
    if (pairs > static_cast<double>(cap))
        throw ResourceCapError("oracle enumeration exceeds " + std::to_string(cap) + " strategy pairs");

    StateSet win(n);
    std::vector<ActionId> sigma(n, 0);
    do {
        StateSet survives = g.all_states();
        std::vector<ActionId> reply(n, 0);
        do {
            auto chain = MarkovChain::from(g, sigma, [&](StateId q, ActionId) { return reply[q]; });
            survives &= detail::chain_verdicts(chain, t, obj);
            if (survives.subset_of(win)) break;
        } while (detail::next_assignment(reply, m));
        win |= survives;
    } while (detail::next_assignment(sigma, m));
    return win;
}

}  // namespace syncgame
