#pragma once

#include <optional>
#include <vector>

#include "syncgame/operators.hpp"

namespace syncgame {

/// Ranks of the states that are not almost-sure winning, with the spoiling replies.
struct RankMap {
    std::vector<std::size_t> rank;  // no_layer on winning states
    std::vector<ActionId> spoiler;  // [q * |A| + a]
    std::size_t num_actions = 0;

    bool ranked(StateId q) const { return rank[q] != no_layer; }
    ActionId reply(StateId q, ActionId a) const { return spoiler[q * num_actions + a]; }
};

struct ReachStrategyBound {
    std::vector<ActionId> strategy;  // memoryless player-1 choice per state
    std::size_t n = 0;
    Rational eta;

    /// k·n for the least k with (1 - η^n)^k ≤ ε.
    std::size_t horizon(const Rational& eps) const {
        Rational fail = Rational(1) - pow(eta, static_cast<unsigned long>(n));
        Rational acc(1);
        std::size_t k = 0;
        while (acc > eps) {
            acc *= fail;
            ++k;
            if (k > (std::size_t{1} << 24)) throw ResourceCapError("horizon search did not terminate");
        }
        return k * n;
    }
};

struct AlmostSureReach {
    StateSet region;
    RankMap ranks;
    ReachStrategyBound bound;
    Attractor layers;  // inner fixpoint at the final outer iterate
};

/// νY. μX. t ∪ APre(Y, X)
inline AlmostSureReach almost_sure_reach(const Game& g, const StateSet& t) {
    const std::size_t n = g.num_states(), m = g.num_actions();
    AlmostSureReach out;
    std::vector<StateSet> outer{g.all_states()};
    Attractor inner;
    for (;;) {
        const StateSet& y = outer.back();
        inner = detail::layered_fixpoint(g, t, [&](const StateSet& x) { return apre(g, y, x); });
        if (inner.region == y) break;
        outer.push_back(inner.region);
    }
    const StateSet& region = outer.back();
    out.region = region;

    inner.choice.assign(n, 0);
    for (StateId q = 0; q < n; ++q) {
        if (!region.contains(q)) continue;
        if (inner.layer[q] == 0) {
            inner.choice[q] = cpre_witness(g, q, region).value_or(0);
        } else {
            inner.choice[q] = *apre_witness(g, q, region, inner.within[inner.layer[q] - 1]);
        }
    }
    out.layers = inner;
    out.bound.strategy = inner.choice;
    out.bound.n = n;
    out.bound.eta = g.eta();

    // outer[i] is Y_i; Ω_i = Y_i \ Y_{i+1}
    out.ranks.num_actions = m;
    out.ranks.rank.assign(n, no_layer);
    out.ranks.spoiler.assign(n * m, 0);
    for (std::size_t i = 0; i + 1 < outer.size(); ++i) {
        StateSet omega = outer[i] - outer[i + 1];
        StateSet lower = outer[i].complement();        // Ω_{<i}
        StateSet up_to = outer[i + 1].complement();    // Ω_{≤i}
        omega.for_each([&](StateId q) {
            out.ranks.rank[q] = i;
            for (ActionId a = 0; a < m; ++a) {
                for (ActionId b = 0; b < m; ++b) {
                    const auto& d = g.delta(q, a, b);
                    if (d.support_meets(lower) || d.support_within(up_to)) {
                        out.ranks.spoiler[q * m + a] = b;
                        break;
                    }
                }
            }
        });
    }
    return out;
}

/// νX. t ∩ CPre(X)
inline StateSet sure_safety(const Game& g, const StateSet& t) {
    StateSet x = t;
    for (;;) {
        StateSet next = t & cpre(g, x);
        if (next == x) return x;
        x = std::move(next);
    }
}

namespace detail {

/// μX. νY. { q | ∃a ∀b: (q ∈ t ∧ Supp ⊆ Y) ∨ progress(Supp, X) }, where each reply b
/// may pick its own disjunct.
template <class Allowed, class Progress>
StateSet cobuchi_fixpoint(const Game& g, const StateSet& t, Allowed&& allowed, Progress&& progress) {
    const std::size_t m = g.num_actions();
    auto step = [&](const StateSet& y, const StateSet& x) {
        StateSet out(g.num_states());
        for (StateId q = 0; q < g.num_states(); ++q)
            for (ActionId a = 0; a < m && !out.contains(q); ++a) {
                bool ok = true;
                for (ActionId b = 0; b < m && ok; ++b) {
                    const auto& d = g.delta(q, a, b);
                    ok = allowed(d) && ((t.contains(q) && d.support_within(y)) || progress(d, x));
                }
                if (ok) out.insert(q);
            }
        return out;
    };
    StateSet x = g.empty_set();
    for (;;) {
        StateSet y = g.all_states();
        for (;;) {
            StateSet next = step(y, x);
            if (next == y) break;
            y = std::move(next);
        }
        if (y == x) return x;
        x = std::move(y);
    }
}

}  // namespace detail

/// Every compatible play, with probabilistic branching resolved adversarially, ends in t.
inline StateSet sure_cobuchi(const Game& g, const StateSet& t) {
    return detail::cobuchi_fixpoint(
        g, t, [](const Distribution&) { return true; },
        [](const Distribution& d, const StateSet& x) { return d.support_within(x); });
}

/// ◇□t with probability one: the greatest Z closed under the stepwise fixpoint in which
/// every step stays in Z and progress means reaching X with positive probability.
inline StateSet almost_sure_cobuchi(const Game& g, const StateSet& t) {
    StateSet z = g.all_states();
    for (;;) {
        StateSet next = detail::cobuchi_fixpoint(
            g, t & z, [&](const Distribution& d) { return d.support_within(z); },
            [](const Distribution& d, const StateSet& x) { return d.support_meets(x); });
        if (next == z) return z;
        z = std::move(next);
    }
}

}  // namespace syncgame
