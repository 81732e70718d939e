#pragma once

#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "syncgame/game.hpp"

namespace syncgame {

enum class Player { one = 1, two = 2 };

inline constexpr std::size_t no_layer = std::numeric_limits<std::size_t>::max();

/// { q | ∃a ∀b: Supp(δ(q,a,b)) ⊆ s }
inline StateSet cpre(const Game& g, const StateSet& s) {
    const std::size_t m = g.num_actions();
    StateSet out(g.num_states());
    for (StateId q = 0; q < g.num_states(); ++q) {
        for (ActionId a = 0; a < m; ++a) {
            bool ok = true;
            for (ActionId b = 0; b < m && ok; ++b) ok = g.delta(q, a, b).support_within(s);
            if (ok) {
                out.insert(q);
                break;
            }
        }
    }
    return out;
}

/// Player 1: { q | ∃a ∀b: Supp ∩ s ≠ ∅ }. Player 2: { q | ∀a ∃b: Supp ∩ s ≠ ∅ }.
inline StateSet pospre(const Game& g, Player who, const StateSet& s) {
    const std::size_t m = g.num_actions();
    StateSet out(g.num_states());
    for (StateId q = 0; q < g.num_states(); ++q) {
        bool win = who == Player::two;
        for (ActionId a = 0; a < m; ++a) {
            bool all = true, any = false;
            for (ActionId b = 0; b < m; ++b) {
                bool hit = g.delta(q, a, b).support_meets(s);
                all = all && hit;
                any = any || hit;
            }
            if (who == Player::one && all) { win = true; break; }
            if (who == Player::two && !any) { win = false; break; }
        }
        if (win) out.insert(q);
    }
    return out;
}

/// { q | ∃a ∀b: Supp ⊆ y ∧ Supp ∩ x ≠ ∅ }
inline StateSet apre(const Game& g, const StateSet& y, const StateSet& x) {
    const std::size_t m = g.num_actions();
    StateSet out(g.num_states());
    for (StateId q = 0; q < g.num_states(); ++q) {
        for (ActionId a = 0; a < m; ++a) {
            bool ok = true;
            for (ActionId b = 0; b < m && ok; ++b) {
                const auto& d = g.delta(q, a, b);
                ok = d.support_within(y) && d.support_meets(x);
            }
            if (ok) {
                out.insert(q);
                break;
            }
        }
    }
    return out;
}

/// First action witnessing q ∈ cpre(g, s), if any.
inline std::optional<ActionId> cpre_witness(const Game& g, StateId q, const StateSet& s) {
    for (ActionId a = 0; a < g.num_actions(); ++a) {
        bool ok = true;
        for (ActionId b = 0; b < g.num_actions() && ok; ++b) ok = g.delta(q, a, b).support_within(s);
        if (ok) return a;
    }
    return std::nullopt;
}

inline std::optional<ActionId> apre_witness(const Game& g, StateId q, const StateSet& y, const StateSet& x) {
    for (ActionId a = 0; a < g.num_actions(); ++a) {
        bool ok = true;
        for (ActionId b = 0; b < g.num_actions() && ok; ++b) {
            const auto& d = g.delta(q, a, b);
            ok = d.support_within(y) && d.support_meets(x);
        }
        if (ok) return a;
    }
    return std::nullopt;
}

inline std::optional<ActionId> pospre1_witness(const Game& g, StateId q, const StateSet& s) {
    for (ActionId a = 0; a < g.num_actions(); ++a) {
        bool ok = true;
        for (ActionId b = 0; b < g.num_actions() && ok; ++b) ok = g.delta(q, a, b).support_meets(s);
        if (ok) return a;
    }
    return std::nullopt;
}

/// Least fixpoint with per-state entry layers and a memoryless strategy for the attracting
/// player. For player 1, `choice[q]` is the action used at q. For player 2 (positive
/// attractor only), `choice[q * |A| + a]` is the reply to action a.
struct Attractor {
    StateSet region;
    std::vector<std::size_t> layer;
    std::vector<ActionId> choice;
    std::size_t depth = 0;
    std::vector<StateSet> within;  // within[i] = states with layer <= i
};

namespace detail {

template <class Step>
Attractor layered_fixpoint(const Game& g, const StateSet& t, Step&& step) {
    Attractor out;
    out.region = t;
    out.layer.assign(g.num_states(), no_layer);
    t.for_each([&](StateId q) { out.layer[q] = 0; });
    out.within.push_back(out.region);
    for (std::size_t i = 1;; ++i) {
        StateSet next = step(out.region) | out.region;
        StateSet fresh = next - out.region;
        if (fresh.empty()) break;
        fresh.for_each([&](StateId q) { out.layer[q] = i; });
        out.region = std::move(next);
        out.within.push_back(out.region);
        out.depth = i;
    }
    return out;
}

}  // namespace detail

/// μX. CPre(X) ∪ t
inline Attractor attractor(const Game& g, const StateSet& t) {
    auto out = detail::layered_fixpoint(g, t, [&](const StateSet& x) { return cpre(g, x); });
    out.choice.assign(g.num_states(), 0);
    for (StateId q = 0; q < g.num_states(); ++q) {
        if (out.layer[q] == no_layer || out.layer[q] == 0) continue;
        out.choice[q] = *cpre_witness(g, q, out.within[out.layer[q] - 1]);
    }
    return out;
}

/// μX. PosPre_who(X) ∪ t
inline Attractor pos_attractor(const Game& g, Player who, const StateSet& t) {
    auto out = detail::layered_fixpoint(g, t, [&](const StateSet& x) { return pospre(g, who, x); });
    const std::size_t m = g.num_actions();
    out.choice.assign(who == Player::one ? g.num_states() : g.num_states() * m, 0);
    for (StateId q = 0; q < g.num_states(); ++q) {
        if (out.layer[q] == no_layer || out.layer[q] == 0) continue;
        const StateSet& below = out.within[out.layer[q] - 1];
        if (who == Player::one) {
            out.choice[q] = *pospre1_witness(g, q, below);
        } else {
            for (ActionId a = 0; a < m; ++a)
                for (ActionId b = 0; b < m; ++b)
                    if (g.delta(q, a, b).support_meets(below)) {
                        out.choice[q * m + a] = b;
                        break;
                    }
        }
    }
    return out;
}

/// ∀q∈s ∃a,b: δ(q,a,b)(s) = 1
inline bool induces_subgame(const Game& g, const StateSet& s) {
    const std::size_t m = g.num_actions();
    bool ok = true;
    s.for_each([&](StateId q) {
        bool found = false;
        for (ActionId a = 0; a < m && !found; ++a)
            for (ActionId b = 0; b < m && !found; ++b) found = g.delta(q, a, b).support_within(s);
        ok = ok && found;
    });
    return ok;
}

/// Player 1: ∀q∈s ∀a ∃b stays in s. Player 2: ∀q∈s ∃a ∀b stays in s.
inline bool is_trap(const Game& g, Player who, const StateSet& s) {
    const std::size_t m = g.num_actions();
    if (who == Player::two) return s.subset_of(cpre(g, s));
    bool ok = true;
    s.for_each([&](StateId q) {
        for (ActionId a = 0; a < m && ok; ++a) {
            bool found = false;
            for (ActionId b = 0; b < m && !found; ++b) found = g.delta(q, a, b).support_within(s);
            ok = found;
        }
    });
    return ok;
}

/// G↾[S] with its states renumbered in increasing original order.
struct Subgame {
    Game game;
    std::vector<StateId> origin;         // local state -> original state
    std::vector<StateId> local;          // original state -> local state (npos outside)
    std::vector<ActionId> played_action;  // (local q, a) -> action actually taken in the original game

    StateSet to_local(const StateSet& s) const {
        StateSet out(origin.size());
        s.for_each([&](StateId q) {
            if (q < local.size() && local[q] != no_layer) out.insert(local[q]);
        });
        return out;
    }
    StateSet to_origin(const StateSet& s, std::size_t universe) const {
        StateSet out(universe);
        s.for_each([&](StateId q) { out.insert(origin[q]); });
        return out;
    }
};

inline Subgame restrict_subgame(const Game& g, const StateSet& s) {
    const std::size_t n = g.num_states(), m = g.num_actions();
    Subgame sub;
    sub.local.assign(n, no_layer);
    s.for_each([&](StateId q) {
        sub.local[q] = sub.origin.size();
        sub.origin.push_back(q);
    });
    if (sub.origin.empty()) throw InputError("cannot restrict to an empty set");

    auto relabel = [&](const Distribution& d) {
        std::vector<Distribution::Entry> e;
        for (const auto& [q, p] : d.entries()) e.emplace_back(sub.local[q], p);
        return Distribution(std::move(e));
    };

    std::vector<Distribution> delta;
    delta.reserve(sub.origin.size() * m * m);
    std::vector<std::string> names;
    StateSet target(sub.origin.size());
    for (StateId lq = 0; lq < sub.origin.size(); ++lq) {
        StateId q = sub.origin[lq];
        names.push_back(g.state_name(q));
        if (g.target().contains(q)) target.insert(lq);

        std::vector<std::optional<ActionId>> keeper(m);
        std::optional<ActionId> fallback;
        for (ActionId a = 0; a < m; ++a) {
            for (ActionId b = 0; b < m; ++b)
                if (g.delta(q, a, b).support_within(s)) {
                    keeper[a] = b;
                    break;
                }
            if (keeper[a] && !fallback) fallback = a;
        }
        if (!fallback)
            throw InputError("set does not induce a subgame: state \"" + g.state_name(q) + "\" cannot stay");
        for (ActionId a = 0; a < m; ++a) {
            ActionId used = keeper[a] ? a : *fallback;
            sub.played_action.push_back(used);
            for (ActionId b = 0; b < m; ++b) {
                const auto& d = g.delta(q, used, b);
                delta.push_back(relabel(d.support_within(s) ? d : g.delta(q, used, *keeper[used])));
            }
        }
    }
    sub.game = Game(std::move(names), g.action_names(), std::move(delta), std::move(target));
    return sub;
}

/// Default cap on the number of product states.
inline constexpr std::size_t default_max_product_states = std::size_t{1} << 12;

/// Product states ⟨q,i⟩ of G×[r] are indexed i·n + q.
inline StateId product_index(std::size_t n, StateId q, std::size_t counter) { return counter * n + q; }
inline StateId product_base(std::size_t n, StateId p) { return p % n; }
inline std::size_t product_counter(std::size_t n, StateId p) { return p / n; }

inline std::string product_name(const std::string& base, std::size_t counter) {
    return base + "@" + std::to_string(counter);
}

/// G×[r]: every transition decrements the counter mod r; target T×{0}.
inline Game product(const Game& g, std::size_t r, std::size_t max_states = default_max_product_states) {
    if (r == 0) throw InputError("product period must be positive");
    const std::size_t n = g.num_states(), m = g.num_actions();
    if (r > max_states / n || r * n > max_states)
        throw ResourceCapError("product G x [" + std::to_string(r) + "] exceeds " +
                               std::to_string(max_states) + " states");
    std::vector<std::string> names;
    names.reserve(r * n);
    for (std::size_t i = 0; i < r; ++i)
        for (StateId q = 0; q < n; ++q) names.push_back(product_name(g.state_name(q), i));
    std::vector<Distribution> delta;
    delta.reserve(r * n * m * m);
    for (std::size_t i = 0; i < r; ++i) {
        std::size_t next = (i + r - 1) % r;
        for (StateId q = 0; q < n; ++q)
            for (ActionId a = 0; a < m; ++a)
                for (ActionId b = 0; b < m; ++b) {
                    std::vector<Distribution::Entry> e;
                    for (const auto& [s, p] : g.delta(q, a, b).entries())
                        e.emplace_back(product_index(n, s, next), p);
                    delta.push_back(Distribution(std::move(e)));
                }
    }
    StateSet target(r * n);
    g.target().for_each([&](StateId q) { target.insert(product_index(n, q, 0)); });
    return Game(std::move(names), g.action_names(), std::move(delta), std::move(target));
}

/// { ⟨q,i⟩ | i < r, ⟨q, i mod p⟩ ∈ s } for s over Q×[p].
inline StateSet expand_set(const StateSet& s, std::size_t n, std::size_t p, std::size_t r) {
    if (p == 0 || r % p != 0) throw InputError("expansion period must be a multiple of the current period");
    if (s.universe() != n * p) throw InvariantError("expand_set: universe mismatch");
    StateSet out(n * r);
    s.for_each([&](StateId x) {
        StateId q = product_base(n, x);
        for (std::size_t i = product_counter(n, x); i < r; i += p) out.insert(product_index(n, q, i));
    });
    return out;
}

/// Base states q with ⟨q,i⟩ ∈ s.
inline StateSet slice(const StateSet& s, std::size_t n, std::size_t i) {
    StateSet out(n);
    for (StateId q = 0; q < n; ++q)
        if (s.contains(product_index(n, q, i))) out.insert(q);
    return out;
}

/// u × {i} over Q×[r].
inline StateSet place(const StateSet& u, std::size_t r, std::size_t i) {
    const std::size_t n = u.universe();
    StateSet out(n * r);
    u.for_each([&](StateId q) { out.insert(product_index(n, q, i)); });
    return out;
}

/// Union of the base projections of s.
inline StateSet project(const StateSet& s, std::size_t n) {
    StateSet out(n);
    s.for_each([&](StateId x) { out.insert(product_base(n, x)); });
    return out;
}

}  // namespace syncgame
