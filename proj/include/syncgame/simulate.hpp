#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "syncgame/subsets.hpp"

namespace syncgame {

using ActionDistribution = std::vector<std::pair<ActionId, Rational>>;

/// Player-1 counting strategy: (round, state) -> distribution over actions.
struct Player1Strategy {
    std::function<ActionDistribution(std::size_t, StateId)> choose;

    static Player1Strategy pure(std::function<ActionId(std::size_t, StateId)> f) {
        return {[f = std::move(f)](std::size_t i, StateId q) { return ActionDistribution{{f(i, q), Rational(1)}}; }};
    }
    static Player1Strategy memoryless(std::vector<ActionId> choice) {
        return pure([c = std::move(choice)](std::size_t, StateId q) { return c.at(q); });
    }
};

/// Player-2 strategies: uniform, counting (round, state, action) -> distribution, or a
/// finite superposition of such strategies.
struct Player2Strategy {
    enum class Kind { uniform, counting, superposition };
    Kind kind = Kind::uniform;
    std::function<ActionDistribution(std::size_t, StateId, ActionId)> choose;
    std::vector<std::pair<Rational, Player2Strategy>> components;

    static Player2Strategy uniform() { return {}; }
    static Player2Strategy counting(std::function<ActionDistribution(std::size_t, StateId, ActionId)> f) {
        Player2Strategy s;
        s.kind = Kind::counting;
        s.choose = std::move(f);
        return s;
    }
    /// reply[q * |A| + a]
    static Player2Strategy memoryless(std::vector<ActionId> reply, std::size_t num_actions) {
        return counting([reply = std::move(reply), num_actions](std::size_t, StateId q, ActionId a) {
            return ActionDistribution{{reply.at(q * num_actions + a), Rational(1)}};
        });
    }
    static Player2Strategy superposition(std::vector<std::pair<Rational, Player2Strategy>> parts) {
        Rational total;
        for (const auto& [w, s] : parts) {
            if (!w.is_positive()) throw InputError("superposition weights must be positive");
            total += w;
        }
        if (!total.is_one()) throw InputError("superposition weights sum to " + total.str());
        Player2Strategy s;
        s.kind = Kind::superposition;
        s.components = std::move(parts);
        return s;
    }
};

struct OutcomeSequence {
    std::vector<Distribution> steps;

    Rational mass(std::size_t i, const StateSet& t) const { return steps.at(i).mass(t); }
};

inline constexpr std::size_t default_max_horizon = 1'000'000;

namespace detail {

inline std::vector<Rational> push_forward(const Game& g, const std::vector<Rational>& d, std::size_t round,
                                          const Player1Strategy& sigma, const Player2Strategy& tau) {
    const std::size_t n = g.num_states(), m = g.num_actions();
    std::vector<Rational> out(n);
    for (StateId q = 0; q < n; ++q) {
        if (d[q].is_zero()) continue;
        for (const auto& [a, pa] : sigma.choose(round, q)) {
            if (a >= m) throw InputError("player-1 strategy chose an unknown action");
            Rational wa = d[q] * pa;
            ActionDistribution replies;
            if (tau.kind == Player2Strategy::Kind::uniform) {
                for (ActionId b = 0; b < m; ++b) replies.emplace_back(b, Rational(1, static_cast<long>(m)));
            } else {
                replies = tau.choose(round, q, a);
            }
            for (const auto& [b, pb] : replies) {
                if (b >= m) throw InputError("player-2 strategy chose an unknown action");
                Rational w = wa * pb;
                for (const auto& [s, p] : g.delta(q, a, b).entries()) out[s] += w * p;
            }
        }
    }
    return out;
}

inline std::vector<std::vector<Rational>> dense_outcome(const Game& g, const Player1Strategy& sigma,
                                                        const Player2Strategy& tau, const std::vector<Rational>& d0,
                                                        std::size_t horizon) {
    if (tau.kind == Player2Strategy::Kind::superposition) {
        std::vector<std::vector<Rational>> acc(horizon + 1, std::vector<Rational>(g.num_states()));
        for (const auto& [w, part] : tau.components) {
            auto seq = dense_outcome(g, sigma, part, d0, horizon);
            for (std::size_t i = 0; i <= horizon; ++i)
                for (StateId q = 0; q < g.num_states(); ++q) acc[i][q] += w * seq[i][q];
        }
        return acc;
    }
    std::vector<std::vector<Rational>> seq{d0};
    for (std::size_t i = 0; i < horizon; ++i) seq.push_back(push_forward(g, seq.back(), i, sigma, tau));
    return seq;
}

}  // namespace detail

/// d_{i+1}(q') = Σ d_i(q) σ(i,q)(a) τ(i,q,a)(b) δ(q,a,b)(q'), exactly.
inline OutcomeSequence outcome_sequence(const Game& g, const Player1Strategy& sigma, const Player2Strategy& tau,
                                        const Distribution& d0, std::size_t horizon,
                                        std::size_t max_horizon = default_max_horizon) {
    if (horizon > max_horizon) throw ResourceCapError("horizon exceeds " + std::to_string(max_horizon));
    std::vector<Rational> start(g.num_states());
    for (const auto& [q, p] : d0.entries()) {
        if (q >= g.num_states()) throw InputError("initial distribution outside the game's states");
        start[q] = p;
    }
    OutcomeSequence out;
    for (auto& dense : detail::dense_outcome(g, sigma, tau, start, horizon)) {
        std::vector<Distribution::Entry> e;
        for (StateId q = 0; q < dense.size(); ++q)
            if (!dense[q].is_zero()) e.emplace_back(q, std::move(dense[q]));
        out.steps.push_back(Distribution(std::move(e)));
    }
    return out;
}

/// Pure counting strategy given by prefix · cycle^ω of selectors.
struct SelectorLasso {
    std::vector<Selector> prefix;
    std::vector<Selector> cycle;

    const Selector& at(std::size_t round) const {
        if (cycle.empty()) throw InvariantError("selector lasso with an empty cycle");
        if (round < prefix.size()) return prefix[round];
        return cycle[(round - prefix.size()) % cycle.size()];
    }
    Player1Strategy strategy() const {
        return Player1Strategy::pure([self = *this](std::size_t i, StateId q) { return self.at(i).at(q); });
    }
};

/// s_0 = seed, s_{i+1} = image of s_i under the round-i selector.
inline std::vector<StateSet> support_sequence(const Game& g, const SelectorLasso& lasso, const StateSet& seed,
                                              std::size_t horizon) {
    std::vector<StateSet> out{seed};
    for (std::size_t i = 0; i < horizon; ++i) out.push_back(selector_image(g, out.back(), lasso.at(i)));
    return out;
}

struct SyncReport {
    std::string mode;
    bool holds = false;
    std::vector<std::size_t> indices;     // qualifying rounds (weakly), witness (eventually)
    std::optional<std::size_t> suffix_start;  // strongly
    std::size_t horizon = 0;
    bool horizon_bounded = true;
};

/// Finite-horizon check of d_i(t) ≥ 1 - ε.
inline SyncReport check_sync(const OutcomeSequence& seq, const StateSet& t, const std::string& mode,
                             const Rational& eps) {
    SyncReport r;
    r.mode = mode;
    r.horizon = seq.steps.empty() ? 0 : seq.steps.size() - 1;
    Rational bar = Rational(1) - eps;
    std::vector<bool> ok;
    for (const auto& d : seq.steps) ok.push_back(d.mass(t) >= bar);
    if (mode == "always") {
        r.holds = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
        r.horizon_bounded = true;
    } else if (mode == "eventually") {
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i]) {
                r.indices.push_back(i);
                break;
            }
        r.holds = !r.indices.empty();
        r.horizon_bounded = !r.holds;
    } else if (mode == "weakly") {
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i]) r.indices.push_back(i);
        r.holds = !r.indices.empty();
    } else if (mode == "strongly") {
        std::size_t start = ok.size();
        while (start > 0 && ok[start - 1]) --start;
        if (start < ok.size()) r.suffix_start = start;
        r.holds = r.suffix_start.has_value();
    } else {
        throw InputError("unknown mode \"" + mode + "\"");
    }
    return r;
}

/// "round,<state>...,target" rows with exact rationals.
inline std::string outcome_csv(const Game& g, const OutcomeSequence& seq, const StateSet& t) {
    std::ostringstream out;
    out << "round";
    for (const auto& nm : g.state_names()) out << "," << nm;
    out << ",target\n";
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
        out << i;
        for (StateId q = 0; q < g.num_states(); ++q) out << "," << seq.steps[i].mass(q).str();
        out << "," << seq.steps[i].mass(t).str() << "\n";
    }
    return out.str();
}

}  // namespace syncgame
