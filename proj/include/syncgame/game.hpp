#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "syncgame/errors.hpp"
#include "syncgame/rational.hpp"
#include "syncgame/state_set.hpp"

namespace syncgame {

/// Probability distribution over states; only positive masses are stored, sorted by state.
class Distribution {
public:
    using Entry = std::pair<StateId, Rational>;

    Distribution() = default;

    /// Merges duplicate states, drops zeros; does not check the total.
    explicit Distribution(std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& x, const Entry& y) { return x.first < y.first; });
        for (auto& e : entries) {
            if (!entries_.empty() && entries_.back().first == e.first)
                entries_.back().second += e.second;
            else
                entries_.push_back(std::move(e));
        }
        std::erase_if(entries_, [](const Entry& e) { return e.second.is_zero(); });
    }

    static Distribution dirac(StateId q) { return Distribution({{q, Rational(1)}}); }

    static Distribution uniform(const StateSet& s) {
        std::vector<Entry> e;
        Rational w(1, static_cast<long>(s.size()));
        s.for_each([&](StateId q) { e.emplace_back(q, w); });
        return Distribution(std::move(e));
    }

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    bool is_dirac() const { return entries_.size() == 1; }

    Rational mass(StateId q) const {
        for (const auto& [s, p] : entries_)
            if (s == q) return p;
        return Rational(0);
    }
    Rational mass(const StateSet& s) const {
        Rational m;
        for (const auto& [q, p] : entries_)
            if (s.contains(q)) m += p;
        return m;
    }
    Rational total() const {
        Rational m;
        for (const auto& e : entries_) m += e.second;
        return m;
    }

    StateSet support(std::size_t universe) const {
        StateSet s(universe);
        for (const auto& e : entries_) s.insert(e.first);
        return s;
    }
    bool support_within(const StateSet& s) const {
        for (const auto& e : entries_)
            if (!s.contains(e.first)) return false;
        return true;
    }
    bool support_meets(const StateSet& s) const {
        for (const auto& e : entries_)
            if (s.contains(e.first)) return true;
        return false;
    }

    friend bool operator==(const Distribution& a, const Distribution& b) {
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const Distribution& a, const Distribution& b) { return !(a == b); }

private:
    std::vector<Entry> entries_;
};

/// Two-player stochastic game with a shared action alphabet and a target set.
class Game {
public:
    Game() = default;

    /// `delta` is laid out as [(q * |A| + a) * |A| + b].
    Game(std::vector<std::string> states, std::vector<std::string> actions,
         std::vector<Distribution> delta, StateSet target)
        : states_(std::move(states)),
          actions_(std::move(actions)),
          delta_(std::move(delta)),
          target_(std::move(target)) {
        if (states_.empty()) throw InputError("game has no states");
        if (actions_.empty()) throw InputError("game has no actions");
        const std::size_t n = states_.size(), m = actions_.size();
        if (delta_.size() != n * m * m) throw InputError("transition table has the wrong size");
        if (target_.universe() != n) throw InputError("target over a different state space");
        for (StateId q = 0; q < n; ++q) {
            if (!state_index_.emplace(states_[q], q).second)
                throw InputError("duplicate state \"" + states_[q] + "\"");
        }
        for (ActionId a = 0; a < m; ++a) {
            if (!action_index_.emplace(actions_[a], a).second)
                throw InputError("duplicate action \"" + actions_[a] + "\"");
        }
        for (std::size_t i = 0; i < delta_.size(); ++i) {
            const auto& d = delta_[i];
            const StateId q = i / (m * m);
            const ActionId a = (i / m) % m, b = i % m;
            std::string where = "(" + states_[q] + "," + actions_[a] + "," + actions_[b] + ")";
            if (d.support_size() == 0) throw InputError("empty distribution at " + where);
            for (const auto& [s, p] : d.entries()) {
                if (s >= n) throw InputError("successor out of range at " + where);
                if (!p.is_positive()) throw InputError("negative probability at " + where);
            }
            auto sum = d.total();
            if (!sum.is_one())
                throw InputError("distribution sums to " + sum.str() + " at " + where);
        }
    }

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_actions() const { return actions_.size(); }

    const std::vector<std::string>& state_names() const { return states_; }
    const std::vector<std::string>& action_names() const { return actions_; }
    const std::string& state_name(StateId q) const { return states_.at(q); }
    const std::string& action_name(ActionId a) const { return actions_.at(a); }

    std::optional<StateId> find_state(const std::string& name) const {
        auto it = state_index_.find(name);
        if (it == state_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<ActionId> find_action(const std::string& name) const {
        auto it = action_index_.find(name);
        if (it == action_index_.end()) return std::nullopt;
        return it->second;
    }
    StateId state(const std::string& name) const {
        if (auto q = find_state(name)) return *q;
        throw InputError("unknown state \"" + name + "\"");
    }
    ActionId action(const std::string& name) const {
        if (auto a = find_action(name)) return *a;
        throw InputError("unknown action \"" + name + "\"");
    }

    const Distribution& delta(StateId q, ActionId a, ActionId b) const {
        return delta_[(q * actions_.size() + a) * actions_.size() + b];
    }
    const std::vector<Distribution>& transitions() const { return delta_; }

    const StateSet& target() const { return target_; }
    Game with_target(StateSet t) const {
        Game g = *this;
        if (t.universe() != num_states()) throw InputError("target over a different state space");
        g.target_ = std::move(t);
        return g;
    }

    StateSet empty_set() const { return StateSet(num_states()); }
    StateSet all_states() const { return StateSet::full(num_states()); }

    /// Builds a set from state names.
    StateSet set_of(const std::vector<std::string>& names) const {
        StateSet s(num_states());
        for (const auto& nm : names) s.insert(state(nm));
        return s;
    }
    std::vector<std::string> names_of(const StateSet& s) const {
        std::vector<std::string> out;
        s.for_each([&](StateId q) { out.push_back(states_[q]); });
        return out;
    }

    /// Smallest positive transition probability.
    Rational eta() const {
        std::optional<Rational> best;
        for (const auto& d : delta_)
            for (const auto& e : d.entries())
                if (!best || e.second < *best) best = e.second;
        return best.value_or(Rational(1));
    }

    bool is_deterministic() const {
        return std::all_of(delta_.begin(), delta_.end(),
                           [](const Distribution& d) { return d.is_dirac(); });
    }

    friend bool operator==(const Game& x, const Game& y) {
        return x.states_ == y.states_ && x.actions_ == y.actions_ && x.delta_ == y.delta_ &&
               x.target_ == y.target_;
    }

private:
    std::vector<std::string> states_;
    std::vector<std::string> actions_;
    std::vector<Distribution> delta_;
    StateSet target_;
    std::unordered_map<std::string, StateId> state_index_;
    std::unordered_map<std::string, ActionId> action_index_;
};

enum class StateKind { player1, player2, both, neither };

inline const char* to_string(StateKind k) {
    switch (k) {
        case StateKind::player1: return "player-1";
        case StateKind::player2: return "player-2";
        case StateKind::both: return "both";
        case StateKind::neither: return "neither";
    }
    return "?";
}

struct ValidationReport {
    std::vector<StateKind> kinds;
    bool deterministic = false;
    std::size_t n = 0;
    Rational eta;
};

/// Player-1 state: player 2's choice never matters. Player-2 state: player 1's never does.
inline StateKind classify_state(const Game& g, StateId q) {
    const std::size_t m = g.num_actions();
    bool p1 = true, p2 = true;
    for (ActionId a = 0; a < m; ++a)
        for (ActionId b = 0; b < m; ++b) {
            if (g.delta(q, a, b) != g.delta(q, a, 0)) p1 = false;
            if (g.delta(q, a, b) != g.delta(q, 0, b)) p2 = false;
        }
    if (p1 && p2) return StateKind::both;
    if (p1) return StateKind::player1;
    if (p2) return StateKind::player2;
    return StateKind::neither;
}

inline ValidationReport validate_game(const Game& g) {
    ValidationReport r;
    for (StateId q = 0; q < g.num_states(); ++q) r.kinds.push_back(classify_state(g, q));
    r.deterministic = g.is_deterministic();
    r.n = g.num_states();
    r.eta = g.eta();
    return r;
}

inline bool is_mdp(const Game& g) {
    for (StateId q = 0; q < g.num_states(); ++q) {
        auto k = classify_state(g, q);
        if (k != StateKind::player1 && k != StateKind::both) return false;
    }
    return true;
}

/// Adds a fresh state (last index) whose every move draws from `d`. The target is unchanged.
inline Game attach_initial(const Game& g, const Distribution& d) {
    const std::size_t n = g.num_states(), m = g.num_actions();
    for (const auto& [q, p] : d.entries())
        if (q >= n) throw InputError("distribution support outside the game's states");
    if (!d.total().is_one()) throw InputError("distribution sums to " + d.total().str());

    std::string fresh = "q_d";
    for (int i = 1; g.find_state(fresh); ++i) fresh = "q_d" + std::to_string(i);

    auto states = g.state_names();
    states.push_back(fresh);
    std::vector<Distribution> delta;
    delta.reserve((n + 1) * m * m);
    for (const auto& t : g.transitions()) delta.push_back(t);
    for (std::size_t i = 0; i < m * m; ++i) delta.push_back(d);
    StateSet target(n + 1);
    g.target().for_each([&](StateId q) { target.insert(q); });
    return Game(std::move(states), g.action_names(), std::move(delta), std::move(target));
}

}  // namespace syncgame
