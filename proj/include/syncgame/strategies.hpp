#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "syncgame/simulate.hpp"
#include "syncgame/solver.hpp"

namespace syncgame {

// ---------------------------------------------------------------------------
// Sure-mode selector sequences

namespace detail {

inline SelectorLasso eventually_lasso(const Game& g, const StateSet& t, StateId q) {
    auto chain = cpre_chain(g, t);
    std::size_t index = chain.size();
    for (std::size_t i = 0; i < chain.size(); ++i)
        if (chain[i].contains(q)) {
            index = i;
            break;
        }
    if (index == chain.size()) throw InputError("state " + g.state_name(q) + " is not sure-winning for eventually");
    SelectorLasso out;
    // Round j moves the support from chain[index - j] into chain[index - j - 1].
    for (std::size_t j = 0; j < index; ++j) {
        Selector sel(g.num_states(), 0);
        chain[index - j].for_each([&](StateId x) { sel[x] = *cpre_witness(g, x, chain[index - j - 1]); });
        out.prefix.push_back(std::move(sel));
    }
    out.cycle.push_back(Selector(g.num_states(), 0));
    return out;
}

/// Shortest edge path from `from` to any vertex satisfying `goal`, as (vertex, edge) pairs.
template <class Goal>
std::optional<std::vector<std::pair<std::size_t, std::size_t>>> subset_path(const SubsetGraph& graph, std::size_t from,
                                                                             Goal&& goal, bool require_step) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::pair<std::size_t, std::size_t>> parent(graph.size(), {unset, unset});
    std::vector<bool> seen(graph.size(), false);
    std::deque<std::size_t> work;
    if (!require_step && goal(from)) return std::vector<std::pair<std::size_t, std::size_t>>{};
    seen[from] = !require_step;
    work.push_back(from);
    while (!work.empty()) {
        std::size_t v = work.front();
        work.pop_front();
        for (std::size_t e = 0; e < graph.edges(v).size(); ++e) {
            std::size_t w = graph.edges(v)[e].to;
            if (seen[w]) continue;
            seen[w] = true;
            parent[w] = {v, e};
            if (goal(w)) {
                std::vector<std::pair<std::size_t, std::size_t>> path;
                for (std::size_t x = w;;) {
                    path.push_back(parent[x]);
                    x = parent[x].first;
                    if (x == from) break;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            work.push_back(w);
        }
    }
    return std::nullopt;
}

inline SelectorLasso weakly_lasso(const Game& g, const StateSet& t, StateId q, std::size_t budget) {
    SubsetGraph graph(g, budget);
    StateSet seed(g.num_states());
    seed.insert(q);
    std::size_t root = graph.explore(seed);
    auto adj = graph.adjacency();
    auto scc = strongly_connected(adj);
    auto accepting = [&](std::size_t v) {
        return graph.vertex(v).subset_of(t) && is_nontrivial(adj, scc, scc.component[v]);
    };
    auto prefix = subset_path(graph, root, accepting, false);
    if (!prefix) throw InputError("state " + g.state_name(q) + " is not sure-winning for weakly");
    std::size_t hub = prefix->empty() ? root : graph.edges(prefix->back().first)[prefix->back().second].to;
    auto cycle = subset_path(graph, hub, [&](std::size_t v) { return v == hub; }, true);
    if (!cycle) throw InvariantError("accepting vertex without a cycle");
    SelectorLasso out;
    for (auto [v, e] : *prefix) out.prefix.push_back(graph.edges(v)[e].label);
    for (auto [v, e] : *cycle) out.cycle.push_back(graph.edges(v)[e].label);
    return out;
}

}  // namespace detail

/// Pure counting strategy witnessing sure eventually/weakly synchronization from q.
inline SelectorLasso synth_sure_strategy(const Game& g, const StateSet& t, Mode mode, StateId q,
                                         std::size_t budget = default_vertex_budget) {
    if (q >= g.num_states()) throw InputError("unknown state");
    if (mode == Mode::eventually) return detail::eventually_lasso(g, t, q);
    if (mode == Mode::weakly) return detail::weakly_lasso(g, t, q, budget);
    throw InputError("sure strategies are synthesized for eventually and weakly only");
}

// ---------------------------------------------------------------------------
// Almost-sure weakly strategy over the final product

/// Pure counting strategy built from a solver certificate. Rounds are split into blocks:
/// phase 1 gathers mass in the hubs, phase 2 (longer than 2^n rounds) ends at a round where
/// the counter is 0 and steers the gathered mass into the candidates at that round.
class AsWeaklyStrategy {
public:
    struct Block {
        std::size_t start, phase2, end;
    };

    AsWeaklyStrategy(const Game& g, const SolveCertificate& cert, std::vector<std::size_t> schedule,
                     const SolveOptions& opts = {})
        : n_(g.num_states()), period_(cert.final_period), region_(cert.final_region), schedule_(std::move(schedule)) {
        if (cert.final_region.empty()) throw InputError("certificate has an empty winning region");
        if (schedule_.empty()) throw InputError("schedule needs at least one phase length");
        for (std::size_t i = 0; i < schedule_.size(); ++i) {
            if (schedule_[i] == 0) throw InputError("phase lengths must be positive");
            if (i > 0 && schedule_[i] <= schedule_[i - 1]) throw InputError("phase lengths must increase");
        }
        if (n_ >= 40) throw ResourceCapError("phase 2 length 2^n is too large");
        min_phase2_ = (std::size_t{1} << n_) + 1;

        std::size_t last_else = 0;
        for (std::size_t i = 0; i < cert.iterations.size(); ++i)
            if (std::holds_alternative<ElseStep>(cert.iterations[i])) last_else = i + 1;
        Arena outer = make_arena(g, period_, region_, opts.max_product_states);
        for (std::size_t i = last_else; i < cert.iterations.size(); ++i)
            regions_.push_back(build_region(outer, std::get<ThenStep>(cert.iterations[i])));
        StateSet covered(n_ * period_);
        for (const auto& reg : regions_) covered |= reg.removed;
        if (covered != region_) throw InvariantError("certificate regions do not partition the winning region");

        blocks_.resize(period_);
        for (std::size_t c0 = 0; c0 < period_; ++c0) {
            std::size_t at = 0;
            for (std::size_t len : schedule_) {
                std::size_t p2 = at + len;
                // Counter at round e is (c0 - e) mod p; phase 2 must end on counter 0.
                std::size_t end = p2 + min_phase2_;
                while (end % period_ != c0) ++end;
                blocks_[c0].push_back({at, p2, end});
                at = end;
            }
        }
    }

    std::size_t period() const { return period_; }
    std::size_t num_states() const { return n_; }
    const StateSet& region() const { return region_; }

    /// Blocks for a play whose round-0 states sit at counter c0.
    const std::vector<Block>& blocks(std::size_t c0) const { return blocks_.at(c0 % period_); }

    /// Least counter i with support×{i} inside the winning region.
    std::optional<std::size_t> start_counter(const StateSet& support) const {
        for (std::size_t i = 0; i < period_; ++i)
            if (place(support, period_, i).subset_of(region_)) return i;
        return std::nullopt;
    }

    /// Action of G to play at `round` in product state x.
    ActionId action(std::size_t round, StateId x) const {
        if (x >= n_ * period_ || !region_.contains(x)) return 0;
        const std::size_t counter = product_counter(n_, x);
        const std::size_t c0 = (counter + round) % period_;
        std::optional<std::size_t> to_end;
        for (const auto& b : blocks_[c0])
            if (round >= b.start && round < b.end) {
                if (round >= b.phase2) to_end = b.end - round;
                break;
            }
        if (to_end)
            for (const auto& reg : regions_)
                if (auto a = reg.chain_action(x, *to_end)) return *a;
        for (const auto& reg : regions_) {
            if (!reg.removed.contains(x)) continue;
            if (auto a = reg.orbit_action(x)) return *a;
            return reg.play(x, reg.core.contains(x) ? reg.reach : reg.attract);
        }
        throw InvariantError("winning product state outside every certificate region");
    }

    /// The same strategy read on base states for a play started at counter c0.
    ActionId base_action(std::size_t round, StateId q, std::size_t c0) const {
        std::size_t counter = (c0 + period_ - round % period_) % period_;
        return action(round, product_index(n_, q, counter));
    }

    Player1Strategy for_base(std::size_t c0) const {
        return Player1Strategy::pure([self = *this, c0](std::size_t i, StateId q) { return self.base_action(i, q, c0); });
    }

    /// table[round][product state] for rounds < horizon.
    std::vector<std::vector<ActionId>> table(std::size_t horizon) const {
        std::vector<std::vector<ActionId>> out(horizon, std::vector<ActionId>(n_ * period_));
        for (std::size_t i = 0; i < horizon; ++i)
            for (StateId x = 0; x < n_ * period_; ++x) out[i][x] = action(i, x);
        return out;
    }

private:
    struct Region {
        Arena arena;                   // restriction of the final arena to the candidate's K
        StateSet removed, core;        // X and W, product indices
        std::vector<StateSet> chain;   // V_0 .. V_{L-1}, all distinct, product indices
        std::vector<std::vector<ActionId>> witness;  // witness[e][local] leads into V_{e-1}
        std::vector<ActionId> wrap;    // on V_{preperiod}, leads into V_{L-1}
        std::size_t preperiod = 0;
        bool periodic = false;         // false when the CPre iteration dies out
        std::vector<ActionId> reach, attract;  // local actions

        ActionId play(StateId x, const std::vector<ActionId>& row) const {
            StateId local = arena.local[x];
            return arena.played_action(local, row[local]);
        }
        /// Action that keeps x on course to reach V_0 in exactly e rounds.
        std::optional<ActionId> chain_action(StateId x, std::size_t e) const {
            const std::size_t len = chain.size();
            if (e == 0) return std::nullopt;
            if (e < len) {
                if (!chain[e].contains(x)) return std::nullopt;
                return play(x, witness[e]);
            }
            if (!periodic) return std::nullopt;
            std::size_t f = preperiod + (e - preperiod) % (len - preperiod);
            if (!chain[f].contains(x)) return std::nullopt;
            return play(x, f == preperiod ? wrap : witness[f]);
        }
        /// Action that keeps x inside the periodic part of the chain.
        std::optional<ActionId> orbit_action(StateId x) const {
            if (!periodic) return std::nullopt;
            for (std::size_t f = preperiod; f < chain.size(); ++f)
                if (chain[f].contains(x)) return play(x, f == preperiod ? wrap : witness[f]);
            return std::nullopt;
        }
    };

    Region build_region(const Arena& outer, const ThenStep& step) const {
        const std::size_t p = period_, rj = step.period;
        Region reg;
        reg.arena = restrict_arena(outer, expand_set(step.arena, n_, rj, p));
        reg.removed = expand_set(step.removed, n_, rj, p);
        reg.core = expand_set(step.core, n_, rj, p);
        const Game& h = reg.arena.game;

        StateSet goal =
            reg.arena.to_local(expand_set(place(step.scheme.hub, rj, step.scheme.preperiod % rj), n_, rj, p));
        auto asr = almost_sure_reach(h, goal);
        if (reg.arena.to_product(asr.region) != reg.core)
            throw InvariantError("recomputed core differs from the certificate");
        reg.reach = asr.bound.strategy;
        reg.attract = pos_attractor(h, Player::one, asr.region).choice;

        std::vector<StateSet> local{reg.arena.to_local(expand_set(place(step.candidate, rj, 0), n_, rj, p))};
        std::unordered_map<StateSet, std::size_t, StateSetHash> seen{{local[0], 0}};
        const std::size_t cap = detail::iteration_cap(n_, p);
        for (;;) {
            if (local.size() > cap) throw ResourceCapError("candidate chain exceeds the iteration cap");
            StateSet next = cpre(h, local.back());
            if (next.empty()) break;
            auto it = seen.find(next);
            if (it != seen.end()) {
                reg.preperiod = it->second;
                reg.periodic = true;
                break;
            }
            seen.emplace(next, local.size());
            local.push_back(std::move(next));
        }
        reg.witness.resize(local.size());
        for (std::size_t e = 1; e < local.size(); ++e) {
            reg.witness[e].assign(h.num_states(), 0);
            local[e].for_each([&](StateId x) { reg.witness[e][x] = *cpre_witness(h, x, local[e - 1]); });
        }
        if (reg.periodic) {
            reg.wrap.assign(h.num_states(), 0);
            local[reg.preperiod].for_each([&](StateId x) { reg.wrap[x] = *cpre_witness(h, x, local.back()); });
        }
        for (auto& s : local) reg.chain.push_back(reg.arena.to_product(s));
        return reg;
    }

    std::size_t n_, period_;
    StateSet region_;
    std::vector<std::size_t> schedule_;
    std::size_t min_phase2_ = 1;
    std::vector<Region> regions_;
    std::vector<std::vector<Block>> blocks_;
};

// ---------------------------------------------------------------------------
// Spoiling bounds

struct SpoilBounds {
    Rational epsilon_w;
    Rational n_w;
};

inline constexpr std::size_t default_spoil_cap = 6;

/// N_w = 4^n and ε_w = (1/(2n))·(η^{(n+1)·2^n} / (n·4^n))^{2^n}.
inline SpoilBounds spoil_bounds(std::size_t n, const Rational& eta, std::size_t cap = default_spoil_cap) {
    if (n == 0) throw InputError("spoil bounds need at least one state");
    if (n > cap) throw ResourceCapError("spoil bounds are capped at n = " + std::to_string(cap));
    if (!eta.is_positive() || eta > Rational(1)) throw InputError("η must lie in (0,1]");
    const unsigned long two_n = 1ul << n;
    Rational four_n = pow(Rational(4), static_cast<unsigned long>(n));
    Rational inner = pow(eta, (n + 1) * two_n) / (Rational(static_cast<long>(n)) * four_n);
    SpoilBounds out;
    out.n_w = four_n;
    out.epsilon_w = Rational(1, 2 * static_cast<long>(n)) * pow(inner, two_n);
    return out;
}

inline SpoilBounds spoil_bounds(const Game& g, std::size_t cap = default_spoil_cap) {
    return spoil_bounds(g.num_states(), g.eta(), cap);
}

// ---------------------------------------------------------------------------
// Substitution game

struct SubstitutionState {
    std::vector<std::size_t> roster;  // players on the ice, in entry order
    std::vector<std::size_t> passes;  // passes[player]
    std::size_t reserve_used = 0;
};

/// Chooses which eligible players pass this round.
using PassPolicy = std::function<std::vector<std::size_t>(const SubstitutionState&, const std::vector<std::size_t>& eligible)>;

inline PassPolicy all_pass() {
    return [](const SubstitutionState&, const std::vector<std::size_t>& eligible) { return eligible; };
}

/// Each eligible player passes independently with probability 1/2.
inline PassPolicy random_pass(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const SubstitutionState&, const std::vector<std::size_t>& eligible) {
        std::vector<std::size_t> out;
        for (auto p : eligible)
            if ((*rng)() & 1u) out.push_back(p);
        return out;
    };
}

struct SubstitutionReport {
    bool sustained = true;
    std::optional<std::size_t> depleted_at;
    std::size_t steps = 0;
    std::size_t max_roster = 0;
    std::size_t invariant_violations = 0;
    std::vector<SubstitutionState> trace;
};

/// With f sorted ascending over the k players on the ice, f(p_i) ≤ N+1-k+i (i from 1).
inline bool substitution_invariant(const SubstitutionState& s, std::size_t n) {
    std::vector<std::size_t> f;
    for (auto p : s.roster) f.push_back(s.passes[p]);
    std::sort(f.begin(), f.end());
    const std::size_t k = f.size();
    for (std::size_t i = 1; i <= k; ++i)
        if (f[i - 1] + k > n + 1 + i) return false;
    return true;
}

/// Runs the protocol with the coach rule: bring in the player outside P with the most passes
/// left (roster order on ties), or a reserve player when everyone on the ice passes.
inline SubstitutionReport substitution_game(std::size_t n, std::size_t k, const PassPolicy& adversary,
                                            std::size_t steps, bool keep_trace = false) {
    SubstitutionReport report;
    SubstitutionState s;
    for (std::size_t step = 0; step < steps; ++step) {
        std::vector<std::size_t> eligible;
        for (auto p : s.roster)
            if (s.passes[p] >= 1) eligible.push_back(p);
        std::vector<std::size_t> pass = adversary(s, eligible);
        std::vector<bool> passing(s.passes.size(), false);
        for (auto p : pass) {
            if (p >= s.passes.size() || s.passes[p] == 0 ||
                std::find(s.roster.begin(), s.roster.end(), p) == s.roster.end())
                throw InputError("adversary passed with an ineligible player");
            passing[p] = true;
        }
        std::optional<std::size_t> chosen;
        for (auto p : s.roster)
            if (!passing[p] && (!chosen || s.passes[p] > s.passes[*chosen])) chosen = p;
        if (!chosen) {
            if (s.reserve_used >= k) {
                report.sustained = false;
                report.depleted_at = step;
                break;
            }
            chosen = s.passes.size();
            s.passes.push_back(0);
            passing.push_back(false);
            s.roster.push_back(*chosen);
            ++s.reserve_used;
        }
        for (auto p : s.roster) {
            if (passing[p]) --s.passes[p];
        }
        s.passes[*chosen] = n;
        report.steps = step + 1;
        report.max_roster = std::max(report.max_roster, s.roster.size());
        if (!substitution_invariant(s, n)) ++report.invariant_violations;
        if (keep_trace) report.trace.push_back(s);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Strategy JSON

inline Json selector_to_json(const Game& g, const Selector& sel) {
    Json out = Json::object();
    for (StateId q = 0; q < g.num_states(); ++q) out[g.state_name(q)] = g.action_name(sel.at(q));
    return out;
}

inline Selector selector_from_json(const Game& g, const Json& j) {
    if (!j.is_object()) throw InputError("selector must be an object of state: action");
    Selector sel(g.num_states(), 0);
    for (const auto& [state, action] : j.items()) {
        if (!action.is_string()) throw InputError("selector action for " + state + " must be a string");
        sel[g.state(state)] = g.action(action.get<std::string>());
    }
    return sel;
}

inline Json lasso_to_json(const Game& g, const SelectorLasso& lasso) {
    Json out;
    out["kind"] = "lasso";
    out["prefix"] = Json::array();
    for (const auto& s : lasso.prefix) out["prefix"].push_back(selector_to_json(g, s));
    out["cycle"] = Json::array();
    for (const auto& s : lasso.cycle) out["cycle"].push_back(selector_to_json(g, s));
    return out;
}

/// {"kind":"lasso","prefix":[...],"cycle":[...]} or {"kind":"memoryless","choice":{...}}.
inline Player1Strategy player1_from_json(const Game& g, const Json& j) {
    const std::string kind = j.value("kind", "");
    if (kind == "memoryless") return Player1Strategy::memoryless(selector_from_json(g, j.at("choice")));
    if (kind == "lasso") {
        SelectorLasso lasso;
        for (const auto& s : j.value("prefix", Json::array())) lasso.prefix.push_back(selector_from_json(g, s));
        for (const auto& s : j.at("cycle")) lasso.cycle.push_back(selector_from_json(g, s));
        if (lasso.cycle.empty()) throw InputError("lasso cycle must be nonempty");
        return lasso.strategy();
    }
    throw InputError("unknown player-1 strategy kind \"" + kind + "\"");
}

/// {"kind":"uniform"}, {"kind":"memoryless","reply":{state:{p1action:p2action}}}, or
/// {"kind":"superposition","components":[{"weight":"1/2","strategy":{...}},...]}.
inline Player2Strategy player2_from_json(const Game& g, const Json& j) {
    const std::string kind = j.value("kind", "");
    if (kind == "uniform") return Player2Strategy::uniform();
    if (kind == "memoryless") {
        const std::size_t m = g.num_actions();
        std::vector<ActionId> reply(g.num_states() * m, 0);
        for (const auto& [state, row] : j.at("reply").items()) {
            StateId q = g.state(state);
            for (const auto& [a, b] : row.items()) reply[q * m + g.action(a)] = g.action(b.get<std::string>());
        }
        return Player2Strategy::memoryless(std::move(reply), m);
    }
    if (kind == "superposition") {
        std::vector<std::pair<Rational, Player2Strategy>> parts;
        for (const auto& c : j.at("components"))
            parts.emplace_back(Rational::parse(c.at("weight").get<std::string>()), player2_from_json(g, c.at("strategy")));
        return Player2Strategy::superposition(std::move(parts));
    }
    throw InputError("unknown player-2 strategy kind \"" + kind + "\"");
}

}  // namespace syncgame
