#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "syncgame/arena.hpp"
#include "syncgame/io.hpp"
#include "syncgame/oracle.hpp"
#include "syncgame/statebased.hpp"
#include "syncgame/subsets.hpp"

namespace syncgame {

enum class Mode { always, eventually, weakly, strongly };
enum class WinKind { sure, almost_sure };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::always: return "always";
        case Mode::eventually: return "eventually";
        case Mode::weakly: return "weakly";
        case Mode::strongly: return "strongly";
    }
    return "?";
}
inline const char* to_string(WinKind w) { return w == WinKind::sure ? "sure" : "almost-sure"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "always") return Mode::always;
    if (s == "eventually") return Mode::eventually;
    if (s == "weakly") return Mode::weakly;
    if (s == "strongly") return Mode::strongly;
    throw InputError("unknown mode \"" + s + "\"");
}
inline WinKind parse_win(const std::string& s) {
    if (s == "sure") return WinKind::sure;
    if (s == "almost-sure") return WinKind::almost_sure;
    throw InputError("unknown winning condition \"" + s + "\"");
}

/// Ultimately periodic tail of CPre iteration from U×{placement}.
struct PeriodicScheme {
    StateSet hub;        // R, base states; empty means the iteration died out
    std::size_t period = 1;
    std::size_t preperiod = 0;
    std::vector<StateSet> trace;  // V_0 .. V_{k+r}, product indices at the arena's period

    bool rejected() const { return hub.empty(); }
};

struct ThenStep {
    StateSet candidate;          // U, base states
    std::size_t placement = 0;
    PeriodicScheme scheme;
    std::size_t period = 1;      // period after expansion
    StateSet arena;              // K after expansion, before removal
    StateSet core;               // W
    StateSet removed;            // X
};

struct ElseStep {
    StateSet arena;   // K
    StateSet removed; // L
};

struct SolveCertificate {
    std::vector<std::variant<ThenStep, ElseStep>> iterations;
    std::size_t final_period = 1;
    StateSet final_region;  // S over Q×[final_period]
    std::vector<std::string> notes;
};

struct WinRegion {
    StateSet winning_diracs;
    std::vector<StateSet> maximal_supports;
    std::size_t period = 1;
    std::optional<SolveCertificate> certificate;
    /// Sure-eventually only: the distinct CPre iterates t, CPre(t), ... in order.
    std::vector<StateSet> chain;
};

struct SolveOptions {
    std::size_t max_product_states = default_max_product_states;
    std::size_t vertex_budget = default_vertex_budget;
    /// Also run the self-recurrence test in the unrestricted product and note disagreements.
    bool compare_full_product = false;
};

/// Keeps the inclusion-maximal sets, in canonical order.
inline std::vector<StateSet> maximal_sets(std::vector<StateSet> sets) {
    std::sort(sets.begin(), sets.end(), canonical_less);
    std::vector<StateSet> out;
    for (auto& s : sets) {
        if (s.empty()) continue;
        bool covered = false;
        for (const auto& o : out) covered = covered || s.subset_of(o);
        if (!covered) out.push_back(std::move(s));
    }
    return out;
}

inline StateSet union_of(const std::vector<StateSet>& sets, std::size_t universe) {
    StateSet out(universe);
    for (const auto& s : sets) out |= s;
    return out;
}

inline WinRegion region_from_supports(std::vector<StateSet> supports, std::size_t n) {
    WinRegion w;
    w.maximal_supports = maximal_sets(std::move(supports));
    w.winning_diracs = union_of(w.maximal_supports, n);
    return w;
}

/// t, CPre(t), CPre²(t), ... up to the first repetition.
inline std::vector<StateSet> cpre_chain(const Game& g, const StateSet& t, std::size_t* repeat_from = nullptr) {
    std::vector<StateSet> chain{t};
    std::unordered_map<StateSet, std::size_t, StateSetHash> seen{{t, 0}};
    for (;;) {
        StateSet next = cpre(g, chain.back());
        auto it = seen.find(next);
        if (it != seen.end()) {
            if (repeat_from) *repeat_from = it->second;
            return chain;
        }
        seen.emplace(next, chain.size());
        chain.push_back(std::move(next));
    }
}

/// Vertices of the subset graph from which an accepting vertex on a cycle is reachable.
inline std::vector<StateSet> sure_weakly_supports(const Game& g, const StateSet& t,
                                                  std::size_t budget = default_vertex_budget) {
    const std::size_t n = g.num_states();
    if (n >= 63 || (std::size_t{1} << n) - 1 > budget)
        throw ResourceCapError("sure weakly needs the full subset graph, which exceeds the vertex budget");
    SubsetGraph graph(g, budget);
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
        StateSet s(n);
        for (StateId q = 0; q < n; ++q)
            if ((bits >> q) & 1u) s.insert(q);
        graph.explore(s);
    }
    auto adj = graph.adjacency();
    auto scc = strongly_connected(adj);
    std::vector<bool> good(graph.size(), false);
    std::vector<std::size_t> work;
    for (std::size_t v = 0; v < graph.size(); ++v)
        if (graph.vertex(v).subset_of(t) && is_nontrivial(adj, scc, scc.component[v])) {
            good[v] = true;
            work.push_back(v);
        }
    Adjacency rev(graph.size());
    for (std::size_t v = 0; v < graph.size(); ++v)
        for (auto w : adj[v]) rev[w].push_back(v);
    while (!work.empty()) {
        auto v = work.back();
        work.pop_back();
        for (auto u : rev[v])
            if (!good[u]) {
                good[u] = true;
                work.push_back(u);
            }
    }
    std::vector<StateSet> out;
    for (std::size_t v = 0; v < graph.size(); ++v)
        if (good[v]) out.push_back(graph.vertex(v));
    return out;
}

/// Fixpoint solver for a state-based objective.
inline StateSet solve_objective(const Game& g, const StateSet& t, StateObjective obj) {
    switch (obj) {
        case StateObjective::as_reach: return almost_sure_reach(g, t).region;
        case StateObjective::sure_safety: return sure_safety(g, t);
        case StateObjective::as_cobuchi: return almost_sure_cobuchi(g, t);
        case StateObjective::sure_cobuchi: return sure_cobuchi(g, t);
    }
    throw InvariantError("unhandled objective");
}

inline WinRegion solve_sure(const Game& g, const StateSet& t, Mode mode, const SolveOptions& opts = {}) {
    const std::size_t n = g.num_states();
    switch (mode) {
        case Mode::always:
            return region_from_supports({sure_safety(g, t)}, n);
        case Mode::strongly:
            return region_from_supports({attractor(g, sure_safety(g, t)).region}, n);
        case Mode::eventually: {
            std::size_t from = 0;
            auto chain = cpre_chain(g, t, &from);
            auto w = region_from_supports(chain, n);
            w.period = chain.size() - from;
            w.chain = std::move(chain);
            return w;
        }
        case Mode::weakly:
            return region_from_supports(sure_weakly_supports(g, t, opts.vertex_budget), n);
    }
    throw InvariantError("unhandled mode");
}

namespace detail {

inline std::size_t iteration_cap(std::size_t n, std::size_t r) {
    std::size_t cap = r;
    for (std::size_t i = 0; i < n && cap < (std::size_t{1} << 40); ++i) cap *= 2;
    return cap;
}

}  // namespace detail

/// V_0 = U×{placement}, V_{i+1} = CPre(V_i) inside the arena, until V_k = V_{k+r}.
inline PeriodicScheme periodic_scheme(const Arena& h, const StateSet& u, std::size_t placement) {
    if (u.empty()) throw InputError("periodic scheme of an empty set");
    StateSet start = place(u, h.period, placement % h.period);
    if (!start.subset_of(h.domain())) throw InputError("candidate lies outside the arena");
    PeriodicScheme out;
    std::vector<StateSet> local{h.to_local(start)};
    std::unordered_map<StateSet, std::size_t, StateSetHash> seen{{local[0], 0}};
    const std::size_t cap = detail::iteration_cap(h.n, h.period);
    for (std::size_t i = 0;; ++i) {
        if (local.back().empty()) {
            out.hub = StateSet(h.n);
            out.preperiod = i;
            break;
        }
        if (i > cap) throw ResourceCapError("periodic scheme iteration cap exceeded");
        StateSet next = cpre(h.game, local.back());
        auto it = seen.find(next);
        local.push_back(next);
        if (it != seen.end()) {
            out.preperiod = it->second;
            out.period = local.size() - 1 - it->second;
            out.hub = project(h.to_product(local[out.preperiod]), h.n);
            break;
        }
        seen.emplace(std::move(next), local.size() - 1);
    }
    for (const auto& s : local) out.trace.push_back(h.to_product(s));
    return out;
}

/// Least t with U×{t} inside the arena and almost-surely reaching R×{k mod r}, in the
/// given arena (already at the scheme's period).
inline std::optional<std::size_t> self_recurrent_in(const Arena& arena, const StateSet& u,
                                                    const PeriodicScheme& scheme) {
    if (scheme.rejected()) return std::nullopt;
    const std::size_t r = arena.period;
    StateSet goal = arena.to_local(place(scheme.hub, r, scheme.preperiod % r));
    auto reach = arena.to_product(almost_sure_reach(arena.game, goal).region);
    StateSet dom = arena.domain();
    for (std::size_t t = 0; t < r; ++t) {
        StateSet at = place(u, r, t);
        if (at.subset_of(dom) && at.subset_of(reach)) return t;
    }
    return std::nullopt;
}

/// Self-recurrence in product(g, scheme.r) restricted to the expansion of `k` (a set over
/// Q×[k_period]).
inline std::optional<std::size_t> is_self_recurrent(const Game& g, const StateSet& u, const PeriodicScheme& scheme,
                                                    const StateSet& k, std::size_t k_period,
                                                    std::size_t max_states = default_max_product_states) {
    if (scheme.rejected()) return std::nullopt;
    if (u.empty() || !u.subset_of(g.target())) throw InputError("candidate must be a nonempty subset of the target");
    StateSet expanded = expand_set(k, g.num_states(), k_period, scheme.period);
    Arena arena = make_arena(g, scheme.period, expanded, max_states);
    return self_recurrent_in(arena, u, scheme);
}

namespace detail {

/// Mutable state of the almost-sure weakly loop.
struct WeaklyLoop {
    const Game* g;
    StateSet t;
    SolveOptions opts;
    std::size_t r = 1;
    StateSet s, k;

    Arena arena_s() const { return make_arena(*g, r, s, opts.max_product_states); }

    std::optional<ThenStep> try_candidate(const Arena& inner, const StateSet& u, std::vector<std::string>* notes) const {
        const std::size_t n = g->num_states();
        if (!place(u, r, 0).subset_of(k)) return std::nullopt;
        PeriodicScheme scheme = periodic_scheme(inner, u, 0);
        if (scheme.rejected()) return std::nullopt;
        const std::size_t r2 = scheme.period;
        if (r2 % r != 0) throw InvariantError("scheme period is not a multiple of the arena period");
        if (r2 > opts.max_product_states / n)
            throw ResourceCapError("period " + std::to_string(r2) + " exceeds the product-state cap");
        StateSet s2 = expand_set(s, n, r, r2), k2 = expand_set(k, n, r, r2);
        Arena outer2 = make_arena(*g, r2, s2, opts.max_product_states);
        Arena inner2 = restrict_arena(outer2, k2);
        auto placed = self_recurrent_in(inner2, u, scheme);
        if (notes && opts.compare_full_product) {
            auto bare = is_self_recurrent(*g, u, scheme, k, r, opts.max_product_states);
            if (bare != placed)
                notes->push_back("self-recurrence of " + format_set(*g, u) + " differs between the restricted and the full product");
        }
        if (!placed || *placed != 0) return std::nullopt;

        ThenStep step;
        step.candidate = u;
        step.placement = 0;
        step.period = r2;
        step.arena = k2;
        StateSet goal = inner2.to_local(place(scheme.hub, r2, scheme.preperiod % r2));
        StateSet w = almost_sure_reach(inner2.game, goal).region;
        step.core = inner2.to_product(w);
        step.removed = inner2.to_product(pos_attractor(inner2.game, Player::one, w).region);
        step.scheme = std::move(scheme);
        return step;
    }

    void apply(const ThenStep& step) {
        const std::size_t n = g->num_states();
        s = expand_set(s, n, r, step.period);
        k = expand_set(k, n, r, step.period) - step.removed;
        r = step.period;
    }

    ElseStep else_step(const Arena& outer) const {
        ElseStep e;
        e.arena = k;
        e.removed = outer.to_product(pos_attractor(outer.game, Player::two, outer.to_local(k)).region);
        return e;
    }

    void apply(const ElseStep& step) {
        s -= step.removed;
        k = s;
    }

    /// Runs one iteration; returns the record.
    std::variant<ThenStep, ElseStep> step(std::vector<std::string>* notes) {
        Arena outer = arena_s();
        Arena inner = restrict_arena(outer, k);
        for (const auto& u : nonempty_subsets(t)) {
            if (auto then = try_candidate(inner, u, notes)) {
                apply(*then);
                return *then;
            }
        }
        ElseStep e = else_step(outer);
        apply(e);
        return e;
    }
};

}  // namespace detail

inline WinRegion slices_region(const StateSet& final_s, std::size_t n, std::size_t r) {
    std::vector<StateSet> slices;
    for (std::size_t i = 0; i < r; ++i) slices.push_back(slice(final_s, n, i));
    auto w = region_from_supports(std::move(slices), n);
    w.period = r;
    return w;
}

/// Almost-sure weakly synchronizing region with its full iteration trace.
inline WinRegion solve_as_weakly(const Game& g, const StateSet& t, const SolveOptions& opts = {}) {
    const std::size_t n = g.num_states();
    detail::WeaklyLoop loop{&g, t, opts, 1, g.all_states(), g.all_states()};
    SolveCertificate cert;
    const std::size_t cap = std::max<std::size_t>(n * n, 1);
    while (!loop.k.empty()) {
        if (cert.iterations.size() >= cap)
            throw InvariantError("almost-sure weakly loop exceeded n^2 iterations");
        cert.iterations.push_back(loop.step(&cert.notes));
    }
    cert.final_period = loop.r;
    cert.final_region = loop.s;
    auto w = slices_region(loop.s, n, loop.r);
    w.certificate = std::move(cert);
    return w;
}

/// Re-executes a certificate, checking every recorded set; returns the recomputed final region.
inline StateSet replay_certificate(const Game& g, const StateSet& t, const SolveCertificate& cert,
                                   const SolveOptions& opts = {}) {
    detail::WeaklyLoop loop{&g, t, opts, 1, g.all_states(), g.all_states()};
    auto fail = [](std::size_t i, const std::string& what) {
        throw InvariantError("certificate replay diverges at iteration " + std::to_string(i + 1) + ": " + what);
    };
    for (std::size_t i = 0; i < cert.iterations.size(); ++i) {
        if (loop.k.empty()) fail(i, "loop already finished");
        Arena outer = loop.arena_s();
        Arena inner = restrict_arena(outer, loop.k);
        std::optional<ThenStep> first;
        for (const auto& u : nonempty_subsets(t))
            if ((first = loop.try_candidate(inner, u, nullptr))) break;
        if (const auto* then = std::get_if<ThenStep>(&cert.iterations[i])) {
            if (!first) fail(i, "no candidate is accepted");
            if (first->candidate != then->candidate) fail(i, "a different candidate is accepted first");
            if (first->period != then->period || first->scheme.hub != then->scheme.hub ||
                first->scheme.preperiod != then->scheme.preperiod || first->scheme.trace != then->scheme.trace)
                fail(i, "periodic scheme differs");
            if (first->arena != then->arena || first->core != then->core || first->removed != then->removed)
                fail(i, "arena, core or removed set differs");
            loop.apply(*first);
        } else {
            const auto& rec = std::get<ElseStep>(cert.iterations[i]);
            if (first) fail(i, "a candidate is accepted where none was recorded");
            ElseStep e = loop.else_step(outer);
            if (e.arena != rec.arena || e.removed != rec.removed) fail(i, "losing attractor differs");
            loop.apply(e);
        }
    }
    if (!loop.k.empty()) throw InvariantError("certificate replay ends before the loop terminates");
    if (loop.r != cert.final_period || loop.s != cert.final_region)
        throw InvariantError("certificate replay reaches a different final region");
    return loop.s;
}

namespace detail {

/// Returns the winning product states of `a` (at some period dividing the returned one).
inline std::pair<StateSet, std::size_t> solve_det_rec(const Arena& a, const StateSet& target, std::size_t depth,
                                                      const SolveOptions& opts) {
    if (depth > a.n) throw InvariantError("recursion deeper than the number of states");
    auto found = find_accepting_scc(a.game, a.to_local(target), opts.vertex_budget);
    if (!found) return {StateSet(a.universe()), a.period};
    const std::size_t p = found->period;
    if (p % a.period != 0) throw InvariantError("accepting SCC period is not a multiple of the arena period");
    Arena lifted = lift_arena(a, p, opts.max_product_states);
    // U ⊆ target sits at counter 0; U×{0} in the lifted arena keeps counter 0.
    StateSet u0 = lifted.to_local(a.to_product(found->accepting));
    StateSet w = lifted.to_product(attractor(lifted.game, u0).region);
    StateSet rest = lifted.domain() - w;
    if (rest.empty()) return {w, p};
    Arena sub = restrict_arena(lifted, rest);
    StateSet next_target = place(project(target, a.n), p, 0) - w;
    auto [inner, period] = solve_det_rec(sub, next_target, depth + 1, opts);
    return {expand_set(w, a.n, p, period) | inner, period};
}

}  // namespace detail

/// Deterministic games: recursive accepting-SCC decomposition. Returns winning Dirac states.
inline StateSet solve_as_weakly_det(const Game& g, const StateSet& t, const SolveOptions& opts = {}) {
    if (!g.is_deterministic()) throw InputError("game is not deterministic");
    const std::size_t n = g.num_states();
    Arena full = make_arena(g, 1, g.all_states(), opts.max_product_states);
    auto [win, period] = detail::solve_det_rec(full, place(t, 1, 0), 0, opts);
    (void)period;
    return project(win, n);
}

inline WinRegion solve_as(const Game& g, const StateSet& t, Mode mode, const SolveOptions& opts = {}) {
    const std::size_t n = g.num_states();
    switch (mode) {
        case Mode::always:
            return solve_sure(g, t, Mode::always, opts);
        case Mode::strongly:
            return region_from_supports({almost_sure_cobuchi(g, t)}, n);
        case Mode::weakly:
            return solve_as_weakly(g, t, opts);
        case Mode::eventually: {
            auto sure = solve_sure(g, t, Mode::eventually, opts);
            auto weak = solve_as_weakly(g, t, opts);
            auto supports = sure.maximal_supports;
            supports.insert(supports.end(), weak.maximal_supports.begin(), weak.maximal_supports.end());
            auto w = region_from_supports(std::move(supports), n);
            w.chain = std::move(sure.chain);
            w.period = weak.period;
            w.certificate = std::move(weak.certificate);
            return w;
        }
    }
    throw InvariantError("unhandled mode");
}

inline WinRegion solve(const Game& g, const StateSet& t, Mode mode, WinKind win, const SolveOptions& opts = {}) {
    return win == WinKind::sure ? solve_sure(g, t, mode, opts) : solve_as(g, t, mode, opts);
}

struct MembershipResult {
    bool member = false;
    std::optional<StateSet> support;   // a maximal winning support containing Supp(d)
    std::optional<std::size_t> index;  // common CPre index, when that is the reason
};

inline MembershipResult membership(const Game& g, const StateSet& t, Mode mode, WinKind win, const Distribution& d,
                                   const SolveOptions& opts = {}) {
    const std::size_t n = g.num_states();
    for (const auto& e : d.entries())
        if (e.first >= n) throw InputError("distribution support outside the game's states");
    StateSet supp = d.support(n);
    WinRegion region = solve(g, t, mode, win, opts);
    MembershipResult out;
    for (std::size_t i = 0; i < region.chain.size(); ++i)
        if (supp.subset_of(region.chain[i])) {
            out.member = true;
            out.index = i;
            break;
        }
    for (const auto& m : region.maximal_supports)
        if (supp.subset_of(m)) {
            out.member = true;
            out.support = m;
            break;
        }
    return out;
}

/// Sorted "q@i" names (or plain names when `period` is 0).
inline std::vector<std::string> product_names(const Game& g, const StateSet& s, std::size_t period) {
    std::vector<std::string> out;
    const std::size_t n = g.num_states();
    s.for_each([&](StateId x) {
        out.push_back(period == 0 ? g.state_name(x)
                                  : product_name(g.state_name(product_base(n, x)), product_counter(n, x)));
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline Json certificate_to_json(const Game& g, const SolveCertificate& cert) {
    Json its = Json::array();
    std::size_t r = 1;
    for (const auto& it : cert.iterations) {
        Json j;
        if (const auto* th = std::get_if<ThenStep>(&it)) {
            j["kind"] = "THEN";
            j["U"] = product_names(g, th->candidate, 0);
            j["placementCounter"] = th->placement;
            Json trace = Json::array();
            for (const auto& v : th->scheme.trace) trace.push_back(product_names(g, v, r));
            j["scheme"] = {{"R", product_names(g, th->scheme.hub, 0)},
                           {"r", th->scheme.period},
                           {"k", th->scheme.preperiod},
                           {"trace", std::move(trace)}};
            r = th->period;
            j["period"] = r;
            j["K"] = product_names(g, th->arena, r);
            j["W"] = product_names(g, th->core, r);
            j["X"] = product_names(g, th->removed, r);
        } else {
            const auto& el = std::get<ElseStep>(it);
            j["kind"] = "ELSE";
            j["period"] = r;
            j["K"] = product_names(g, el.arena, r);
            j["L"] = product_names(g, el.removed, r);
        }
        its.push_back(std::move(j));
    }
    Json out;
    out["iterations"] = std::move(its);
    out["finalPeriod"] = cert.final_period;
    out["finalS"] = product_names(g, cert.final_region, cert.final_period);
    out["notes"] = cert.notes;
    return out;
}

inline Json region_to_json(const Game& g, const WinRegion& w) {
    Json out;
    out["winningDiracs"] = g.names_of(w.winning_diracs);
    Json sup = Json::array();
    for (const auto& s : w.maximal_supports) sup.push_back(g.names_of(s));
    out["maximalWinningSupports"] = std::move(sup);
    out["period"] = w.period;
    if (w.certificate) out["certificate"] = certificate_to_json(g, *w.certificate);
    return out;
}

}  // namespace syncgame
