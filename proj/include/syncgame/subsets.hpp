#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "syncgame/graph.hpp"
#include "syncgame/operators.hpp"

namespace syncgame {

/// Total map state -> action.
using Selector = std::vector<ActionId>;

inline constexpr std::size_t default_vertex_budget = std::size_t{1} << 16;

/// Union over q ∈ s and all b of Supp(δ(q, α(q), b)).
inline StateSet selector_image(const Game& g, const StateSet& s, const Selector& alpha) {
    StateSet out(g.num_states());
    s.for_each([&](StateId q) {
        for (ActionId b = 0; b < g.num_actions(); ++b)
            for (const auto& e : g.delta(q, alpha[q], b).entries()) out.insert(e.first);
    });
    return out;
}

/// Lazily materialized part of the subset construction.
class SubsetGraph {
public:
    struct Edge {
        std::size_t to;
        Selector label;
    };

    SubsetGraph(const Game& g, std::size_t budget = default_vertex_budget) : game_(&g), budget_(budget) {}

    const Game& game() const { return *game_; }
    std::size_t size() const { return vertices_.size(); }
    const StateSet& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<Edge>& edges(std::size_t i) const { return edges_[i]; }

    std::optional<std::size_t> find(const StateSet& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Adds `seed` and everything reachable from it; returns the seed's vertex index.
    std::size_t explore(const StateSet& seed) {
        if (seed.empty()) throw InputError("subset graph vertices are nonempty");
        std::size_t start = intern(seed);
        std::vector<std::size_t> work{start};
        while (!work.empty()) {
            std::size_t v = work.back();
            work.pop_back();
            if (expanded_[v]) continue;
            expanded_[v] = true;
            for (auto& [image, sel] : successors(vertices_[v])) {
                std::size_t before = vertices_.size();
                std::size_t w = intern(image);
                edges_[v].push_back({w, std::move(sel)});
                if (w == before) work.push_back(w);
            }
        }
        return start;
    }

    Adjacency adjacency() const {
        Adjacency adj(vertices_.size());
        for (std::size_t v = 0; v < vertices_.size(); ++v)
            for (const auto& e : edges_[v]) adj[v].push_back(e.to);
        return adj;
    }

    /// Distinct images of `s` with one witness selector each, in canonical image order.
    std::vector<std::pair<StateSet, Selector>> successors(const StateSet& s) const {
        const Game& g = *game_;
        const std::size_t n = g.num_states(), m = g.num_actions();
        std::vector<std::pair<StateSet, Selector>> partial{{StateSet(n), Selector(n, 0)}};
        s.for_each([&](StateId q) {
            std::vector<std::pair<StateSet, ActionId>> options;
            for (ActionId a = 0; a < m; ++a) {
                StateSet img(n);
                for (ActionId b = 0; b < m; ++b)
                    for (const auto& e : g.delta(q, a, b).entries()) img.insert(e.first);
                bool dup = false;
                for (const auto& o : options) dup = dup || o.first == img;
                if (!dup) options.emplace_back(std::move(img), a);
            }
            std::vector<std::pair<StateSet, Selector>> next;
            std::unordered_map<StateSet, std::size_t, StateSetHash> seen;
            for (const auto& [img, sel] : partial)
                for (const auto& [oimg, a] : options) {
                    StateSet u = img | oimg;
                    if (seen.count(u)) continue;
                    seen.emplace(u, next.size());
                    Selector sel2 = sel;
                    sel2[q] = a;
                    next.emplace_back(std::move(u), std::move(sel2));
                }
            partial = std::move(next);
        });
        std::sort(partial.begin(), partial.end(),
                  [](const auto& x, const auto& y) { return lex_less(x.first, y.first); });
        return partial;
    }

private:
    std::size_t intern(const StateSet& s) {
        auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        if (vertices_.size() >= budget_)
            throw ResourceCapError("subset graph exceeds the vertex budget of " + std::to_string(budget_));
        index_.emplace(s, vertices_.size());
        vertices_.push_back(s);
        edges_.emplace_back();
        expanded_.push_back(false);
        return vertices_.size() - 1;
    }

    const Game* game_;
    std::size_t budget_;
    std::vector<StateSet> vertices_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<bool> expanded_;
    std::unordered_map<StateSet, std::size_t, StateSetHash> index_;
};

inline SubsetGraph reachable_subsets(const Game& g, const StateSet& seed,
                                     std::size_t budget = default_vertex_budget) {
    SubsetGraph graph(g, budget);
    graph.explore(seed);
    return graph;
}

struct SubsetScc {
    std::vector<std::size_t> vertices;
    std::size_t period = 0;
};

/// Nontrivial SCCs of the fragment with their periods.
inline std::vector<SubsetScc> scc_periods(const SubsetGraph& graph) {
    auto adj = graph.adjacency();
    auto scc = strongly_connected(adj);
    std::vector<SubsetScc> out;
    for (std::size_t c = 0; c < scc.components.size(); ++c) {
        if (!is_nontrivial(adj, scc, c)) continue;
        out.push_back({scc.components[c], component_period(adj, scc, c)});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.vertices < y.vertices; });
    return out;
}

struct AcceptingScc {
    StateSet accepting;              // U ⊆ t
    std::vector<StateSet> members;   // the SCC's vertices
    std::size_t period = 0;
};

/// First U ⊆ t (descending size, then lexicographic) lying on a cycle of the subset graph.
inline std::optional<AcceptingScc> find_accepting_scc(const Game& g, const StateSet& t,
                                                      std::size_t budget = default_vertex_budget) {
    for (const auto& u : nonempty_subsets(t)) {
        SubsetGraph graph(g, budget);
        std::size_t root = graph.explore(u);
        auto adj = graph.adjacency();
        auto scc = strongly_connected(adj);
        std::size_t c = scc.component[root];
        if (!is_nontrivial(adj, scc, c)) continue;
        AcceptingScc out;
        out.accepting = u;
        for (auto v : scc.components[c]) out.members.push_back(graph.vertex(v));
        out.period = component_period(adj, scc, c);
        return out;
    }
    return std::nullopt;
}

inline std::string format_set(const Game& g, const StateSet& s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](StateId q) {
        if (!first) out += ",";
        out += g.state_name(q);
        first = false;
    });
    return out + "}";
}

/// Graphviz rendering; edge labels list the selector on the source vertex's states.
inline std::string to_dot(const SubsetGraph& graph) {
    const Game& g = graph.game();
    std::ostringstream out;
    out << "digraph subsets {\n";
    for (std::size_t v = 0; v < graph.size(); ++v) {
        bool accepting = graph.vertex(v).subset_of(g.target());
        out << "  v" << v << " [label=\"" << format_set(g, graph.vertex(v)) << "\""
            << (accepting ? ", peripheries=2" : "") << "];\n";
    }
    for (std::size_t v = 0; v < graph.size(); ++v)
        for (const auto& e : graph.edges(v)) {
            std::string label;
            graph.vertex(v).for_each([&](StateId q) {
                if (!label.empty()) label += " ";
                label += g.state_name(q) + ":" + g.action_name(e.label[q]);
            });
            out << "  v" << v << " -> v" << e.to << " [label=\"" << label << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

}  // namespace syncgame
