#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <queue>
#include <vector>

namespace syncgame {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Strongly connected components, iterative Tarjan. Components come out in reverse
/// topological order; `component[v]` gives v's component index.
struct SccDecomposition {
    std::vector<std::vector<std::size_t>> components;
    std::vector<std::size_t> component;
};

inline SccDecomposition strongly_connected(const Adjacency& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    SccDecomposition out;
    out.component.assign(n, unset);
    std::vector<std::size_t> index(n, unset), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::size_t counter = 0;
    struct Frame {
        std::size_t v, next;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.next < adj[f.v].size()) {
                std::size_t w = adj[f.v][f.next++];
                if (index[w] == unset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = out.components.size();
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.components.push_back(std::move(comp));
            }
        }
    }
    return out;
}

/// True if the component has at least one internal edge (singletons need a self-loop).
inline bool is_nontrivial(const Adjacency& adj, const SccDecomposition& scc, std::size_t c) {
    const auto& comp = scc.components[c];
    if (comp.size() > 1) return true;
    const auto& succ = adj[comp[0]];
    return std::find(succ.begin(), succ.end(), comp[0]) != succ.end();
}

/// gcd over internal edges (u,v) of depth(u) + 1 - depth(v), with BFS depths from the
/// component's first vertex. Returns 0 for a trivial component.
inline std::size_t component_period(const Adjacency& adj, const SccDecomposition& scc, std::size_t c) {
    const auto& comp = scc.components[c];
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> depth(adj.size(), unset);
    std::queue<std::size_t> work;
    depth[comp[0]] = 0;
    work.push(comp[0]);
    long long g = 0;
    while (!work.empty()) {
        std::size_t u = work.front();
        work.pop();
        for (std::size_t v : adj[u]) {
            if (scc.component[v] != c) continue;
            if (depth[v] == unset) {
                depth[v] = depth[u] + 1;
                work.push(v);
            }
            long long diff = static_cast<long long>(depth[u]) + 1 - static_cast<long long>(depth[v]);
            g = std::gcd(g, diff < 0 ? -diff : diff);
        }
    }
    return static_cast<std::size_t>(g);
}

}  // namespace syncgame
