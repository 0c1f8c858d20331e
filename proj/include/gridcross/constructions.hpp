#pragma once

// Extremal drawings, random inputs, and the matching/tree/stacking procedures
// used by the counting corollaries.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "gridcross/crossings.hpp"
#include "gridcross/errors.hpp"
#include "gridcross/geom.hpp"
#include "gridcross/grid_graph.hpp"

namespace gridcross {

/// Uniform draw in [0, n) by rejection, so results do not depend on the
/// standard library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = span - span % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

/// K_{l,l} with l = k^(d-1): every point of the bottom layer of the
/// k x ... x k x 2 grid joined to every point of the top layer.
/// Bottom-layer vertices come first, each layer in lexicographic order.
[[nodiscard]] inline GridGraph layered_complete_bipartite(Coord k, int d) {
    if (k < 1 || d < 2) throw ValidationError("layered graph needs k >= 1 and d >= 2");
    std::vector<Coord> sides(static_cast<std::size_t>(d - 1), k);
    sides.push_back(2);
    const auto pts = GridSpec(sides).points();
    std::vector<LatticePoint> vs;
    vs.reserve(pts.size());
    for (Coord layer : {1, 2}) {
        for (const auto& p : pts) {
            if (p[static_cast<std::size_t>(d - 1)] == layer) vs.push_back(p);
        }
    }
    const std::size_t half = vs.size() / 2;
    std::vector<Edge> es;
    es.reserve(half * half);
    for (std::size_t i = 0; i < half; ++i) {
        for (std::size_t j = 0; j < half; ++j) es.push_back({i, half + j});
    }
    return GridGraph(static_cast<std::size_t>(d), std::move(vs), std::move(es));
}

/// Disjoint copies of the layered graph on k x ... x k x 2 blocks of the
/// side x ... x side x 2 grid.
[[nodiscard]] inline GridGraph tile_bipartite(Coord k, Coord side, int d) {
    if (d < 3) throw ValidationError("tiling needs d >= 3");
    if (k < 1 || side < 1 || side % k != 0) throw ValidationError("k must divide side");
    const GridGraph block = layered_complete_bipartite(k, d);
    const auto offsets = GridSpec::cube(side / k, static_cast<std::size_t>(d - 1)).points();
    std::vector<LatticePoint> vs;
    std::vector<Edge> es;
    for (const auto& b : offsets) {
        std::vector<Coord> shift(static_cast<std::size_t>(d), 0);
        for (std::size_t i = 0; i + 1 < shift.size(); ++i) shift[i] = (b[i] - 1) * k;
        const LatticePoint offset(std::move(shift));
        const std::size_t base = vs.size();
        for (const auto& v : block.vertices()) vs.push_back(v + offset);
        for (const auto& e : block.edges()) es.push_back({base + e.u, base + e.w});
    }
    return GridGraph(static_cast<std::size_t>(d), std::move(vs), std::move(es));
}

struct SkipBoundParams {
    Coord k;
    int d;
};

/// sum_{r=1..k} A_d(r) (k/r)^2 with A_3(r) = 4r and A_d(r) = (d-1)(2r+1)^(d-2)
/// for d >= 4: planes through an edge grouped by skip r, each carrying at
/// most (k/r)^2 crossing edges.
[[nodiscard]] inline mpq_class analytic_skip_bound(SkipBoundParams params) {
    const auto [k, d] = params;
    if (k < 1 || d < 3) throw ValidationError("skip bound needs k >= 1 and d >= 3");
    mpq_class sum = 0;
    for (Coord r = 1; r <= k; ++r) {
        mpz_class planes;
        if (d == 3) {
            planes = 4 * r;
        } else {
            mpz_ui_pow_ui(planes.get_mpz_t(), static_cast<unsigned long>(2 * r + 1),
                          static_cast<unsigned long>(d - 2));
            planes *= d - 1;
        }
        mpq_class per_plane(mpz_class(static_cast<long>(k * k)), mpz_class(static_cast<long>(r * r)));
        per_plane.canonicalize();
        sum += planes * per_plane;
    }
    return sum;
}

inline constexpr long kRandomGraphVolumeCap = 4096;

/// All grid points as vertices and m distinct random proper edges.
/// Candidates are sampled without replacement; output edges are sorted.
[[nodiscard]] inline GridGraph random_proper_graph(const GridSpec& spec, std::size_t m,
                                                   std::uint64_t seed, bool primitive_only) {
    if (spec.volume() > kRandomGraphVolumeCap) {
        throw CapExceeded("random graphs are limited to volume " +
                          std::to_string(kRandomGraphVolumeCap));
    }
    auto vs = spec.points();
    std::vector<Edge> candidates;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            // The grid is a box, so every interior lattice point of a segment
            // between grid points is itself a grid point: proper iff primitive.
            const Coord steps = gcd_reduce(Segment(vs[i], vs[j])).g;
            const bool proper = steps == 1;
            const bool primitive = steps == 1;
            if (proper && (primitive || !primitive_only)) candidates.push_back({i, j});
        }
    }
    if (m > candidates.size()) {
        throw ValidationError("requested " + std::to_string(m) + " edges but only " +
                              std::to_string(candidates.size()) + " proper candidates exist");
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
        std::swap(candidates[i], candidates[i + uniform_below(rng, candidates.size() - i)]);
    }
    candidates.resize(m);
    std::sort(candidates.begin(), candidates.end());
    return GridGraph(spec.dim(), std::move(vs), std::move(candidates));
}

/// Greedy random crossing-free matching between the two layers of the
/// k x ... x k x 2 grid. Stops after target_edges edges (0 means maximal).
[[nodiscard]] inline GridGraph random_crossing_free_matching(Coord k, int d, std::uint64_t seed,
                                                             std::size_t target_edges = 0) {
    const GridGraph full = layered_complete_bipartite(k, d);
    std::vector<Edge> order = full.edges();
    std::mt19937_64 rng(seed);
    deterministic_shuffle(order, rng);

    const auto& vs = full.vertices();
    std::vector<bool> used(vs.size(), false);
    std::vector<Edge> chosen;
    for (const auto& e : order) {
        if (target_edges != 0 && chosen.size() == target_edges) break;
        if (used[e.u] || used[e.w]) continue;
        bool clear = true;
        for (const auto& c : chosen) {
            if (is_crossing(detail::classify(vs[e.u], vs[e.w], vs[c.u], vs[c.w]).tag)) {
                clear = false;
                break;
            }
        }
        if (!clear) continue;
        used[e.u] = used[e.w] = true;
        chosen.push_back(e);
    }
    std::sort(chosen.begin(), chosen.end());
    return GridGraph(full.dim(), vs, std::move(chosen));
}

namespace detail {

inline bool is_matching(const GridGraph& g) {
    std::vector<bool> used(g.vertex_count(), false);
    for (const auto& e : g.edges()) {
        if (used[e.u] || used[e.w]) return false;
        used[e.u] = used[e.w] = true;
    }
    return true;
}

inline std::size_t l1_distance(const LatticePoint& a, const LatticePoint& b) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += static_cast<std::size_t>(std::abs(a[i] - b[i]));
    return s;
}

/// Edge indices of the first cycle met by a depth-first search that visits
/// vertices and incident edges in index order; empty when acyclic.
inline std::vector<std::size_t> first_cycle(std::size_t n, const std::vector<Edge>& edges,
                                            const std::vector<bool>& alive) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!alive[e]) continue;
        adj[edges[e].u].push_back({edges[e].w, e});
        adj[edges[e].w].push_back({edges[e].u, e});
    }
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent_edge(n, none), parent(n, none), state(n, 0);
    std::vector<std::size_t> cycle;

    std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
        state[v] = 1;
        for (const auto& [to, e] : adj[v]) {
            if (e == parent_edge[v]) continue;
            if (state[to] == 1) {
                cycle.push_back(e);
                for (std::size_t x = v; x != to; x = parent[x]) cycle.push_back(parent_edge[x]);
                return true;
            }
            if (state[to] == 0) {
                parent[to] = v;
                parent_edge[to] = e;
                if (dfs(to)) return true;
            }
        }
        state[v] = 2;
        return false;
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (state[v] == 0 && dfs(v)) break;
    }
    return cycle;
}

}  // namespace detail

/// Extends a crossing-free inter-layer matching on the k x ... x k x 2 grid
/// to a crossing-free spanning tree: add every unit edge inside a layer, then
/// repeatedly delete the lowest-index non-matching edge of the first cycle.
/// Matching edges keep indices 0..|M|-1 in the result.
[[nodiscard]] inline GridGraph augment_matching_to_spanning_tree(const GridGraph& matching,
                                                                 Coord k, int d) {
    const GridGraph grid = layered_complete_bipartite(k, d);
    if (matching.dim() != static_cast<std::size_t>(d)) throw ValidationError("dimension mismatch");
    {
        auto expect = grid.vertices();
        auto got = matching.vertices();
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        if (expect != got) {
            throw ValidationError("vertex set must be the full k x ... x k x 2 grid");
        }
    }
    const auto last = static_cast<std::size_t>(d - 1);
    const auto& vs = matching.vertices();
    for (const auto& e : matching.edges()) {
        if (vs[e.u][last] == vs[e.w][last]) {
            throw ValidationError("matching edges must join the two layers");
        }
    }
    if (!detail::is_matching(matching)) throw ValidationError("input is not a matching");
    if (count_crossings_naive(matching).total != 0) {
        throw ValidationError("input matching is not crossing-free");
    }

    std::vector<Edge> edges = matching.edges();
    const std::size_t matched = edges.size();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (vs[i][last] == vs[j][last] && detail::l1_distance(vs[i], vs[j]) == 1) {
                edges.push_back({i, j});
            }
        }
    }
    // Layers are only joined by matching edges; with none, use one vertical
    // unit edge, which cannot meet the in-layer edges.
    if (matched == 0) {
        for (std::size_t j = 0; j < vs.size(); ++j) {
            if (vs[j][last] != vs[0][last] && detail::l1_distance(vs[0], vs[j]) == 1) {
                edges.push_back({0, j});
                break;
            }
        }
    }
    std::vector<bool> alive(edges.size(), true);
    for (;;) {
        const auto cycle = detail::first_cycle(vs.size(), edges, alive);
        if (cycle.empty()) break;
        std::size_t victim = std::numeric_limits<std::size_t>::max();
        for (std::size_t e : cycle) {
            if (e >= matched) victim = std::min(victim, e);
        }
        alive[victim] = false;  // a matching is acyclic, so a victim exists
    }
    std::vector<Edge> kept;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (alive[e]) kept.push_back(edges[e]);
    }
    return GridGraph(matching.dim(), vs, std::move(kept));
}

/// A graph whose edges run between layers `lower` and `lower + 1` (last
/// coordinate) of the k x ... x k grid.
struct LayerPair {
    Coord lower;
    GridGraph graph;
};

/// Union of per-layer-pair graphs on the full k x ... x k grid, whose
/// vertices are listed in lexicographic order.
[[nodiscard]] inline GridGraph stack_layer_graphs(std::span<const LayerPair> pairs, Coord k, int d) {
    if (k < 2 || d < 2) throw ValidationError("stacking needs k >= 2 and d >= 2");
    const GridSpec spec = GridSpec::cube(k, static_cast<std::size_t>(d));
    auto vs = spec.points();
    std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index;
    for (std::size_t i = 0; i < vs.size(); ++i) index.emplace(vs[i], i);
    const auto last = static_cast<std::size_t>(d - 1);

    std::vector<Edge> es;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [lower, g] = pairs[p];
        const std::string where = "layer pair " + std::to_string(p) + ": ";
        if (lower < 1 || lower >= k) throw ValidationError(where + "lower layer out of range");
        if (g.dim() != static_cast<std::size_t>(d)) throw ValidationError(where + "dimension mismatch");
        for (const auto& v : g.vertices()) {
            if (!spec.contains(v) || (v[last] != lower && v[last] != lower + 1)) {
                std::ostringstream os;
                os << where << "vertex " << v << " lies outside layers " << lower << " and "
                   << lower + 1;
                throw ValidationError(os.str());
            }
        }
        for (const auto& e : g.edges()) {
            const auto& a = g.vertices()[e.u];
            const auto& b = g.vertices()[e.w];
            if (a[last] == b[last]) throw ValidationError(where + "edge does not span both layers");
            es.push_back({index.at(a), index.at(b)});
        }
    }
    return GridGraph(spec.dim(), std::move(vs), std::move(es));
}

}  // namespace gridcross
