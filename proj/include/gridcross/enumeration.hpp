#pragma once

// Exact counting of crossing-free edge sets on small grids.
//
// Crossing-free graphs over a fixed candidate edge universe are exactly the
// independent sets of the conflict graph, so every count here is an
// independent-set count over at most 64 nodes held as bitmasks.

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridcross/errors.hpp"
#include "gridcross/geom.hpp"
#include "gridcross/grid_graph.hpp"

namespace gridcross {

using NodeMask = std::uint64_t;

inline constexpr std::size_t kCandidateCap = 64;
inline constexpr long kSpanningTreeVolumeCap = 9;

[[nodiscard]] constexpr NodeMask bit(std::size_t i) noexcept { return NodeMask{1} << i; }

struct ConflictGraph {
    std::vector<LatticePoint> points;  // vertex universe
    std::vector<Edge> endpoints;       // candidate -> indices into points
    std::vector<Segment> candidates;
    std::vector<NodeMask> conflicts;   // symmetric, irreflexive

    [[nodiscard]] std::size_t size() const noexcept { return candidates.size(); }

    [[nodiscard]] std::size_t conflict_pairs() const {
        std::size_t twice = 0;
        for (NodeMask m : conflicts) twice += static_cast<std::size_t>(std::popcount(m));
        return twice / 2;
    }

    /// Conflicts plus "shares an endpoint": independent sets are matchings.
    [[nodiscard]] std::vector<NodeMask> matching_conflicts() const {
        std::vector<NodeMask> adj = conflicts;
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j < size(); ++j) {
                if (i == j) continue;
                const Edge a = endpoints[i], b = endpoints[j];
                if (a.u == b.u || a.u == b.w || a.w == b.u || a.w == b.w) adj[i] |= bit(j);
            }
        }
        return adj;
    }
};

namespace detail {

inline void check_cap(std::size_t cap) {
    if (cap > kCandidateCap) {
        throw ValidationError("candidate cap cannot exceed " + std::to_string(kCandidateCap));
    }
}

inline ConflictGraph make_conflict_graph(std::vector<LatticePoint> points, std::vector<Edge> endpoints,
                                         std::size_t cap) {
    if (endpoints.size() > cap) {
        throw CapExceeded(std::to_string(endpoints.size()) + " candidate edges exceed the cap of " +
                          std::to_string(cap));
    }
    ConflictGraph cg{std::move(points), std::move(endpoints), {}, {}};
    for (const auto& e : cg.endpoints) cg.candidates.emplace_back(cg.points[e.u], cg.points[e.w]);
    cg.conflicts.assign(cg.size(), 0);
    for (std::size_t i = 0; i < cg.size(); ++i) {
        for (std::size_t j = i + 1; j < cg.size(); ++j) {
            if (is_crossing(cross_tag(cg.candidates[i], cg.candidates[j]))) {
                cg.conflicts[i] |= bit(j);
                cg.conflicts[j] |= bit(i);
            }
        }
    }
    return cg;
}

}  // namespace detail

/// Candidates: all point pairs of the grid whose open segment avoids every
/// grid point.
[[nodiscard]] inline ConflictGraph build_conflict_graph(const GridSpec& spec,
                                                        std::size_t cap = kCandidateCap) {
    detail::check_cap(cap);
    // Unit edges alone give volume - 1 candidates.
    if (spec.volume() > static_cast<long>(cap) + 1) {
        throw CapExceeded("grid " + spec.to_string() + " has more than " + std::to_string(cap) +
                          " candidate edges");
    }
    auto pts = spec.points();
    std::vector<Edge> ends;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            // Grid boxes are convex, so avoiding grid points means primitive.
            if (is_primitive(Segment(pts[i], pts[j]))) ends.push_back({i, j});
        }
    }
    return detail::make_conflict_graph(std::move(pts), std::move(ends), cap);
}

/// Conflict graph over the edges of an existing graph.
[[nodiscard]] inline ConflictGraph build_conflict_graph(const GridGraph& g,
                                                        std::size_t cap = kCandidateCap) {
    detail::check_cap(cap);
    return detail::make_conflict_graph(g.vertices(), g.edges(), cap);
}

/// Independent sets (including the empty set) by branching on a maximum
/// degree node, splitting off connected components, and memoizing on the
/// live-node mask, which determines the induced subgraph.
class IndependentSetCounter {
public:
    explicit IndependentSetCounter(std::vector<NodeMask> adjacency) : adj_(std::move(adjacency)) {
        if (adj_.size() > kCandidateCap) throw CapExceeded("more than 64 nodes");
    }

    [[nodiscard]] mpz_class count() {
        const NodeMask all = adj_.size() == 64 ? ~NodeMask{0} : bit(adj_.size()) - 1;
        return count(all);
    }

    [[nodiscard]] std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    NodeMask component_of(NodeMask live) const {
        NodeMask comp = live & (~live + 1);
        NodeMask frontier = comp;
        while (frontier) {
            NodeMask next = 0;
            for (NodeMask f = frontier; f; f &= f - 1) next |= adj_[std::countr_zero(f)];
            next &= live & ~comp;
            comp |= next;
            frontier = next;
        }
        return comp;
    }

    mpz_class count(NodeMask live) {
        if (live == 0) return 1;
        if (auto it = memo_.find(live); it != memo_.end()) return it->second;

        mpz_class result;
        const NodeMask comp = component_of(live);
        if (comp != live) {
            result = count(comp) * count(live & ~comp);
        } else {
            std::size_t pivot = 0;
            int best = -1;
            for (NodeMask f = live; f; f &= f - 1) {
                const auto v = static_cast<std::size_t>(std::countr_zero(f));
                const int deg = std::popcount(adj_[v] & live);
                if (deg > best) {
                    best = deg;
                    pivot = v;
                }
            }
            if (best == 0) {
                mpz_ui_pow_ui(result.get_mpz_t(), 2, static_cast<unsigned long>(std::popcount(live)));
            } else {
                const NodeMask rest = live & ~bit(pivot);
                result = count(rest) + count(rest & ~adj_[pivot]);
            }
        }
        memo_.emplace(live, result);
        return result;
    }

    std::vector<NodeMask> adj_;
    std::unordered_map<NodeMask, mpz_class> memo_;
};

[[nodiscard]] inline mpz_class count_independent_sets(std::vector<NodeMask> adjacency) {
    return IndependentSetCounter(std::move(adjacency)).count();
}

[[nodiscard]] inline mpz_class count_crossing_free_subgraphs(const ConflictGraph& cg) {
    return count_independent_sets(cg.conflicts);
}

[[nodiscard]] inline mpz_class count_crossing_free_matchings(const ConflictGraph& cg) {
    return count_independent_sets(cg.matching_conflicts());
}

/// Maximum independent set size by branch and bound: branch on a maximum
/// degree node, take degree <= 1 nodes greedily, prune when the live count
/// cannot beat the incumbent.
[[nodiscard]] inline std::size_t maximum_independent_set(const std::vector<NodeMask>& adj) {
    if (adj.size() > kCandidateCap) throw CapExceeded("more than 64 nodes");
    std::size_t best = 0;
    std::function<void(NodeMask, std::size_t)> search = [&](NodeMask live, std::size_t size) {
        for (;;) {
            if (size + static_cast<std::size_t>(std::popcount(live)) <= best) return;
            if (live == 0) {
                best = size;
                return;
            }
            // A node of degree <= 1 lies in some maximum independent set.
            NodeMask low = 0;
            for (NodeMask f = live; f && !low; f &= f - 1) {
                const auto v = static_cast<std::size_t>(std::countr_zero(f));
                if (std::popcount(adj[v] & live) <= 1) low = bit(v);
            }
            if (!low) break;
            live &= ~(low | adj[std::countr_zero(low)]);
            ++size;
        }
        std::size_t pivot = 0;
        int hi_deg = -1;
        for (NodeMask f = live; f; f &= f - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(f));
            const int deg = std::popcount(adj[v] & live);
            if (deg > hi_deg) {
                hi_deg = deg;
                pivot = v;
            }
        }
        search(live & ~(bit(pivot) | adj[pivot]), size + 1);
        search(live & ~bit(pivot), size);
    };
    const NodeMask all = adj.size() == 64 ? ~NodeMask{0} : bit(adj.size()) - 1;
    search(all, 0);
    return best;
}

[[nodiscard]] inline std::size_t max_crossing_free_edges(const GridSpec& spec) {
    return maximum_independent_set(build_conflict_graph(spec).conflicts);
}

/// Visits every conflict-free spanning tree of the candidate graph as a list
/// of candidate indices (increasing). Limited to at most 9 points.
inline void for_each_crossing_free_spanning_tree(
    const ConflictGraph& cg, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    const std::size_t n = cg.points.size();
    if (n > static_cast<std::size_t>(kSpanningTreeVolumeCap)) {
        throw CapExceeded("spanning-tree enumeration is limited to " +
                          std::to_string(kSpanningTreeVolumeCap) + " points");
    }
    if (n == 0) return;
    if (n == 1) {
        visit({});
        return;
    }
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> comp(n);

    std::function<void(std::size_t, NodeMask)> rec = [&](std::size_t next, NodeMask blocked) {
        if (chosen.size() == n - 1) {
            visit(chosen);
            return;
        }
        if (cg.size() - next < n - 1 - chosen.size()) return;
        for (std::size_t c = next; c < cg.size(); ++c) {
            if (cg.size() - c < n - 1 - chosen.size()) return;
            if (blocked & bit(c)) continue;
            const std::size_t a = comp[cg.endpoints[c].u], b = comp[cg.endpoints[c].w];
            if (a == b) continue;
            const auto saved = comp;
            for (auto& x : comp) {
                if (x == b) x = a;
            }
            chosen.push_back(c);
            rec(c + 1, blocked | cg.conflicts[c]);
            chosen.pop_back();
            comp = saved;
        }
    };
    std::iota(comp.begin(), comp.end(), 0);
    rec(0, 0);
}

[[nodiscard]] inline mpz_class count_crossing_free_spanning_trees(const GridSpec& spec) {
    if (spec.volume() > kSpanningTreeVolumeCap) {
        throw CapExceeded("spanning-tree counting is limited to volume " +
                          std::to_string(kSpanningTreeVolumeCap));
    }
    mpz_class total = 0;
    for_each_crossing_free_spanning_tree(build_conflict_graph(spec),
                                         [&](const std::vector<std::size_t>&) { ++total; });
    return total;
}

/// prod (2 X_i - 1) - prod X_i.
[[nodiscard]] inline mpz_class bose_formula(const GridSpec& spec) {
    mpz_class doubled = 1, plain = 1;
    for (Coord x : spec.sides) {
        doubled *= 2 * x - 1;
        plain *= static_cast<long>(x);
    }
    return doubled - plain;
}

/// 2^B' C(M, B') with B = (2^d - 1) N, M = C(N, 2), B' = min(B, M).
[[nodiscard]] inline mpz_class ncs_upper_formula(const mpz_class& n, int d) {
    if (n < 2 || d < 1) throw ValidationError("ncs upper bound needs N >= 2 and d >= 1");
    mpz_class b;
    mpz_ui_pow_ui(b.get_mpz_t(), 2, static_cast<unsigned long>(d));
    b = (b - 1) * n;
    const mpz_class m = n * (n - 1) / 2;
    const mpz_class bp = b < m ? b : m;
    if (!bp.fits_ulong_p()) throw ValidationError("ncs upper bound exponent too large");
    const unsigned long k = bp.get_ui();
    mpz_class binom, pow2;
    mpz_bin_ui(binom.get_mpz_t(), m.get_mpz_t(), k);
    mpz_ui_pow_ui(pow2.get_mpz_t(), 2, k);
    return pow2 * binom;
}

/// (floor(c N))^floor(N / (2c)).
[[nodiscard]] inline mpz_class ncs_lower_formula(const mpz_class& n, const mpq_class& c) {
    if (c <= 0) throw ValidationError("c must be positive");
    mpz_class base;
    {
        const mpq_class cn = c * n;
        mpz_fdiv_q(base.get_mpz_t(), cn.get_num_mpz_t(), cn.get_den_mpz_t());
    }
    if (base < 1) throw ValidationError("ncs lower bound needs c N >= 1");
    const mpq_class ratio = mpq_class(n) / (2 * c);
    mpz_class exponent;
    mpz_fdiv_q(exponent.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
    if (!exponent.fits_ulong_p()) throw ValidationError("ncs lower bound exponent too large");
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent.get_ui());
    return out;
}

}  // namespace gridcross
