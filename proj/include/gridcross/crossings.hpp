#pragma once

// Exact crossing counts and lower-bound certificates for grid graphs.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridcross/errors.hpp"
#include "gridcross/geom.hpp"
#include "gridcross/grid_graph.hpp"

namespace gridcross {

enum class CountMethod { naive, pruned };

[[nodiscard]] inline const char* to_string(CountMethod m) noexcept {
    return m == CountMethod::naive ? "naive" : "pruned";
}

struct CrossingReport {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_edge;
    CountMethod method = CountMethod::naive;

    [[nodiscard]] std::uint64_t per_edge_max() const {
        return per_edge.empty() ? 0 : *std::max_element(per_edge.begin(), per_edge.end());
    }
};

enum class CertificateKind { midpoint_bucket, midpoint_formula, essential_pgrid, greedy_removal };

[[nodiscard]] inline const char* to_string(CertificateKind k) noexcept {
    switch (k) {
        case CertificateKind::midpoint_bucket: return "midpoint-bucket";
        case CertificateKind::midpoint_formula: return "midpoint-formula";
        case CertificateKind::essential_pgrid: return "essential-pgrid";
        case CertificateKind::greedy_removal: return "greedy-removal";
    }
    return "?";
}

/// Bucket statistics for one essential p-grid.
struct PGridLevel {
    std::uint32_t p;
    std::uint64_t incidences;  // sum over edges of |Q^p|
    std::uint64_t points;      // distinct essential p-grid points hit
    mpz_class pairs;           // sum over points of C(R, 2)
};

struct BoundCertificate {
    CertificateKind kind;
    mpq_class value;
    std::optional<std::uint32_t> p_max;
    std::vector<PGridLevel> levels;  // essential-pgrid only
};

namespace detail {

inline void require_proper(const GridGraph& g) {
    if (auto vs = validate_proper(g); !vs.empty()) {
        throw ValidationError("graph is not proper: " + describe(g, vs));
    }
}

inline mpz_class choose2(std::uint64_t r) {
    mpz_class x(static_cast<unsigned long>(r));
    return x * (x - 1) / 2;
}

template <typename Buckets>
mpz_class bucket_pairs(const Buckets& buckets) {
    mpz_class sum = 0;
    for (const auto& [key, r] : buckets) sum += choose2(r);
    return sum;
}

inline mpz_class pow2_minus_1(int d) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(d));
    return p - 1;
}

}  // namespace detail

/// Reference oracle: every unordered edge pair goes through the predicate.
[[nodiscard]] inline CrossingReport count_crossings_naive(const GridGraph& g) {
    detail::require_proper(g);
    const auto segs = g.segments();
    CrossingReport rep{0, std::vector<std::uint64_t>(segs.size(), 0), CountMethod::naive};
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            if (is_crossing(cross_tag(segs[i], segs[j]))) {
                ++rep.total;
                ++rep.per_edge[i];
                ++rep.per_edge[j];
            }
        }
    }
    return rep;
}

/// Sweep-and-prune over axis-aligned bounding boxes. Pairs whose closed
/// boxes are disjoint cannot share a point; in a proper graph two edges with
/// a common endpoint cannot share an interior point either.
[[nodiscard]] inline CrossingReport count_crossings_pruned(const GridGraph& g) {
    detail::require_proper(g);
    const std::size_t m = g.edge_count();
    const std::size_t dim = g.dim();
    CrossingReport rep{0, std::vector<std::uint64_t>(m, 0), CountMethod::pruned};
    if (m < 2) return rep;

    // Sweep along the axis with the largest extent.
    std::vector<Coord> lo(m * dim), hi(m * dim);
    for (std::size_t e = 0; e < m; ++e) {
        const auto& a = g.vertices()[g.edges()[e].u];
        const auto& b = g.vertices()[g.edges()[e].w];
        for (std::size_t k = 0; k < dim; ++k) {
            lo[e * dim + k] = std::min(a[k], b[k]);
            hi[e * dim + k] = std::max(a[k], b[k]);
        }
    }
    std::size_t axis = 0;
    Coord best_extent = -1;
    for (std::size_t k = 0; k < dim; ++k) {
        Coord mn = lo[k], mx = hi[k];
        for (std::size_t e = 0; e < m; ++e) {
            mn = std::min(mn, lo[e * dim + k]);
            mx = std::max(mx, hi[e * dim + k]);
        }
        if (mx - mn > best_extent) {
            best_extent = mx - mn;
            axis = k;
        }
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::pair(lo[x * dim + axis], x) < std::pair(lo[y * dim + axis], y);
    });

    const auto& verts = g.vertices();
    for (std::size_t oi = 0; oi < m; ++oi) {
        const std::size_t i = order[oi];
        const Edge ei = g.edges()[i];
        for (std::size_t oj = oi + 1; oj < m; ++oj) {
            const std::size_t j = order[oj];
            if (lo[j * dim + axis] > hi[i * dim + axis]) break;
            const Edge ej = g.edges()[j];
            if (ei.u == ej.u || ei.u == ej.w || ei.w == ej.u || ei.w == ej.w) continue;
            bool overlap = true;
            for (std::size_t k = 0; k < dim && overlap; ++k) {
                overlap = lo[j * dim + k] <= hi[i * dim + k] && lo[i * dim + k] <= hi[j * dim + k];
            }
            if (!overlap) continue;
            const auto tag = detail::classify(verts[ei.u], verts[ei.w], verts[ej.u], verts[ej.w]).tag;
            if (is_crossing(tag)) {
                ++rep.total;
                ++rep.per_edge[i];
                ++rep.per_edge[j];
            }
        }
    }
    return rep;
}

[[nodiscard]] inline std::uint64_t per_edge_max(const GridGraph& g) {
    return count_crossings_naive(g).per_edge_max();
}

/// Edges sharing a midpoint cross there, so the bucket pair count is a lower bound.
[[nodiscard]] inline BoundCertificate lower_bound_midpoint_bucket(const GridGraph& g) {
    detail::require_proper(g);
    std::unordered_map<LatticePoint, std::uint64_t, LatticePointHash> buckets;
    for (const auto& e : g.edges()) ++buckets[g.vertices()[e.u] + g.vertices()[e.w]];
    return {CertificateKind::midpoint_bucket, mpq_class(detail::bucket_pairs(buckets)), {}, {}};
}

/// max(0, (m^2 / ((2^d - 1) N) - m) / 2).
[[nodiscard]] inline mpq_class lower_bound_midpoint_formula(const mpz_class& n, const mpz_class& m,
                                                            int d) {
    if (n < 1 || d < 1) throw ValidationError("midpoint formula needs N >= 1 and d >= 1");
    mpq_class v = mpq_class(m * m, detail::pow2_minus_1(d) * n);
    v.canonicalize();
    v = (v - m) / 2;
    return v < 0 ? mpq_class(0) : v;
}

/// max(0, m - (2^d - 1) N).
[[nodiscard]] inline mpz_class lower_bound_greedy_removal(const mpz_class& n, const mpz_class& m,
                                                          int d) {
    if (n < 1 || d < 1) throw ValidationError("greedy-removal bound needs N >= 1 and d >= 1");
    mpz_class v = m - detail::pow2_minus_1(d) * n;
    return v < 0 ? mpz_class(0) : v;
}

/// Greedy-removal bound evaluated at the graph's own volume and edge count.
[[nodiscard]] inline BoundCertificate greedy_removal_certificate(const GridGraph& g) {
    const mpz_class m(static_cast<unsigned long>(g.edge_count()));
    return {CertificateKind::greedy_removal,
            mpq_class(lower_bound_greedy_removal(compute_volume(g), m, static_cast<int>(g.dim()))),
            {},
            {}};
}

/// floor(cbrt(m / N)) clamped to [1, 16].
[[nodiscard]] inline std::uint32_t default_p_max(const mpz_class& n, const mpz_class& m) {
    std::uint32_t p = 1;
    while (p < 16) {
        const mpz_class next(p + 1);
        if (next * next * next * n > m) break;
        ++p;
    }
    return p;
}

inline constexpr std::uint32_t kMaxPGridLevel = 4096;

/// Crossing pairs located on essential p-grids for p = 1..p_max.
///
/// Requires every edge to be primitive (then each edge meets the essential
/// p-grid in exactly phi(p) points) and refuses any collinear overlapping
/// pair, which could be counted at several levels.
[[nodiscard]] inline BoundCertificate lower_bound_essential_pgrid(const GridGraph& g,
                                                                  std::uint32_t p_max) {
    if (p_max < 1 || p_max > kMaxPGridLevel) {
        throw ValidationError("p_max must be in [1, " + std::to_string(kMaxPGridLevel) + "]");
    }
    detail::require_proper(g);
    const auto segs = g.segments();

    // Primitive edges only; overlaps are only possible between parallel edges.
    std::map<LatticePoint, std::vector<std::size_t>> by_direction;
    for (std::size_t e = 0; e < segs.size(); ++e) {
        auto [dir, steps] = gcd_reduce(segs[e]);
        if (steps != 1) {
            throw ValidationError("edge " + std::to_string(e) +
                                  " is not primitive; apply reduce-edges first");
        }
        if (dir < Coord{-1} * dir) dir = Coord{-1} * dir;
        by_direction[dir].push_back(e);
    }
    for (const auto& [dir, group] : by_direction) {
        for (std::size_t x = 0; x < group.size(); ++x) {
            for (std::size_t y = x + 1; y < group.size(); ++y) {
                if (cross_tag(segs[group[x]], segs[group[y]]) == CrossTag::collinear_overlap) {
                    throw ValidationError("edges " + std::to_string(group[x]) + " and " +
                                          std::to_string(group[y]) + " overlap collinearly");
                }
            }
        }
    }

    BoundCertificate cert{CertificateKind::essential_pgrid, 0, p_max, {}};
    mpz_class total = 0;
    for (std::uint32_t p = 1; p <= p_max; ++p) {
        // Key: p times the point, an integer vector.
        std::unordered_map<LatticePoint, std::uint64_t, LatticePointHash> buckets;
        std::uint64_t incidences = 0;
        for (const auto& s : segs) {
            const LatticePoint base = Coord{p} * s.a();
            const LatticePoint u = s.b() - s.a();
            for (std::uint32_t i = 1; i < p; ++i) {
                if (std::gcd(i, p) != 1) continue;
                ++buckets[base + Coord{i} * u];
                ++incidences;
            }
        }
        PGridLevel level{p, incidences, buckets.size(), detail::bucket_pairs(buckets)};
        total += level.pairs;
        cert.levels.push_back(std::move(level));
    }
    cert.value = mpq_class(total);
    return cert;
}

}  // namespace gridcross
