#pragma once

// Exact predicates on open segments between integer lattice points.
//
// Coordinates are 64-bit integers bounded by kCoordLimit in absolute value.
// With that bound every 2x2 minor of difference vectors fits in 64 bits and
// every verification product fits in __int128, so no step ever rounds.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gridcross/errors.hpp"

namespace gridcross {

using Coord = std::int64_t;

inline constexpr Coord kCoordLimit = Coord{1} << 24;

class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(std::vector<Coord> coords) : coords_(std::move(coords)) {}
    LatticePoint(std::initializer_list<Coord> coords) : coords_(coords) {}

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] Coord operator[](std::size_t i) const { return coords_[i]; }
    [[nodiscard]] std::span<const Coord> coords() const noexcept { return coords_; }

    [[nodiscard]] bool within_limit() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(),
                           [](Coord c) { return c >= -kCoordLimit && c <= kCoordLimit; });
    }

    friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
        std::vector<Coord> r(a.dim());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
        return LatticePoint(std::move(r));
    }
    friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
        std::vector<Coord> r(a.dim());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
        return LatticePoint(std::move(r));
    }
    friend LatticePoint operator*(Coord s, const LatticePoint& a) {
        std::vector<Coord> r(a.dim());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * a[i];
        return LatticePoint(std::move(r));
    }

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

    friend std::ostream& operator<<(std::ostream& os, const LatticePoint& p) {
        os << '(';
        for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i];
        return os << ')';
    }

private:
    std::vector<Coord> coords_;
};

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (Coord c : p.coords()) {
            h ^= std::hash<Coord>{}(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// Point with exact rational coordinates, each kept in lowest terms.
class RationalPoint {
public:
    RationalPoint() = default;
    explicit RationalPoint(std::vector<mpq_class> coords) : coords_(std::move(coords)) {
        for (auto& c : coords_) c.canonicalize();
    }
    explicit RationalPoint(const LatticePoint& p) {
        coords_.reserve(p.dim());
        for (Coord c : p.coords()) coords_.emplace_back(mpz_class(static_cast<long>(c)));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] const mpq_class& operator[](std::size_t i) const { return coords_[i]; }
    [[nodiscard]] std::span<const mpq_class> coords() const noexcept { return coords_; }

    friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
        return a.coords_ == b.coords_;
    }

    friend std::ostream& operator<<(std::ostream& os, const RationalPoint& p) {
        os << '(';
        for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i].get_str();
        return os << ')';
    }

private:
    std::vector<mpq_class> coords_;
};

/// Open segment between two distinct lattice points of equal dimension.
class Segment {
public:
    Segment(LatticePoint a, LatticePoint b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_.dim() == 0 || a_.dim() != b_.dim()) {
            throw ValidationError("segment endpoints must share a positive dimension");
        }
        if (a_ == b_) throw ValidationError("segment endpoints coincide");
        if (!a_.within_limit() || !b_.within_limit()) {
            throw ValidationError("coordinate magnitude exceeds 2^24");
        }
    }

    [[nodiscard]] const LatticePoint& a() const noexcept { return a_; }
    [[nodiscard]] const LatticePoint& b() const noexcept { return b_; }
    [[nodiscard]] std::size_t dim() const noexcept { return a_.dim(); }

    friend bool operator==(const Segment&, const Segment&) = default;

private:
    LatticePoint a_;
    LatticePoint b_;
};

struct Disjoint {
    friend bool operator==(const Disjoint&, const Disjoint&) = default;
};
struct SharedEndpointOnly {
    friend bool operator==(const SharedEndpointOnly&, const SharedEndpointOnly&) = default;
};
struct PointCross {
    RationalPoint point;
    friend bool operator==(const PointCross&, const PointCross&) = default;
};
struct CollinearOverlap {
    friend bool operator==(const CollinearOverlap&, const CollinearOverlap&) = default;
};

using CrossKind = std::variant<Disjoint, SharedEndpointOnly, PointCross, CollinearOverlap>;

enum class CrossTag { disjoint, shared_endpoint_only, point_cross, collinear_overlap };

[[nodiscard]] inline CrossTag tag_of(const CrossKind& k) noexcept {
    return static_cast<CrossTag>(k.index());
}

/// True for the two kinds that count as a crossing pair.
[[nodiscard]] constexpr bool is_crossing(CrossTag t) noexcept {
    return t == CrossTag::point_cross || t == CrossTag::collinear_overlap;
}

[[nodiscard]] inline const char* to_string(CrossTag t) noexcept {
    switch (t) {
        case CrossTag::disjoint: return "disjoint";
        case CrossTag::shared_endpoint_only: return "shared-endpoint-only";
        case CrossTag::point_cross: return "point-cross";
        case CrossTag::collinear_overlap: return "collinear-overlap";
    }
    return "?";
}

struct GcdReduced {
    LatticePoint direction;
    Coord g;
};

[[nodiscard]] inline GcdReduced gcd_reduce(const Segment& seg) {
    const LatticePoint diff = seg.b() - seg.a();
    Coord g = 0;
    for (Coord c : diff.coords()) g = std::gcd(g, std::abs(c));
    std::vector<Coord> dir(diff.dim());
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = diff[i] / g;
    return {LatticePoint(std::move(dir)), g};
}

[[nodiscard]] inline bool is_primitive(const Segment& seg) { return gcd_reduce(seg).g == 1; }

/// The g-1 lattice points strictly inside the segment, ordered from a to b.
[[nodiscard]] inline std::vector<LatticePoint> interior_lattice_points(const Segment& seg) {
    const auto [dir, g] = gcd_reduce(seg);
    std::vector<LatticePoint> out;
    out.reserve(static_cast<std::size_t>(g - 1));
    LatticePoint cur = seg.a();
    for (Coord j = 1; j < g; ++j) {
        cur = cur + dir;
        out.push_back(cur);
    }
    return out;
}

[[nodiscard]] inline bool point_on_open_segment(const RationalPoint& p, const Segment& seg) {
    if (p.dim() != seg.dim()) throw ValidationError("point and segment differ in dimension");
    const LatticePoint u = seg.b() - seg.a();
    std::size_t pivot = 0;
    while (u[pivot] == 0) ++pivot;
    const mpq_class t = (p[pivot] - static_cast<long>(seg.a()[pivot])) / static_cast<long>(u[pivot]);
    if (t <= 0 || t >= 1) return false;
    for (std::size_t k = 0; k < p.dim(); ++k) {
        if (p[k] != seg.a()[k] + t * static_cast<long>(u[k])) return false;
    }
    return true;
}

namespace detail {

using Wide = __int128;

/// Shared core of the predicate. When the result is a point crossing it
/// reports the crossing parameter t = t_num / denom on the first segment.
struct Classification {
    CrossTag tag = CrossTag::disjoint;
    Coord t_num = 0;
    Coord denom = 1;
};

inline Classification classify(const LatticePoint& a, const LatticePoint& b,
                               const LatticePoint& c, const LatticePoint& d) {
    const std::size_t dim = a.dim();
    // Solve t*u - s*v = w with u = b-a, v = d-c, w = c-a.
    auto u = [&](std::size_t i) { return b[i] - a[i]; };
    auto v = [&](std::size_t i) { return d[i] - c[i]; };
    auto w = [&](std::size_t i) { return c[i] - a[i]; };

    Coord det = 0;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = 0; i < dim && det == 0; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            const Coord m = u(i) * v(j) - u(j) * v(i);
            if (m != 0) {
                det = m;
                pi = i;
                pj = j;
                break;
            }
        }
    }

    if (det != 0) {
        Coord tn = w(pi) * v(pj) - v(pi) * w(pj);
        Coord sn = w(pi) * u(pj) - u(pi) * w(pj);
        for (std::size_t k = 0; k < dim; ++k) {
            if (Wide(tn) * u(k) - Wide(sn) * v(k) != Wide(det) * w(k)) return {};  // skew
        }
        if (det < 0) {
            det = -det;
            tn = -tn;
            sn = -sn;
        }
        if (tn > 0 && tn < det && sn > 0 && sn < det) {
            return {CrossTag::point_cross, tn, det};
        }
        const bool t_end = tn == 0 || tn == det;
        const bool s_end = sn == 0 || sn == det;
        if (t_end && s_end) return {CrossTag::shared_endpoint_only};
        return {};
    }

    // Parallel supports: collinear iff w is parallel to u.
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            if (u(i) * w(j) - u(j) * w(i) != 0) return {};
        }
    }
    std::size_t axis = 0;
    while (u(axis) == 0) ++axis;
    const Coord lo1 = std::min(a[axis], b[axis]), hi1 = std::max(a[axis], b[axis]);
    const Coord lo2 = std::min(c[axis], d[axis]), hi2 = std::max(c[axis], d[axis]);
    const Coord lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (lo < hi) return {CrossTag::collinear_overlap};
    if (lo == hi) return {CrossTag::shared_endpoint_only};
    return {};
}

inline void require_same_dim(const Segment& s1, const Segment& s2) {
    if (s1.dim() != s2.dim()) throw ValidationError("segments differ in dimension");
}

}  // namespace detail

/// Classification only; skips building the crossing point.
[[nodiscard]] inline CrossTag cross_tag(const Segment& s1, const Segment& s2) {
    detail::require_same_dim(s1, s2);
    return detail::classify(s1.a(), s1.b(), s2.a(), s2.b()).tag;
}

[[nodiscard]] inline CrossKind segments_cross(const Segment& s1, const Segment& s2) {
    detail::require_same_dim(s1, s2);
    const auto r = detail::classify(s1.a(), s1.b(), s2.a(), s2.b());
    switch (r.tag) {
        case CrossTag::disjoint: return Disjoint{};
        case CrossTag::shared_endpoint_only: return SharedEndpointOnly{};
        case CrossTag::collinear_overlap: return CollinearOverlap{};
        case CrossTag::point_cross: break;
    }
    std::vector<mpq_class> p;
    p.reserve(s1.dim());
    const mpz_class den(static_cast<long>(r.denom));
    const mpz_class tn(static_cast<long>(r.t_num));
    for (std::size_t k = 0; k < s1.dim(); ++k) {
        const mpz_class ak(static_cast<long>(s1.a()[k]));
        const mpz_class uk(static_cast<long>(s1.b()[k] - s1.a()[k]));
        p.emplace_back(ak * den + tn * uk, den);
    }
    return PointCross{RationalPoint(std::move(p))};
}

}  // namespace gridcross
