#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridcross/errors.hpp"
#include "gridcross/geom.hpp"

namespace gridcross {

/// An X_1 x ... x X_d box of lattice points with coordinates starting at 1.
struct GridSpec {
    std::vector<Coord> sides;

    explicit GridSpec(std::vector<Coord> s) : sides(std::move(s)) {
        if (sides.empty()) throw ValidationError("grid needs at least one dimension");
        for (Coord x : sides) {
            if (x < 1 || x > kCoordLimit) throw ValidationError("grid sides must be in [1, 2^24]");
        }
    }

    static GridSpec cube(Coord side, std::size_t dim) {
        return GridSpec(std::vector<Coord>(dim, side));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return sides.size(); }

    [[nodiscard]] mpz_class volume() const {
        mpz_class v = 1;
        for (Coord x : sides) v *= static_cast<long>(x);
        return v;
    }

    /// All points in lexicographic order.
    [[nodiscard]] std::vector<LatticePoint> points() const {
        std::vector<LatticePoint> out;
        std::vector<Coord> cur(dim(), 1);
        for (;;) {
            out.emplace_back(cur);
            std::size_t i = dim();
            while (i > 0) {
                --i;
                if (cur[i] < sides[i]) {
                    ++cur[i];
                    break;
                }
                cur[i] = 1;
                if (i == 0) return out;
            }
        }
    }

    [[nodiscard]] bool contains(const LatticePoint& p) const {
        if (p.dim() != dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (p[i] < 1 || p[i] > sides[i]) return false;
        }
        return true;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (i) s += 'x';
            s += std::to_string(sides[i]);
        }
        return s;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Edge {
    std::size_t u;
    std::size_t w;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Embedded graph: distinct lattice vertices and distinct unordered edges.
/// Immutable once constructed.
class GridGraph {
public:
    GridGraph(std::size_t dim, std::vector<LatticePoint> vertices, std::vector<Edge> edges)
        : dim_(dim), vertices_(std::move(vertices)), edges_(std::move(edges)) {
        if (dim_ == 0) throw ValidationError("dimension must be at least 1");
        std::unordered_map<LatticePoint, std::size_t, LatticePointHash> seen;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const auto& v = vertices_[i];
            if (v.dim() != dim_) {
                throw ValidationError("vertices[" + std::to_string(i) + "]: expected " +
                                      std::to_string(dim_) + " coordinates");
            }
            if (!v.within_limit()) {
                throw ValidationError("vertices[" + std::to_string(i) +
                                      "]: coordinate magnitude exceeds 2^24");
            }
            auto [it, fresh] = seen.emplace(v, i);
            if (!fresh) {
                std::ostringstream os;
                os << "vertices[" << i << "]: duplicate vertex " << v << " (first at vertices["
                   << it->second << "])";
                throw ValidationError(os.str());
            }
        }
        std::set<Edge> edge_set;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            auto& e = edges_[i];
            const std::string where = "edges[" + std::to_string(i) + "]: ";
            if (e.u >= vertices_.size() || e.w >= vertices_.size()) {
                throw ValidationError(where + "vertex index out of range");
            }
            if (e.u == e.w) throw ValidationError(where + "self-loop");
            if (e.u > e.w) std::swap(e.u, e.w);
            if (!edge_set.insert(e).second) throw ValidationError(where + "duplicate edge");
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<LatticePoint>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }

    [[nodiscard]] Segment segment(std::size_t edge) const {
        return Segment(vertices_[edges_[edge].u], vertices_[edges_[edge].w]);
    }

    [[nodiscard]] std::vector<Segment> segments() const {
        std::vector<Segment> out;
        out.reserve(edges_.size());
        for (std::size_t i = 0; i < edges_.size(); ++i) out.push_back(segment(i));
        return out;
    }

    [[nodiscard]] GridGraph translated(const LatticePoint& offset) const {
        std::vector<LatticePoint> vs;
        vs.reserve(vertices_.size());
        for (const auto& v : vertices_) vs.push_back(v + offset);
        return GridGraph(dim_, std::move(vs), edges_);
    }

    friend bool operator==(const GridGraph&, const GridGraph&) = default;

private:
    std::size_t dim_;
    std::vector<LatticePoint> vertices_;
    std::vector<Edge> edges_;
};

struct Violation {
    std::size_t edge;
    std::size_t vertex;
    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every (edge, vertex) pair where the vertex lies on the open edge.
[[nodiscard]] inline std::vector<Violation> validate_proper(const GridGraph& g) {
    std::vector<Violation> out;
    std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) index.emplace(g.vertices()[i], i);

    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Segment seg = g.segment(e);
        const auto [dir, steps] = gcd_reduce(seg);
        if (static_cast<std::uint64_t>(steps - 1) <= g.vertex_count()) {
            LatticePoint cur = seg.a();
            std::vector<Violation> found;
            for (Coord j = 1; j < steps; ++j) {
                cur = cur + dir;
                if (auto it = index.find(cur); it != index.end()) found.push_back({e, it->second});
            }
            std::sort(found.begin(), found.end(),
                      [](const Violation& x, const Violation& y) { return x.vertex < y.vertex; });
            out.insert(out.end(), found.begin(), found.end());
        } else {
            for (std::size_t x = 0; x < g.vertex_count(); ++x) {
                if (point_on_open_segment(RationalPoint(g.vertices()[x]), seg)) out.push_back({e, x});
            }
        }
    }
    return out;
}

[[nodiscard]] inline std::string describe(const GridGraph& g, const std::vector<Violation>& vs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& e = g.edges()[vs[i].edge];
        if (i) os << "; ";
        os << "vertex " << vs[i].vertex << " on edge {" << e.u << "," << e.w << "}";
    }
    return os.str();
}

/// Volume of the bounding box, translated so its minimum corner is (1,...,1).
[[nodiscard]] inline mpz_class compute_volume(const GridGraph& g) {
    if (g.vertex_count() == 0) throw ValidationError("volume of an empty vertex set");
    mpz_class vol = 1;
    for (std::size_t i = 0; i < g.dim(); ++i) {
        Coord lo = g.vertices()[0][i], hi = lo;
        for (const auto& v : g.vertices()) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        vol *= static_cast<long>(hi - lo + 1);
    }
    return vol;
}

/// Replaces each edge uw by u(u + (w-u)/g), adding the new endpoint as a
/// vertex when absent. Duplicate edges produced by the shortening collapse.
[[nodiscard]] inline GridGraph reduce_edges(const GridGraph& g) {
    std::vector<LatticePoint> vs = g.vertices();
    std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index;
    for (std::size_t i = 0; i < vs.size(); ++i) index.emplace(vs[i], i);
    std::set<Edge> seen;
    std::vector<Edge> es;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Segment seg = g.segment(e);
        const auto red = gcd_reduce(seg);
        std::size_t w = g.edges()[e].w;
        if (red.g != 1) {
            LatticePoint end = seg.a() + red.direction;
            auto [it, fresh] = index.emplace(end, vs.size());
            if (fresh) vs.push_back(end);
            w = it->second;
        }
        Edge ne{std::min(g.edges()[e].u, w), std::max(g.edges()[e].u, w)};
        if (seen.insert(ne).second) es.push_back(ne);
    }
    return GridGraph(g.dim(), std::move(vs), std::move(es));
}

[[nodiscard]] inline nlohmann::json to_json(const GridGraph& g) {
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : g.vertices()) {
        vs.push_back(std::vector<Coord>(v.coords().begin(), v.coords().end()));
    }
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : g.edges()) es.push_back({e.u, e.w});
    return {{"dim", g.dim()}, {"vertices", vs}, {"edges", es}};
}

[[nodiscard]] inline std::string serialize_graph(const GridGraph& g) { return to_json(g).dump(); }

[[nodiscard]] inline GridGraph graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("graph document must be a JSON object");
    for (const char* key : {"dim", "vertices", "edges"}) {
        if (!doc.contains(key)) throw ValidationError(std::string("missing key \"") + key + "\"");
    }
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
        throw ValidationError("dim: expected a positive integer");
    }
    const auto dim = doc["dim"].get<std::size_t>();
    if (!doc["vertices"].is_array()) throw ValidationError("vertices: expected an array");
    if (!doc["edges"].is_array()) throw ValidationError("edges: expected an array");

    std::vector<LatticePoint> vs;
    for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
        const auto& row = doc["vertices"][i];
        const std::string where = "vertices[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != dim) {
            throw ValidationError(where + ": expected an array of " + std::to_string(dim) +
                                  " integers");
        }
        std::vector<Coord> c;
        for (const auto& x : row) {
            if (!x.is_number_integer()) throw ValidationError(where + ": non-integer coordinate");
            c.push_back(x.get<Coord>());
        }
        vs.emplace_back(std::move(c));
    }
    std::vector<Edge> es;
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
        const auto& row = doc["edges"][i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 2 || !row[0].is_number_integer() ||
            !row[1].is_number_integer()) {
            throw ValidationError(where + ": expected a pair of vertex indices");
        }
        const auto u = row[0].get<long long>(), w = row[1].get<long long>();
        if (u < 0 || w < 0) throw ValidationError(where + ": vertex index out of range");
        es.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(w)});
    }
    return GridGraph(dim, std::move(vs), std::move(es));
}

[[nodiscard]] inline GridGraph parse_graph(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON at byte ") + std::to_string(e.byte));
    }
    return graph_from_json(doc);
}

}  // namespace gridcross
