// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion, followed by
// indented detail lines, and exits nonzero if any criterion fails.
//   acceptance <path to gridcross_cli>

#include <gmpxx.h>
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gridcross/gridcross.hpp"
#include "oracles.hpp"

using namespace gridcross;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back("violation: " + what);
        }
    }
    void note(std::string s) { details.push_back(std::move(s)); }
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << x;
    return os.str();
}

std::string grid_name(const GridSpec& s) {
    std::string out;
    for (std::size_t i = 0; i < s.dim(); ++i) out += (i ? "x" : "") + std::to_string(s.sides[i]);
    return out;
}

mpq_class q(std::uint64_t x) { return mpq_class(mpz_class(static_cast<unsigned long>(x))); }

/// Count of integers in [1, p-1] coprime to p, by direct gcd scan.
std::uint64_t coprime_below(std::uint32_t p) {
    std::uint64_t c = 0;
    for (std::uint32_t i = 1; i < p; ++i) c += std::gcd(i, p) == 1;
    return c;
}

/// Euler phi by trial factorization (phi(1) = 1).
std::uint64_t phi_trial(std::uint64_t n) {
    std::uint64_t r = n;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            while (n % f == 0) n /= f;
            r -= r / f;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

bool is_matching_oracle(const GridGraph& g) {
    std::vector<int> deg(g.vertex_count(), 0);
    for (const auto& e : g.edges()) {
        if (++deg[e.u] > 1 || ++deg[e.w] > 1) return false;
    }
    return true;
}

using PointPair = std::pair<LatticePoint, LatticePoint>;

std::set<PointPair> edge_set(const GridGraph& g) {
    std::set<PointPair> out;
    for (const auto& e : g.edges()) {
        auto a = g.vertices()[e.u], b = g.vertices()[e.w];
        if (b < a) std::swap(a, b);
        out.emplace(std::move(a), std::move(b));
    }
    return out;
}

GridGraph shift_layers(const GridGraph& g, Coord lower) {
    std::vector<Coord> off(g.dim(), 0);
    off.back() = lower - 1;
    return g.translated(LatticePoint(std::move(off)));
}

// Shared between criteria 4 and 5.
std::vector<std::pair<std::string, GridGraph>> random_instances() {
    const std::vector<GridSpec> grids{GridSpec({8, 8}),       GridSpec({5, 5}),
                                      GridSpec({4, 4, 4}),    GridSpec({3, 3, 3}),
                                      GridSpec({2, 2, 4, 4}), GridSpec({2, 2, 2, 2})};
    const std::array<std::size_t, 4> edge_counts{10, 25, 40, 60};
    std::vector<std::pair<std::string, GridGraph>> out;
    for (const auto& spec : grids) {
        for (std::size_t m : edge_counts) {
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                out.emplace_back(grid_name(spec) + " m=" + std::to_string(m) + " seed=" + std::to_string(seed),
                                 random_proper_graph(spec, m, seed, true));
            }
        }
    }
    return out;
}

Outcome bose_exactness() {
    Outcome o;
    Stopwatch sw;
    const std::vector<std::pair<GridSpec, long>> cases{
        {GridSpec({2, 2}), 5}, {GridSpec({3, 2}), 9}, {GridSpec({3, 3}), 16}, {GridSpec({2, 2, 2}), 19}};
    std::string got;
    for (const auto& [spec, expected] : cases) {
        const auto mis = max_crossing_free_edges(spec);
        const auto bose = bose_formula(spec);
        got += (got.empty() ? "" : ", ") + grid_name(spec) + "->" + std::to_string(mis);
        o.require(mpz_class(static_cast<unsigned long>(mis)) == bose,
                  grid_name(spec) + ": MIS " + std::to_string(mis) + " vs formula " + bose.get_str());
        o.require(static_cast<long>(mis) == expected,
                  grid_name(spec) + ": MIS " + std::to_string(mis) + " vs expected " + std::to_string(expected));
    }
    const double t = sw.seconds();
    o.require(t < 10, "runtime " + fmt(t) + " s exceeds 10 s");
    o.summary = "max crossing-free edges equals the Bose formula: " + got + " (" + fmt(t) + " s)";
    return o;
}

Outcome growth_3d() {
    Outcome o;
    Stopwatch sw;
    std::string crs_list;
    for (Coord k = 2; k <= 6; ++k) {
        const auto g = layered_complete_bipartite(k, 3);
        const auto rep = count_crossings_pruned(g);
        const auto bound = analytic_skip_bound({k, 3});
        const double kd = static_cast<double>(k);
        const long double envelope =
            2.0L * std::pow(kd, 6.0L) * std::log(static_cast<long double>(k)) + 30.0L * std::pow(kd, 6.0L);
        crs_list += (crs_list.empty() ? "" : ", ") + std::to_string(rep.total);
        o.note("k=" + std::to_string(k) + ": edges " + std::to_string(g.edge_count()) + ", crs " +
               std::to_string(rep.total) + ", per-edge max " + std::to_string(rep.per_edge_max()) +
               " <= skip bound " + bound.get_str() + " (" + fmt(bound.get_d(), 2) + "), envelope " +
               fmt(static_cast<double>(envelope), 0));
        if (k == 2) o.require(rep.total == 10, "crs(k=2) = " + std::to_string(rep.total) + ", expected 10");
        o.require(q(rep.per_edge_max()) <= bound, "k=" + std::to_string(k) + ": per-edge max above skip bound");
        o.require(static_cast<long double>(rep.total) <= envelope,
                  "k=" + std::to_string(k) + ": crs above 2k^6 ln k + 30k^6");
    }
    const double t = sw.seconds();
    o.require(t < 120, "runtime " + fmt(t) + " s exceeds 120 s");
    o.summary = "layered d=3, k=2..6: crs " + crs_list + ", skip bound and envelope hold (" + fmt(t) + " s)";
    return o;
}

Outcome upper_4d() {
    Outcome o;
    for (Coord k = 2; k <= 3; ++k) {
        const auto g = layered_complete_bipartite(k, 4);
        const auto rep = count_crossings_pruned(g);
        const auto bound = analytic_skip_bound({k, 4});
        const mpz_class ell = mpz_class(static_cast<long>(k * k * k));
        const mpq_class total_bound = bound * mpq_class(ell * ell) / 2;
        o.note("k=" + std::to_string(k) + ": l=" + ell.get_str() + ", edges " + std::to_string(g.edge_count()) +
               ", crs " + std::to_string(rep.total) + " <= " + fmt(total_bound.get_d(), 1) + ", per-edge max " +
               std::to_string(rep.per_edge_max()) + " <= " + bound.get_str());
        if (k == 2) o.require(bound == 183, "skip bound at k=2 is " + bound.get_str() + ", expected 183");
        o.require(q(rep.per_edge_max()) <= bound, "k=" + std::to_string(k) + ": per-edge max above skip bound");
        o.require(q(rep.total) <= total_bound, "k=" + std::to_string(k) + ": crs above bound * l^2 / 2");
    }
    o.summary = "layered d=4, k=2,3: per-edge max and total within the skip bound (183 at k=2)";
    return o;
}

Outcome certificate_soundness(const std::vector<std::pair<std::string, GridGraph>>& instances) {
    Outcome o;
    constexpr std::uint32_t p_max = 8;
    std::size_t tight_bucket = 0, tight_pgrid = 0;
    for (const auto& [name, g] : instances) {
        o.require(validate_proper(g).empty(), name + ": not proper");
        const auto crs = q(oracle::crossing_count(g));
        const auto bucket = lower_bound_midpoint_bucket(g).value;
        const auto pgrid = lower_bound_essential_pgrid(g, p_max);
        const auto greedy = greedy_removal_certificate(g).value;
        const auto c = crs.get_str();
        o.require(bucket <= crs, name + ": midpoint bucket " + bucket.get_str() + " > crs " + c);
        o.require(pgrid.value <= crs, name + ": essential p-grid " + pgrid.value.get_str() + " > crs " + c);
        o.require(greedy <= crs, name + ": greedy removal " + greedy.get_str() + " > crs " + c);
        tight_bucket += bucket == crs;
        tight_pgrid += pgrid.value == crs;
        o.require(pgrid.levels.size() == p_max, name + ": expected " + std::to_string(p_max) + " levels");
        for (const auto& lv : pgrid.levels) {
            const std::uint64_t expected = g.edge_count() * coprime_below(lv.p);
            o.require(lv.incidences == expected, name + ": p=" + std::to_string(lv.p) + " incidence mass " +
                                                     std::to_string(lv.incidences) + " != " +
                                                     std::to_string(expected));
        }
    }
    o.note("grids 8x8, 5x5, 4x4x4, 3x3x3, 2x2x4x4, 2x2x2x2; m in {10,25,40,60}; seeds 1..10; p_max " +
           std::to_string(p_max));
    o.note("crs from the rational elimination oracle; bucket tight on " + std::to_string(tight_bucket) +
           ", p-grid tight on " + std::to_string(tight_pgrid));
    o.note("incidence mass compared with m times the count of i in [1,p-1] coprime to p (0 at p=1, "
           "where the sieve value phi(1) is 1)");
    o.summary = std::to_string(instances.size()) +
                " random proper primitive graphs: bucket, p-grid and greedy bounds <= crs; incidence mass exact";
    return o;
}

Outcome oracle_equivalence(const std::vector<std::pair<std::string, GridGraph>>& instances) {
    Outcome o;
    std::vector<std::pair<std::string, GridGraph>> fixtures;
    for (Coord k = 2; k <= 6; ++k) fixtures.emplace_back("layered k=" + std::to_string(k) + " d=3",
                                                         layered_complete_bipartite(k, 3));
    for (Coord k = 2; k <= 3; ++k) fixtures.emplace_back("layered k=" + std::to_string(k) + " d=4",
                                                         layered_complete_bipartite(k, 4));
    fixtures.emplace_back("tile k=2 side=4 d=3", tile_bipartite(2, 4, 3));
    fixtures.emplace_back("tile k=2 side=6 d=3", tile_bipartite(2, 6, 3));
    fixtures.emplace_back("tile k=3 side=6 d=3", tile_bipartite(3, 6, 3));
    fixtures.emplace_back("tile k=2 side=4 d=4", tile_bipartite(2, 4, 4));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (auto [k, d] : std::array<std::pair<Coord, int>, 3>{{{3, 3}, {4, 3}, {3, 4}}}) {
            const auto m = random_crossing_free_matching(k, d, seed);
            const std::string tag = "k=" + std::to_string(k) + " d=" + std::to_string(d) + " seed=" +
                                    std::to_string(seed);
            fixtures.emplace_back("matching " + tag, m);
            fixtures.emplace_back("augmented " + tag, augment_matching_to_spanning_tree(m, k, d));
        }
    }
    std::size_t compared = 0;
    using Instances = std::vector<std::pair<std::string, GridGraph>>;
    for (const Instances* set : std::array<const Instances*, 2>{&instances, &fixtures}) {
        for (const auto& [name, g] : *set) {
            const auto a = count_crossings_naive(g), b = count_crossings_pruned(g);
            o.require(a.total == b.total && a.per_edge == b.per_edge,
                      name + ": naive " + std::to_string(a.total) + " vs pruned " + std::to_string(b.total));
            ++compared;
        }
    }
    o.note(std::to_string(instances.size()) + " random instances, " + std::to_string(fixtures.size()) +
           " construction fixtures (layered, tiles, matchings, augmented trees)");
    o.summary = "pruned counter equals naive counter on " + std::to_string(compared) + " graphs (totals and per-edge)";
    return o;
}

Outcome totient_inequalities() {
    Outcome o;
    Stopwatch sw;
    constexpr std::uint32_t n_max = 10000;
    const auto table = totient_sieve(n_max);
    std::vector<std::uint32_t> upper_failures;
    std::uint32_t last_lower_failure = 0;
    long double s3 = 0, s3_min_ratio = INFINITY;
    std::uint32_t s3_min_at = 0, s3_failures = 0;
    mpz_class s2 = 0;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
        const std::uint64_t f = phi_trial(n);
        if (table(n) != f) o.require(false, "sieve phi(" + std::to_string(n) + ") differs from trial division");
        const mpz_class fz(static_cast<unsigned long>(f));
        s2 += fz * fz;
        mpz_class n3(static_cast<unsigned long>(n));
        n3 = n3 * n3 * n3;
        if (!(s2 < n3)) upper_failures.push_back(n);
        if (11 * s2 < n3) last_lower_failure = n;
        const long double nd = n;
        s3 += static_cast<long double>(f) * static_cast<long double>(f) / (nd * nd * nd);
        if (n >= 27) {
            const long double r = s3 / std::log(nd);
            if (r < s3_min_ratio) {
                s3_min_ratio = r;
                s3_min_at = n;
            }
            s3_failures += r < 0.05L;
        }
    }
    const std::uint32_t n0 = last_lower_failure + 1;

    const auto lib = verify_totient_inequalities(n_max);
    o.require(lib.upper_failures == upper_failures.size(), "library and oracle disagree on the upper inequality");
    o.require(lib.lower_threshold == n0, "library and oracle disagree on the lower threshold");
    o.require(std::abs(lib.log_constant - static_cast<double>(s3_min_ratio)) < 1e-9,
              "library and oracle disagree on min s3/ln k");

    std::string where;
    for (std::size_t i = 0; i < upper_failures.size() && i < 5; ++i) where += " " + std::to_string(upper_failures[i]);
    o.require(upper_failures.empty(), "sum phi(i)^2 < n^3 fails at n =" + where + " (" +
                                          std::to_string(upper_failures.size()) + " values)");
    if (upper_failures.size() == 1 && upper_failures[0] == 1) {
        o.note("analysis: with phi(1) = 1 the sum at n=1 is 1 = 1^3, so the strict inequality fails there "
               "and holds for every n in [2, 10^4]");
    }
    o.note("sum phi(i)^2 >= n^3/11 for all n in [n0, 10^4]: n0 = " + std::to_string(n0));
    o.note("min over k in [27, 10^4] of s3(k)/ln k = " + fmt(static_cast<double>(s3_min_ratio), 4) + " at k=" +
           std::to_string(s3_min_at) + "; s2(10^4)/10^12 = " + fmt(lib.s2_ratio_at_max, 4));
    o.require(s3_failures == 0, std::to_string(s3_failures) + " values of k with s3(k) < 0.05 ln k");
    const double t = sw.seconds();
    o.require(t < 30, "runtime " + fmt(t) + " s exceeds 30 s");
    o.summary = "totient inequalities up to 10^4: upper " +
                std::string(upper_failures.empty() ? "holds" : "fails") + ", lower threshold n0=" +
                std::to_string(n0) + ", s3/ln k >= 0.05 " + (s3_failures == 0 ? "holds" : "fails") + " (" +
                fmt(t) + " s)";
    return o;
}

Outcome enumeration_exactness() {
    Outcome o;
    const auto cg = build_conflict_graph(GridSpec({2, 2}));
    const auto subs = count_crossing_free_subgraphs(cg);
    const auto mats = count_crossing_free_matchings(cg);
    const auto trees = count_crossing_free_spanning_trees(GridSpec({2, 2}));
    o.require(subs == 48, "2x2 subgraphs " + subs.get_str());
    o.require(mats == 9, "2x2 matchings " + mats.get_str());
    o.require(trees == 12, "2x2 spanning trees " + trees.get_str());

    const std::vector<GridSpec> grids{GridSpec({4, 4}), GridSpec({3, 3, 3}), GridSpec({2, 2, 4, 4}),
                                      GridSpec({6, 5})};
    std::size_t graphs = 0, max_t = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const std::size_t t = 5 + i % 16;  // 5..20
        const auto g = random_proper_graph(grids[i % grids.size()], t, 100 + i, true);
        const auto c = build_conflict_graph(g);
        // Adjacency rebuilt from the elimination oracle.
        const auto segs = g.segments();
        std::vector<std::uint64_t> adj(t, 0);
        for (std::size_t a = 0; a < t; ++a) {
            for (std::size_t b = 0; b < t; ++b) {
                if (a != b && oracle::crosses(segs[a], segs[b])) adj[a] |= std::uint64_t{1} << b;
            }
        }
        o.require(c.conflicts == adj, "graph " + std::to_string(i) + ": conflict adjacency differs from oracle");
        const auto brute = oracle::independent_sets_brute(adj);
        const auto memo = count_independent_sets(c.conflicts);
        o.require(memo == mpz_class(static_cast<unsigned long>(brute)),
                  "graph " + std::to_string(i) + ": memoized " + memo.get_str() + " vs brute " +
                      std::to_string(brute));
        ++graphs;
        max_t = std::max(max_t, t);
    }
    o.summary = "2x2 grid: " + subs.get_str() + " subgraphs, " + mats.get_str() + " matchings, " + trees.get_str() +
                " spanning trees; memoized = brute force on " + std::to_string(graphs) +
                " conflict graphs (t <= " + std::to_string(max_t) + ")";
    return o;
}

Outcome counting_consistency() {
    Outcome o;
    const std::vector<GridSpec> grids{GridSpec({1, 2}), GridSpec({1, 3}), GridSpec({2, 2}), GridSpec({2, 3}),
                                      GridSpec({3, 2}), GridSpec({1, 5}), GridSpec({3, 3}), GridSpec({1, 2, 2}),
                                      GridSpec({2, 2, 2})};
    std::string names;
    for (const auto& spec : grids) {
        const auto cg = build_conflict_graph(spec);
        const auto mats = count_crossing_free_matchings(cg);
        const auto subs = count_crossing_free_subgraphs(cg);
        const auto upper = ncs_upper_formula(spec.volume(), static_cast<int>(spec.dim()));
        names += (names.empty() ? "" : ", ") + grid_name(spec);
        o.require(mats <= subs && subs <= upper, grid_name(spec) + ": matchings " + mats.get_str() +
                                                     ", subgraphs " + subs.get_str() + ", upper " + upper.get_str());
    }
    o.note("ordering checked on " + names);

    // Every crossing-free matching of the layered 2x2x2 grid.
    const auto layered = layered_complete_bipartite(2, 3);
    const auto cg = build_conflict_graph(layered);
    const auto adj = cg.matching_conflicts();
    std::size_t augmented = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << adj.size()); ++s) {
        bool independent = true;
        for (std::size_t i = 0; i < adj.size() && independent; ++i) {
            if ((s >> i & 1) && (adj[i] & s)) independent = false;
        }
        if (!independent) continue;
        std::vector<Edge> es;
        for (std::size_t i = 0; i < adj.size(); ++i) {
            if (s >> i & 1) es.push_back(layered.edges()[i]);
        }
        const GridGraph m(3, layered.vertices(), std::move(es));
        const auto tree = augment_matching_to_spanning_tree(m, 2, 3);
        const auto in = edge_set(m), out = edge_set(tree);
        const std::string tag = "matching mask " + std::to_string(s);
        o.require(oracle::is_spanning_tree(tree.vertex_count(), tree.edges()) && tree.vertex_count() == 8,
                  tag + ": not a spanning tree of the 8 grid points");
        o.require(oracle::crossing_count(tree) == 0, tag + ": tree has crossings");
        o.require(std::includes(out.begin(), out.end(), in.begin(), in.end()), tag + ": tree drops a matching edge");
        ++augmented;
    }
    o.require(augmented >= 9, "only " + std::to_string(augmented) + " matchings enumerated");
    o.note(std::to_string(augmented) + " crossing-free matchings of the layered 2x2x2 grid augmented to spanning trees");

    // Stacking: one random layer pair per case at k=3, two disjoint pairs at k=4.
    std::mt19937_64 rng(2024);
    std::size_t stacked = 0;
    auto check_stack = [&](const std::vector<LayerPair>& pairs, Coord k, const std::string& tag) {
        const auto s = stack_layer_graphs(pairs, k, 4);
        std::size_t expected_edges = 0;
        for (const auto& p : pairs) expected_edges += p.graph.edge_count();
        o.require(s.edge_count() == expected_edges, tag + ": edge count changed");
        o.require(is_matching_oracle(s), tag + ": not a matching");
        o.require(oracle::crossing_count(s) == 0, tag + ": stacked graph has crossings");
        ++stacked;
    };
    for (std::uint64_t i = 0; i < 100; ++i) {
        const Coord lower = 1 + static_cast<Coord>(uniform_below(rng, 2));
        const std::size_t target = 1 + uniform_below(rng, 9);
        const auto m = random_crossing_free_matching(3, 4, 500 + i, target);
        check_stack({{lower, shift_layers(m, lower)}}, 3, "k=3 case " + std::to_string(i));
    }
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto a = random_crossing_free_matching(4, 4, 900 + 2 * i);
        const auto b = random_crossing_free_matching(4, 4, 901 + 2 * i);
        check_stack({{1, a}, {3, shift_layers(b, 3)}}, 4, "k=4 case " + std::to_string(i));
    }
    o.note(std::to_string(stacked) + " stacked graphs at d=4 (100 single-pair cases at k=3, 20 two-pair cases at k=4)");
    o.summary = "matchings <= subgraphs <= upper formula; augmentation exhaustive (" + std::to_string(augmented) +
                " matchings); stacking yields crossing-free matchings";
    return o;
}

struct RunResult {
    int status;
    std::string output;
};

RunResult run(const std::string& cmd) {
    RunResult r{-1, {}};
    FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    r.status = ::pclose(pipe);
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ostringstream os;
    os << std::ifstream(p, std::ios::binary).rdbuf();
    return os.str();
}

Outcome cli_determinism(const std::string& cli) {
    Outcome o;
    if (cli.empty() || !std::filesystem::exists(cli)) {
        o.require(false, "CLI binary not found: '" + cli + "'");
        o.summary = "CLI determinism not checked";
        return o;
    }
    const auto work = std::filesystem::temp_directory_path() / "gridcross_acceptance";
    std::filesystem::remove_all(work);
    std::filesystem::create_directories(work);
    const std::string exe = "'" + cli + "'";
    const std::string dir = work.string() + "/";

    // Generators write files; each file must match across runs.
    const std::vector<std::pair<std::string, std::string>> generated{
        {"layered", "gen layered --k 3 --dim 3"},
        {"tile", "gen tile --k 2 --side 4 --dim 3"},
        {"random", "gen random --grid 4x4x4 --edges 40 --seed 7"},
        {"matching", "gen matching --k 3 --dim 4 --seed 11"}};
    std::size_t invocations = 0;
    for (const auto& [name, args] : generated) {
        std::array<std::string, 2> files;
        for (int pass = 0; pass < 2; ++pass) {
            const auto path = dir + name + "." + std::to_string(pass) + ".json";
            const auto r = run(exe + " " + args + " --out '" + path + "'");
            o.require(r.status == 0, args + ": exit status " + std::to_string(r.status));
            files[pass] = slurp(path);
        }
        o.require(!files[0].empty() && files[0] == files[1], args + ": output files differ");
        ++invocations;
    }

    const std::vector<std::pair<std::string, int>> commands{
        {"gen random --grid 8x8 --edges 30 --seed 3", 0},
        {"cross " + dir + "layered.0.json --method naive", 0},
        {"cross " + dir + "layered.0.json --method pruned", 0},
        {"cross " + dir + "random.0.json --method all-certificates --p-max 6", 0},
        {"cross " + dir + "tile.0.json", 0},
        {"cross " + dir + "matching.0.json --reduce-edges", 0},
        {"enum --grid 2x2,1x3,3x3,2x2x2", 0},
        {"nt --n 500 --format json", 0},
        {"nt --n 2000 --verify", 0},
        {"experiment --kind growth3d --k 2:4", 0},
        {"experiment --kind growth_hd --k 2 --dim 4 --format json", 0},
        {"experiment --kind certificates --grid 8x8,4x4x4 --seed 0:4 --edges 30", 0},
        {"experiment --kind totients --n 100", 0},
        {"experiment --kind enumeration --grid 2x2,3x2", 0},
        {"cross " + dir + "missing.json", 2},
        {"enum --grid 9x9", 3}};
    for (const auto& [args, expected] : commands) {
        const auto a = run(exe + " " + args), b = run(exe + " " + args);
        const int code = WIFEXITED(a.status) ? WEXITSTATUS(a.status) : -1;
        o.require(code == expected, args + ": exit code " + std::to_string(code) + ", expected " +
                                        std::to_string(expected));
        o.require(a.status == b.status && a.output == b.output, args + ": output differs between runs");
        o.require(!a.output.empty(), args + ": no output");
        ++invocations;
    }
    std::filesystem::remove_all(work);
    o.summary = std::to_string(invocations) + " CLI invocations, each run twice, byte-identical output";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const auto instances = random_instances();

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"bose-formula", bose_exactness},
        {"growth-3d", growth_3d},
        {"upper-4d", upper_4d},
        {"certificate-soundness", [&] { return certificate_soundness(instances); }},
        {"oracle-equivalence", [&] { return oracle_equivalence(instances); }},
        {"totient-inequalities", totient_inequalities},
        {"enumeration-exactness", enumeration_exactness},
        {"counting-consistency", counting_consistency},
        {"cli-determinism", [&] { return cli_determinism(cli); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, check] = criteria[i];
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << name << ": " << o.summary << "\n";
        for (const auto& d : o.details) std::cout << "       " << d << "\n";
        std::cout.flush();
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
