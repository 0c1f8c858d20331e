// gridcross: command-line front end.
//
//   gen         build a graph (layered | tile | random | matching) as JSON
//   cross       exact crossing count and lower-bound certificates
//   enum        exact crossing-free counts on a small grid
//   nt          totient sum tables
//   experiment  parameter sweeps as CSV or JSON
//
// Exit codes: 0 success, 1 internal error, 2 validation error, 3 cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridcross/gridcross.hpp"

namespace {

using namespace gridcross;
using nlohmann::ordered_json;

constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;

/// "lo:hi" or a comma-separated list.
std::vector<long long> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<long long> out;
    try {
        if (auto colon = text.find(':'); colon != std::string::npos) {
            const long long lo = std::stoll(text.substr(0, colon));
            const long long hi = std::stoll(text.substr(colon + 1));
            if (hi < lo) throw ValidationError(flag + ": empty range " + text);
            for (long long x = lo; x <= hi; ++x) out.push_back(x);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                out.push_back(std::stoll(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            }
        }
    } catch (const std::logic_error&) {
        throw ValidationError(flag + ": cannot parse \"" + text + "\"");
    }
    if (out.empty()) throw ValidationError(flag + ": empty list");
    return out;
}

/// "3x2x2" (one grid) or several separated by commas.
std::vector<GridSpec> parse_grids(const std::string& text) {
    std::vector<GridSpec> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::vector<Coord> sides;
        std::stringstream parts(item);
        std::string part;
        while (std::getline(parts, part, 'x')) {
            try {
                std::size_t used = 0;
                sides.push_back(std::stoll(part, &used));
                if (used != part.size()) throw std::invalid_argument(part);
            } catch (const std::logic_error&) {
                throw ValidationError("--grid: cannot parse \"" + item + "\"");
            }
        }
        out.emplace_back(std::move(sides));
    }
    if (out.empty()) throw ValidationError("--grid: empty list");
    return out;
}

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

struct Options {
    std::string construction;
    std::string input;
    std::string out;
    std::string format = "json";
    std::string method = "pruned";
    std::string kind;
    std::string k = "2";
    std::string seed = "0";
    std::string grid;
    int dim = 3;
    long long side = 0;
    long long edges = 0;
    long long n = 100;
    std::optional<std::uint32_t> p_max;
    bool reduce = false;
    bool primitive_only = false;
    bool verify = false;
    bool timing = false;
};

long long single(const std::string& text, const std::string& flag) {
    const auto v = parse_int_list(text, flag);
    if (v.size() != 1) throw ValidationError(flag + ": expected a single value");
    return v.front();
}

std::string run_gen(const Options& o) {
    const long long k = single(o.k, "--k");
    const auto seed = static_cast<std::uint64_t>(single(o.seed, "--seed"));
    if (o.construction == "layered") return serialize_graph(layered_complete_bipartite(k, o.dim)) + "\n";
    if (o.construction == "tile") {
        return serialize_graph(tile_bipartite(k, o.side > 0 ? o.side : k, o.dim)) + "\n";
    }
    if (o.construction == "random") {
        if (o.edges < 0) throw ValidationError("--edges must be non-negative");
        GridSpec spec({1});
        if (!o.grid.empty()) {
            const auto grids = parse_grids(o.grid);
            if (grids.size() != 1) throw ValidationError("--grid: expected a single grid");
            spec = grids.front();
        } else {
            if (o.side < 1) throw ValidationError("random needs --grid or --side");
            spec = GridSpec::cube(o.side, static_cast<std::size_t>(o.dim));
        }
        return serialize_graph(random_proper_graph(spec, static_cast<std::size_t>(o.edges), seed,
                                                   o.primitive_only)) +
               "\n";
    }
    if (o.construction == "matching") {
        if (o.edges < 0) throw ValidationError("--edges must be non-negative");
        return serialize_graph(
                   random_crossing_free_matching(k, o.dim, seed, static_cast<std::size_t>(o.edges))) +
               "\n";
    }
    throw ValidationError("unknown construction \"" + o.construction +
                          "\" (expected layered, tile, random, matching)");
}

std::string run_cross(const Options& o) {
    if (o.method != "naive" && o.method != "pruned" && o.method != "all-certificates") {
        throw ValidationError("--method must be naive, pruned or all-certificates");
    }
    if (o.p_max && (*o.p_max < 1 || *o.p_max > kMaxPGridLevel)) {
        throw ValidationError("--p-max must be in [1, " + std::to_string(kMaxPGridLevel) + "]");
    }
    GridGraph g = parse_graph(read_input(o.input));
    if (o.reduce) g = reduce_edges(g);
    const CrossingReport rep =
        o.method == "naive" ? count_crossings_naive(g) : count_crossings_pruned(g);
    ordered_json doc;
    doc["method"] = o.method;
    doc["vertices"] = g.vertex_count();
    doc["edges"] = g.edge_count();
    doc["volume"] = g.vertex_count() ? compute_volume(g).get_str() : "0";
    doc["crossings"] = std::to_string(rep.total);
    doc["per_edge"] = rep.per_edge;
    doc["per_edge_max"] = rep.per_edge_max();
    if (o.method == "all-certificates") {
        const CrossingReport oracle = count_crossings_naive(g);
        doc["naive_crossings"] = std::to_string(oracle.total);
        doc["methods_agree"] = oracle.total == rep.total && oracle.per_edge == rep.per_edge;
        const mpz_class n = g.vertex_count() ? compute_volume(g) : mpz_class(1);
        const mpz_class m(static_cast<unsigned long>(g.edge_count()));
        const std::uint32_t p = o.p_max.value_or(default_p_max(n, m));
        ordered_json certs;
        certs["midpoint_bucket"] = lower_bound_midpoint_bucket(g).value.get_str();
        certs["midpoint_formula"] = lower_bound_midpoint_formula(n, m, static_cast<int>(g.dim())).get_str();
        certs["greedy_removal"] = lower_bound_greedy_removal(n, m, static_cast<int>(g.dim())).get_str();
        ordered_json ess;
        ess["p_max"] = p;
        try {
            const auto c = lower_bound_essential_pgrid(g, p);
            ess["value"] = c.value.get_str();
            ordered_json levels = ordered_json::array();
            for (const auto& l : c.levels) {
                levels.push_back({{"p", l.p},
                                  {"incidences", l.incidences},
                                  {"points", l.points},
                                  {"pairs", l.pairs.get_str()}});
            }
            ess["levels"] = levels;
        } catch (const ValidationError& e) {
            ess["refused"] = e.what();
        }
        certs["essential_pgrid"] = ess;
        doc["certificates"] = certs;
    }
    return doc.dump(2) + "\n";
}

std::string run_enum(const Options& o) {
    std::vector<GridSpec> grids;
    if (!o.grid.empty()) {
        grids = parse_grids(o.grid);
    } else {
        if (o.side < 1) throw ValidationError("enum needs --grid or --side");
        grids.push_back(GridSpec::cube(o.side, static_cast<std::size_t>(o.dim)));
    }
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::enumeration;
    cfg.grids = grids;
    return emit_report(run_experiment(cfg), ReportFormat::json);
}

std::string run_nt(const Options& o) {
    if (o.n < 1 || o.n > 10'000'000) throw ValidationError("--n must be in [1, 10^7]");
    const auto n = static_cast<std::uint32_t>(o.n);
    if (o.verify) {
        const TotientReport r = verify_totient_inequalities(n);
        ordered_json doc;
        doc["n_max"] = r.n_max;
        doc["upper_holds_all"] = r.upper_holds;
        doc["upper_failures"] = r.upper_failures;
        doc["first_upper_failure"] = r.first_upper_failure ? ordered_json(*r.first_upper_failure)
                                                           : ordered_json(nullptr);
        doc["lower_threshold"] =
            r.lower_threshold ? ordered_json(*r.lower_threshold) : ordered_json(nullptr);
        doc["lower_failures"] = r.lower_failures;
        doc["min_s2_over_n3_f64"] = format_f64(r.min_s2_ratio);
        doc["s2_over_n3_at_max_f64"] = format_f64(r.s2_ratio_at_max);
        doc["log_constant_f64"] = format_f64(r.log_constant);
        doc["log_constant_at"] = r.log_constant_at;
        return doc.dump(2) + "\n";
    }
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::totients;
    cfg.n_max = n;
    return emit_report(run_experiment(cfg), parse_report_format(o.format));
}

std::string run_experiment_cmd(const Options& o) {
    ExperimentConfig cfg;
    cfg.kind = parse_experiment_kind(o.kind);
    cfg.dim = o.dim;
    cfg.timing = o.timing;
    cfg.p_max = o.p_max;
    for (long long k : parse_int_list(o.k, "--k")) cfg.ks.push_back(k);
    for (long long s : parse_int_list(o.seed, "--seed")) {
        if (s < 0) throw ValidationError("--seed must be non-negative");
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (!o.grid.empty()) {
        cfg.grids = parse_grids(o.grid);
    } else if (o.side > 0) {
        cfg.grids.push_back(GridSpec::cube(o.side, static_cast<std::size_t>(o.dim)));
    }
    if (o.edges < 0) throw ValidationError("--edges must be non-negative");
    cfg.edges = static_cast<std::size_t>(o.edges);
    if (o.n < 1 || o.n > 10'000'000) throw ValidationError("--n must be in [1, 10^7]");
    cfg.n_max = static_cast<std::uint32_t>(o.n);
    return emit_report(run_experiment(cfg), parse_report_format(o.format));
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossing counts, certificates and enumeration for geometric grid graphs"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "Emit a construction as graph JSON");
    gen->add_option("construction", o.construction, "layered | tile | random | matching")->required();
    gen->add_option("--dim", o.dim, "Dimension d");
    gen->add_option("--k", o.k, "Block side k");
    gen->add_option("--side", o.side, "Grid side (tile, random)");
    gen->add_option("--grid", o.grid, "Grid sides for random, e.g. 4x4x3");
    gen->add_option("--edges", o.edges, "Edge count (random; matching: 0 = maximal)");
    gen->add_option("--seed", o.seed, "Random seed");
    gen->add_flag("--primitive-only", o.primitive_only, "Restrict random edges to primitive ones");
    gen->add_option("--out", o.out, "Output path (default stdout)");

    auto* cross = app.add_subcommand("cross", "Count crossings and evaluate certificates");
    cross->add_option("input", o.input, "Graph JSON path (default stdin)");
    cross->add_option("--method", o.method, "naive | pruned | all-certificates");
    cross->add_option("--p-max", o.p_max, "Largest essential p-grid level");
    cross->add_flag("--reduce-edges", o.reduce, "Shorten every edge to its primitive prefix first");
    cross->add_option("--out", o.out, "Output path (default stdout)");

    auto* en = app.add_subcommand("enum", "Exact crossing-free counts on a small grid");
    en->add_option("--grid", o.grid, "Grid sides, e.g. 2x2 or 2x2,3x2");
    en->add_option("--dim", o.dim, "Dimension (with --side)");
    en->add_option("--side", o.side, "Cube side (with --dim)");
    en->add_option("--out", o.out, "Output path (default stdout)");

    auto* nt = app.add_subcommand("nt", "Totient sum tables");
    nt->add_option("--n", o.n, "Largest n");
    nt->add_flag("--verify", o.verify, "Check the totient-sum inequalities instead of printing rows");
    nt->add_option("--format", o.format, "csv | json")->default_val("csv");
    nt->add_option("--out", o.out, "Output path (default stdout)");

    auto* ex = app.add_subcommand("experiment", "Parameter sweeps");
    ex->add_option("--kind", o.kind, "growth3d | growth_hd | certificates | totients | enumeration")
        ->required();
    ex->add_option("--k", o.k, "k values: lo:hi or a,b,c");
    ex->add_option("--dim", o.dim, "Dimension");
    ex->add_option("--grid", o.grid, "Grids, e.g. 8x8,4x4x4");
    ex->add_option("--side", o.side, "Cube side (with --dim)");
    ex->add_option("--seed", o.seed, "Seeds: lo:hi or a,b,c");
    ex->add_option("--edges", o.edges, "Edges per random graph");
    ex->add_option("--p-max", o.p_max, "Largest essential p-grid level");
    ex->add_option("--n", o.n, "Largest n for totients");
    ex->add_option("--format", o.format, "csv | json")->default_val("csv");
    ex->add_flag("--timing", o.timing, "Add a wall-clock column (output no longer reproducible)");
    ex->add_option("--out", o.out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: validation: " << one_line(e.what()) << '\n';
        return kExitValidation;
    }

    try {
        std::string text;
        if (gen->parsed()) text = run_gen(o);
        else if (cross->parsed()) text = run_cross(o);
        else if (en->parsed()) text = run_enum(o);
        else if (nt->parsed()) text = run_nt(o);
        else text = run_experiment_cmd(o);
        write_output(o.out, text);
    } catch (const CapExceeded& e) {
        std::cerr << "error: cap-exceeded: " << one_line(e.what()) << '\n';
        return kExitCap;
    } catch (const ValidationError& e) {
        std::cerr << "error: validation: " << one_line(e.what()) << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
