#pragma once

// Parameter sweeps that tie the modules together into reproducible tables.
//
// Exact quantities are emitted as decimal strings. Columns holding floating
// point values carry an "_f64" suffix.

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridcross/constructions.hpp"
#include "gridcross/crossings.hpp"
#include "gridcross/enumeration.hpp"
#include "gridcross/errors.hpp"
#include "gridcross/grid_graph.hpp"
#include "gridcross/numtheory.hpp"

namespace gridcross {

enum class ExperimentKind { growth3d, growth_hd, certificates, totients, enumeration };
enum class ReportFormat { csv, json };

[[nodiscard]] inline ExperimentKind parse_experiment_kind(const std::string& s) {
    if (s == "growth3d") return ExperimentKind::growth3d;
    if (s == "growth_hd") return ExperimentKind::growth_hd;
    if (s == "certificates") return ExperimentKind::certificates;
    if (s == "totients") return ExperimentKind::totients;
    if (s == "enumeration") return ExperimentKind::enumeration;
    throw ValidationError("unknown experiment kind \"" + s + "\"");
}

[[nodiscard]] inline ReportFormat parse_report_format(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw ValidationError("unknown format \"" + s + "\"");
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::growth3d;
    std::vector<Coord> ks;               // growth3d, growth_hd
    int dim = 3;                         // growth_hd
    std::vector<GridSpec> grids;         // certificates, enumeration
    std::vector<std::uint64_t> seeds;    // certificates
    std::size_t edges = 0;               // certificates: m per graph
    std::optional<std::uint32_t> p_max;  // certificates; default from m and N
    std::uint32_t n_max = 0;             // totients
    bool timing = false;                 // adds a wall-clock column

    void validate() const {
        switch (kind) {
            case ExperimentKind::growth3d:
            case ExperimentKind::growth_hd:
                if (ks.empty()) throw ValidationError("k range is empty");
                for (Coord k : ks) {
                    if (k < 2) throw ValidationError("growth sweeps need k >= 2");
                }
                if (kind == ExperimentKind::growth_hd && dim < 4) {
                    throw ValidationError("growth_hd needs dim >= 4");
                }
                break;
            case ExperimentKind::certificates:
                if (grids.empty()) throw ValidationError("no grids given");
                if (seeds.empty()) throw ValidationError("no seeds given");
                if (edges == 0) throw ValidationError("edge count must be positive");
                break;
            case ExperimentKind::totients:
                if (n_max < 1) throw ValidationError("n_max must be positive");
                break;
            case ExperimentKind::enumeration:
                if (grids.empty()) throw ValidationError("no grids given");
                break;
        }
    }
};

/// One output row as ordered (column, value) pairs.
struct ExperimentRecord {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }

    [[nodiscard]] const std::string& at(const std::string& key) const {
        for (const auto& [k, v] : fields) {
            if (k == key) return v;
        }
        throw std::out_of_range("no column " + key);
    }
};

[[nodiscard]] inline std::string format_f64(double x) {
    if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

[[nodiscard]] inline std::string to_decimal(const mpz_class& x) { return x.get_str(); }
[[nodiscard]] inline std::string to_decimal(std::uint64_t x) { return std::to_string(x); }

namespace detail {

inline void growth_rows(const ExperimentConfig& cfg, int d, std::vector<ExperimentRecord>& out) {
    for (Coord k : cfg.ks) {
        const auto start = std::chrono::steady_clock::now();
        const GridGraph g = layered_complete_bipartite(k, d);
        const CrossingReport rep = count_crossings_pruned(g);
        const mpq_class bound = analytic_skip_bound({k, d});

        ExperimentRecord r;
        r.add("d", std::to_string(d));
        r.add("k", std::to_string(k));
        r.add("vertices", std::to_string(g.vertex_count()));
        r.add("edges", std::to_string(g.edge_count()));
        r.add("volume", to_decimal(compute_volume(g)));
        r.add("crossings", to_decimal(rep.total));
        r.add("per_edge_max", to_decimal(rep.per_edge_max()));
        r.add("skip_bound", bound.get_str());
        r.add("skip_bound_f64", format_f64(bound.get_d()));
        const double kd = static_cast<double>(k);
        const double cr = static_cast<double>(rep.total);
        if (d == 3) {
            r.add("cr_over_k6lnk_f64", format_f64(cr / (std::pow(kd, 6) * std::log(kd))));
            r.add("cr_over_envelope_f64",
                  format_f64(cr / (2 * std::pow(kd, 6) * std::log(kd) + 30 * std::pow(kd, 6))));
        } else {
            const double ell = std::pow(kd, d - 1);
            r.add("ell", std::to_string(static_cast<std::uint64_t>(ell)));
            r.add("cr_over_ell3_f64", format_f64(cr / (ell * ell * ell)));
        }
        if (cfg.timing) {
            const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
            r.add("wall_ms_f64", format_f64(ms.count()));
        }
        out.push_back(std::move(r));
    }
}

}  // namespace detail

/// Certificate values next to the exact count for one graph.
struct CertificateComparison {
    std::uint64_t crossings;
    std::uint32_t p_max;
    mpq_class midpoint_bucket;
    mpq_class essential_pgrid;
    mpq_class greedy_removal;
    mpq_class midpoint_formula;
    std::vector<PGridLevel> levels;

    [[nodiscard]] bool sound() const {
        const mpq_class cr(mpz_class(static_cast<unsigned long>(crossings)));
        return midpoint_bucket <= cr && essential_pgrid <= cr && greedy_removal <= cr &&
               midpoint_formula <= cr;
    }
};

[[nodiscard]] inline CertificateComparison compare_certificates(const GridGraph& g,
                                                                std::optional<std::uint32_t> p_max) {
    const mpz_class n = compute_volume(g);
    const mpz_class m(static_cast<unsigned long>(g.edge_count()));
    const std::uint32_t p = p_max.value_or(default_p_max(n, m));
    auto ess = lower_bound_essential_pgrid(g, p);
    return {count_crossings_pruned(g).total,
            p,
            lower_bound_midpoint_bucket(g).value,
            ess.value,
            greedy_removal_certificate(g).value,
            lower_bound_midpoint_formula(n, m, static_cast<int>(g.dim())),
            std::move(ess.levels)};
}

[[nodiscard]] inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ExperimentRecord> out;
    switch (cfg.kind) {
        case ExperimentKind::growth3d: detail::growth_rows(cfg, 3, out); break;
        case ExperimentKind::growth_hd: detail::growth_rows(cfg, cfg.dim, out); break;
        case ExperimentKind::certificates:
            for (const auto& spec : cfg.grids) {
                for (std::uint64_t seed : cfg.seeds) {
                    const auto start = std::chrono::steady_clock::now();
                    const GridGraph g = random_proper_graph(spec, cfg.edges, seed, true);
                    const auto c = compare_certificates(g, cfg.p_max);
                    ExperimentRecord r;
                    r.add("grid", spec.to_string());
                    r.add("seed", std::to_string(seed));
                    r.add("edges", std::to_string(g.edge_count()));
                    r.add("volume", to_decimal(compute_volume(g)));
                    r.add("crossings", to_decimal(c.crossings));
                    r.add("p_max", std::to_string(c.p_max));
                    r.add("midpoint_bucket", c.midpoint_bucket.get_str());
                    r.add("essential_pgrid", c.essential_pgrid.get_str());
                    r.add("greedy_removal", c.greedy_removal.get_str());
                    r.add("midpoint_formula", c.midpoint_formula.get_str());
                    r.add("sound", c.sound() ? "true" : "false");
                    if (cfg.timing) {
                        const std::chrono::duration<double, std::milli> ms =
                            std::chrono::steady_clock::now() - start;
                        r.add("wall_ms_f64", format_f64(ms.count()));
                    }
                    out.push_back(std::move(r));
                }
            }
            break;
        case ExperimentKind::totients:
            for_each_totient_row(cfg.n_max, [&](const TotientRow& row) {
                ExperimentRecord r;
                r.add("n", std::to_string(row.n));
                r.add("phi", std::to_string(row.phi));
                r.add("s1", row.s1.get_str());
                r.add("s2", row.s2.get_str());
                r.add("s2_over_n3_f64", format_f64(row.s2_over_n3));
                r.add("s3_f64", format_f64(row.s3));
                r.add("s3_over_lnn_f64",
                      row.n >= 2 ? format_f64(row.s3 / std::log(static_cast<double>(row.n))) : "");
                out.push_back(std::move(r));
            });
            break;
        case ExperimentKind::enumeration:
            for (const auto& spec : cfg.grids) {
                const auto start = std::chrono::steady_clock::now();
                const ConflictGraph cg = build_conflict_graph(spec);
                ExperimentRecord r;
                r.add("grid", spec.to_string());
                r.add("volume", to_decimal(spec.volume()));
                r.add("candidates", std::to_string(cg.size()));
                r.add("conflicts", std::to_string(cg.conflict_pairs()));
                r.add("subgraphs", to_decimal(count_crossing_free_subgraphs(cg)));
                r.add("matchings", to_decimal(count_crossing_free_matchings(cg)));
                r.add("spanning_trees", spec.volume() <= kSpanningTreeVolumeCap
                                            ? to_decimal(count_crossing_free_spanning_trees(spec))
                                            : "");
                r.add("max_edges", std::to_string(maximum_independent_set(cg.conflicts)));
                r.add("bose", to_decimal(bose_formula(spec)));
                r.add("ncs_upper",
                      spec.volume() >= 2 ? to_decimal(ncs_upper_formula(spec.volume(),
                                                                        static_cast<int>(spec.dim())))
                                         : "");
                if (cfg.timing) {
                    const std::chrono::duration<double, std::milli> ms =
                        std::chrono::steady_clock::now() - start;
                    r.add("wall_ms_f64", format_f64(ms.count()));
                }
                out.push_back(std::move(r));
            }
            break;
    }
    return out;
}

[[nodiscard]] inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

/// CSV (header row, column order of the first record) or a JSON array of
/// objects whose values are all strings.
[[nodiscard]] inline std::string emit_report(const std::vector<ExperimentRecord>& records,
                                             ReportFormat format) {
    if (records.empty()) throw ValidationError("no records to emit");
    std::ostringstream os;
    if (format == ReportFormat::csv) {
        const auto& head = records.front().fields;
        for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << csv_escape(head[i].first);
        os << '\n';
        for (const auto& r : records) {
            if (r.fields.size() != head.size()) throw ValidationError("records disagree on columns");
            for (std::size_t i = 0; i < r.fields.size(); ++i) {
                if (r.fields[i].first != head[i].first) {
                    throw ValidationError("records disagree on columns");
                }
                os << (i ? "," : "") << csv_escape(r.fields[i].second);
            }
            os << '\n';
        }
        return os.str();
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.fields) obj[k] = v;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

}  // namespace gridcross
