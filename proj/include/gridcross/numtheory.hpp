#pragma once

// Totient tables, essential p-grid levels, and the totient-sum inequalities
// behind the three-dimensional lower bound.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "gridcross/errors.hpp"
#include "gridcross/geom.hpp"

namespace gridcross {

class TotientTable {
public:
    explicit TotientTable(std::uint32_t n_max) : phi_(std::size_t{n_max} + 1, 0) {
        if (n_max < 1) throw ValidationError("totient table needs n_max >= 1");
        // Linear sieve: every composite is struck exactly once by its least prime.
        std::vector<std::uint32_t> primes;
        std::vector<bool> composite(phi_.size(), false);
        phi_[1] = 1;
        for (std::uint32_t i = 2; i <= n_max; ++i) {
            if (!composite[i]) {
                primes.push_back(i);
                phi_[i] = i - 1;
            }
            for (std::uint32_t p : primes) {
                const std::uint64_t ip = std::uint64_t{i} * p;
                if (ip > n_max) break;
                composite[ip] = true;
                if (i % p == 0) {
                    phi_[ip] = phi_[i] * p;
                    break;
                }
                phi_[ip] = phi_[i] * (p - 1);
            }
        }
    }

    [[nodiscard]] std::uint32_t n_max() const noexcept {
        return static_cast<std::uint32_t>(phi_.size() - 1);
    }
    [[nodiscard]] std::uint64_t operator()(std::uint32_t i) const { return phi_.at(i); }

private:
    std::vector<std::uint64_t> phi_;
};

[[nodiscard]] inline TotientTable totient_sieve(std::uint32_t n_max) { return TotientTable(n_max); }

/// lcm of the reduced coordinate denominators; 1 for lattice points.
[[nodiscard]] inline mpz_class essential_level(const RationalPoint& p) {
    mpz_class level = 1;
    for (const auto& c : p.coords()) mpz_lcm(level.get_mpz_t(), level.get_mpz_t(), c.get_den_mpz_t());
    return level;
}

struct PGridPoints {
    std::vector<RationalPoint> all;        // parameters i/p, 0 < i < p
    std::vector<RationalPoint> essential;  // the subset with gcd(i, p) = 1
};

[[nodiscard]] inline PGridPoints edge_pgrid_points(const Segment& seg, std::uint32_t p) {
    if (p < 1) throw ValidationError("p must be positive");
    if (!is_primitive(seg)) throw ValidationError("p-grid points require a primitive segment");
    PGridPoints out;
    const LatticePoint u = seg.b() - seg.a();
    for (std::uint32_t i = 1; i < p; ++i) {
        std::vector<mpq_class> c;
        c.reserve(seg.dim());
        for (std::size_t k = 0; k < seg.dim(); ++k) {
            c.emplace_back(mpz_class(static_cast<long>(seg.a()[k] * p + Coord{i} * u[k])),
                           mpz_class(static_cast<unsigned long>(p)));
        }
        RationalPoint pt(std::move(c));
        if (std::gcd(i, p) == 1) out.essential.push_back(pt);
        out.all.push_back(std::move(pt));
    }
    return out;
}

struct TotientSums {
    std::uint32_t n = 0;
    mpz_class s1;  // sum phi(i)
    mpz_class s2;  // sum phi(i)^2
    mpq_class s3;  // sum phi(i)^2 / i^3
};

[[nodiscard]] inline TotientSums totient_sums(std::uint32_t n) {
    const TotientTable phi(n);
    TotientSums out{n, 0, 0, 0};
    for (std::uint32_t i = 1; i <= n; ++i) {
        const mpz_class f(static_cast<unsigned long>(phi(i)));
        out.s1 += f;
        out.s2 += f * f;
        mpz_class cube(static_cast<unsigned long>(i));
        cube = cube * cube * cube;
        mpq_class term(f * f, cube);
        term.canonicalize();
        out.s3 += term;
    }
    return out;
}

/// One row of the running sums; s3 is exact while accumulating and only
/// the reported ratio columns are floating point.
struct TotientRow {
    std::uint32_t n;
    std::uint64_t phi;
    mpz_class s1;
    mpz_class s2;
    double s2_over_n3;
    double s3;
};

template <typename Visitor>
void for_each_totient_row(std::uint32_t n_max, Visitor&& visit) {
    const TotientTable phi(n_max);
    mpz_class s1 = 0, s2 = 0;
    mpq_class s3 = 0;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
        const mpz_class f(static_cast<unsigned long>(phi(n)));
        s1 += f;
        s2 += f * f;
        mpz_class cube(static_cast<unsigned long>(n));
        cube = cube * cube * cube;
        mpq_class term(f * f, cube);
        term.canonicalize();
        s3 += term;
        visit(TotientRow{n, phi(n), s1, s2, mpq_class(s2, cube).get_d(), s3.get_d()});
    }
}

struct TotientReport {
    std::uint32_t n_max = 0;
    /// Sum phi(i)^2 < n^3 for every n <= n_max.
    bool upper_holds = true;
    std::optional<std::uint32_t> first_upper_failure;
    std::uint32_t upper_failures = 0;
    /// 11 * sum phi(i)^2 >= n^3 for every n in [lower_threshold, n_max].
    std::optional<std::uint32_t> lower_threshold;
    std::uint32_t lower_failures = 0;
    double min_s2_ratio = 0;  // min over n of s2(n) / n^3
    double s2_ratio_at_max = 0;
    /// min over k in [27, n_max] of s3(k) / ln k, and where it is attained.
    double log_constant = 0;
    std::uint32_t log_constant_at = 0;
};

[[nodiscard]] inline TotientReport verify_totient_inequalities(std::uint32_t n_max) {
    if (n_max < 27) throw ValidationError("totient verification needs n_max >= 27");
    TotientReport r;
    r.n_max = n_max;
    r.min_s2_ratio = INFINITY;
    r.log_constant = INFINITY;
    std::uint32_t last_lower_failure = 0;
    for_each_totient_row(n_max, [&](const TotientRow& row) {
        mpz_class n3(static_cast<unsigned long>(row.n));
        n3 = n3 * n3 * n3;
        if (row.s2 >= n3) {
            if (r.upper_holds) r.first_upper_failure = row.n;
            r.upper_holds = false;
            ++r.upper_failures;
        }
        if (11 * row.s2 < n3) {
            ++r.lower_failures;
            last_lower_failure = row.n;
        }
        r.min_s2_ratio = std::min(r.min_s2_ratio, row.s2_over_n3);
        r.s2_ratio_at_max = row.s2_over_n3;
        if (row.n >= 27) {
            const double c = row.s3 / std::log(static_cast<double>(row.n));
            if (c < r.log_constant) {
                r.log_constant = c;
                r.log_constant_at = row.n;
            }
        }
    });
    if (last_lower_failure < n_max) r.lower_threshold = last_lower_failure + 1;
    return r;
}

}  // namespace gridcross
