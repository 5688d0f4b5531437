#pragma once

// Meijer-G parameter calculus: shift/inversion/cancellation identities, the
// fractional-Laplacian and Riesz parameter-shift transforms with validity
// checking, and numeric evaluation through generic residue-series reduction
// to hypergeometric sums.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace fraclap {

struct MeijerGSpec {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<double> a;  // upper, length p (first n are "inside")
    std::vector<double> b;  // lower, length q (first m are "inside")
    double prefactor = 1.0;
    double monomial_power = 0.0;  // leading |x|^kappa factor
    int d = 1;
    int ell = 0;

    bool valid_shape() const {
        return m >= 0 && n >= 0 && m <= q && n <= p &&
               static_cast<int>(a.size()) == p && static_cast<int>(b.size()) == q;
    }
};

struct ValidityReport {
    bool admissible = false;
    double lambda_bar = 0.0;
    double lambda_under = 0.0;
    std::vector<std::string> failed_conditions;
    std::vector<std::string> boundary_exclusions;
};

inline MeijerGSpec multiplicative_shift(MeijerGSpec g, double mu) {
    for (auto& v : g.a) v += mu;
    for (auto& v : g.b) v += mu;
    g.monomial_power -= 2.0 * mu;
    return g;
}

// G(1/z | a; b) = G(z | 1-b; 1-a) with (m,n,p,q) -> (n,m,q,p).
inline MeijerGSpec argument_inversion(const MeijerGSpec& g) {
    MeijerGSpec h;
    h.m = g.n;
    h.n = g.m;
    h.p = g.q;
    h.q = g.p;
    h.a.reserve(g.q);
    for (double v : g.b) h.a.push_back(1.0 - v);
    h.b.reserve(g.p);
    for (double v : g.a) h.b.push_back(1.0 - v);
    h.prefactor = g.prefactor;
    h.monomial_power = g.monomial_power;
    h.d = g.d;
    h.ell = g.ell;
    return h;
}

// Remove matched parameter pairs: an upper-inside entry equal to a
// lower-outside entry (dropping one from each, decrementing n, p, q), and the
// mirrored form with a lower-inside entry equal to an upper-outside entry
// (decrementing m, p, q). Repeats until no pair matches.
inline MeijerGSpec cancel_reduce(MeijerGSpec g, double tol = 1e-12) {
    bool changed = true;
    while (changed) {
        changed = false;
        // lower-inside b_j == upper-outside a_k
        for (int j = 0; j < g.m && !changed; ++j) {
            for (int k = g.n; k < g.p; ++k) {
                if (std::abs(g.b[j] - g.a[k]) < tol) {
                    g.b.erase(g.b.begin() + j);
                    g.a.erase(g.a.begin() + k);
                    --g.m; --g.p; --g.q;
                    changed = true;
                    break;
                }
            }
        }
        if (changed) continue;
        // upper-inside a_j == lower-outside b_k
        for (int j = 0; j < g.n && !changed; ++j) {
            for (int k = g.m; k < g.q; ++k) {
                if (std::abs(g.a[j] - g.b[k]) < tol) {
                    g.a.erase(g.a.begin() + j);
                    g.b.erase(g.b.begin() + k);
                    --g.n; --g.p; --g.q;
                    changed = true;
                    break;
                }
            }
        }
    }
    return g;
}

namespace detail {
inline double max_inside_a(const MeijerGSpec& g) {
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n; ++j) m = std::max(m, g.a[j]);
    return m;
}
inline double min_inside_b(const MeijerGSpec& g) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.m; ++j) m = std::min(m, g.b[j]);
    return m;
}
inline double param_sum_diff(const MeijerGSpec& g) {
    double s = 0.0;
    for (double v : g.a) s += v;
    for (double v : g.b) s -= v;
    return s;
}
} // namespace detail

// Validity of the fractional parameter-shift theorems for the *input* spec g
// under signed order s (s > 0 Laplacian, s < 0 Riesz of magnitude |s|).
inline ValidityReport check_validity(const MeijerGSpec& g, double s) {
    ValidityReport rep;
    const int pq = g.p + g.q, mn2 = 2 * (g.m + g.n);
    const double amax = detail::max_inside_a(g);
    const double bmin = detail::min_inside_b(g);
    const double sum_diff = detail::param_sum_diff(g);

    // lambda_bar / lambda_under with the (p+q vs 2m+2n, p vs q) case split
    if (pq < mn2 || (pq == mn2 && g.p >= g.q)) {
        rep.lambda_bar = 1.0 - amax;
    } else {
        rep.lambda_bar = std::min(1.0 - amax,
                                  0.5 + (sum_diff - 1.0) / static_cast<double>(g.q - g.p));
    }
    if (pq < mn2 || (pq == mn2 && g.p <= g.q)) {
        rep.lambda_under = -bmin;
    } else {
        rep.lambda_under = std::max(-bmin,
                                    0.5 - (sum_diff - 1.0) / static_cast<double>(g.p - g.q));
    }

    const bool riesz = s < 0.0;
    const double sigma = std::abs(s);
    const int ell = g.ell, d = g.d;

    if (riesz && !(sigma > 0.0 && sigma < 0.5 * d))
        rep.failed_conditions.push_back("0 < sigma < d/2");
    if (!riesz && !(s > 0.0)) rep.failed_conditions.push_back("s > 0");

    if (pq < mn2) {
        // case (i): conditions on raw parameter extremes
        double lhs = 1.0 - amax;
        double rhs = riesz ? 0.5 * (ell + 2.0 * sigma) : 0.5 * (ell - 2.0 * s);
        if (!(lhs > rhs))
            rep.failed_conditions.push_back(riesz ? "1 - max a > (l + 2s)/2"
                                                  : "1 - max a > (l - 2s)/2");
        if (!(bmin > -0.5 * (d + ell)))
            rep.failed_conditions.push_back("min b > -(d + l)/2");
    } else if (pq == mn2) {
        // case (ii): lambda conditions
        double rhs = riesz ? 0.5 * (ell + 2.0 * sigma) : 0.5 * (ell - 2.0 * s);
        if (!(rep.lambda_bar > rhs))
            rep.failed_conditions.push_back(riesz ? "lambda_bar > (l + 2s)/2"
                                                  : "lambda_bar > (l - 2s)/2");
        if (!(rep.lambda_under < 0.5 * (d + ell)))
            rep.failed_conditions.push_back("lambda_under < (d + l)/2");
        if (g.p == g.q) {
            double bound = riesz ? 1.0 - 2.0 * sigma : 1.0 + 2.0 * s;
            if (!(sum_diff > bound))
                rep.boundary_exclusions.push_back("|x| = 1 excluded");
        }
    } else {
        rep.failed_conditions.push_back("p + q <= 2m + 2n");
    }
    rep.admissible = rep.failed_conditions.empty();
    return rep;
}

// Parameter-shift transform for signed order s. For s > 0 this is the
// fractional Laplacian; for s < 0 the Riesz potential of magnitude |s| (the
// mirrored theorem: all shifts negated, prefactor 4^s with signed s).
inline MeijerGSpec apply_fractional(const MeijerGSpec& g, double s) {
    ValidityReport rep = check_validity(g, s);
    if (!rep.admissible) {
        std::string msg = "apply_fractional: inadmissible:";
        for (auto& c : rep.failed_conditions) msg += " [" + c + "]";
        throw ValidityError(msg);
    }
    MeijerGSpec h;
    h.m = g.m + 1;
    h.n = g.n + 1;
    h.p = g.p + 2;
    h.q = g.q + 2;
    const double dl = 0.5 * (g.d + 2.0 * g.ell);
    h.a.push_back(1.0 - s - dl);
    for (int j = 0; j < g.n; ++j) h.a.push_back(g.a[j] - s);
    h.a.push_back(-s);
    for (int j = g.n; j < g.p; ++j) h.a.push_back(g.a[j] - s);
    h.b.push_back(0.0);
    for (int j = 0; j < g.m; ++j) h.b.push_back(g.b[j] - s);
    for (int j = g.m; j < g.q; ++j) h.b.push_back(g.b[j] - s);
    h.b.push_back(1.0 - dl);
    h.prefactor = g.prefactor * std::pow(4.0, s);
    h.monomial_power = g.monomial_power;
    h.d = g.d;
    h.ell = g.ell;
    return h;
}

// ---------------------------------------------------------------------------
// Reduction to hypergeometric sums (generic residue-series expansion)
// ---------------------------------------------------------------------------

enum class Branch { inside, outside, whole_line };

struct HypergeometricTerm {
    double coefficient = 0.0;
    double z_power = 0.0;           // multiplies z^{z_power}
    std::vector<double> upper;
    std::vector<double> lower;
    int arg_sign = 1;               // argument is arg_sign * z
    bool reciprocal = false;        // argument (and z_power base) use 1/z
};

inline const std::set<std::array<int, 4>>& registered_signatures() {
    static const std::set<std::array<int, 4>> sigs = {
        // direct reduction patterns
        {1, 1, 2, 2}, {1, 2, 2, 3}, {2, 1, 2, 3}, {2, 1, 2, 4}, {2, 1, 3, 3},
        // images of the catalog rows under the parameter-shift theorems
        {3, 1, 3, 5}, {2, 3, 4, 6}, {3, 3, 5, 7}, {1, 3, 4, 4}, {3, 1, 4, 4},
        {2, 2, 4, 6},
        // catalog input signatures (identity tests evaluate these directly)
        {2, 0, 2, 2}, {2, 0, 1, 2}, {1, 0, 0, 2}, {2, 2, 3, 5}, {1, 2, 2, 4},
        {2, 0, 1, 3}, {0, 2, 2, 2}, {1, 1, 1, 2},
        // fully-cancelled ball-complement images
        {1, 2, 3, 3},
    };
    return sigs;
}

namespace detail {

// Residue-series expansion over the first m lower parameters, valid for
// |z| < 1 (p == q) or all z (p < q).
inline std::vector<HypergeometricTerm> slater_terms(const MeijerGSpec& g) {
    std::vector<HypergeometricTerm> terms;
    for (int h = 0; h < g.m; ++h) {
        const double bh = g.b[h];
        // Logarithmic case: integer difference among the residue points.
        for (int j = 0; j < g.m; ++j) {
            if (j == h) continue;
            double diff = g.b[j] - bh;
            if (std::abs(diff - std::round(diff)) < 1e-9)
                throw PatternError("slater: integer b_j - b_k (logarithmic case)");
        }
        double log_c = 0.0;
        int sign = 1;
        bool zero = false;
        auto mul_gamma = [&](double z) {
            if (is_nonpositive_integer(z, 1e-9))
                throw PatternError("slater: numerator gamma pole");
            LogGamma lg = log_gamma_signed(z);
            log_c += lg.log_abs;
            sign *= lg.sign;
        };
        auto div_gamma = [&](double z) {
            if (is_nonpositive_integer(z, 1e-9)) { zero = true; return; }
            LogGamma lg = log_gamma_signed(z);
            log_c -= lg.log_abs;
            sign *= lg.sign;
        };
        for (int j = 0; j < g.m; ++j)
            if (j != h) mul_gamma(g.b[j] - bh);
        for (int j = 0; j < g.n; ++j) mul_gamma(1.0 + bh - g.a[j]);
        for (int j = g.m; j < g.q; ++j) {
            // 1 + b_h - b_j is also a lower parameter of this term's series;
            // a non-positive integer there pairs a vanishing coefficient with
            // series-term poles, so the finite limit must come from perturbed
            // parameters rather than a silent zero.
            if (is_nonpositive_integer(1.0 + bh - g.b[j], 1e-9))
                throw PatternError("slater: series lower parameter at non-positive integer");
            div_gamma(1.0 + bh - g.b[j]);
        }
        for (int j = g.n; j < g.p; ++j) div_gamma(g.a[j] - bh);

        HypergeometricTerm t;
        t.coefficient = zero ? 0.0 : sign * std::exp(log_c);
        t.z_power = bh;
        for (double aj : g.a) t.upper.push_back(1.0 + bh - aj);
        for (int j = 0; j < g.q; ++j)
            if (j != h) t.lower.push_back(1.0 + bh - g.b[j]);
        t.arg_sign = ((g.p - g.m - g.n) % 2) ? -1 : 1;
        terms.push_back(std::move(t));
    }
    return terms;
}

} // namespace detail

inline std::vector<HypergeometricTerm> to_hypergeometric(const MeijerGSpec& g,
                                                         Branch branch) {
    if (!g.valid_shape()) throw ParamError("to_hypergeometric: malformed spec");
    if (!registered_signatures().count({g.m, g.n, g.p, g.q}))
        throw UnsupportedSignature("to_hypergeometric: signature (" +
                                   std::to_string(g.m) + "," + std::to_string(g.n) + "," +
                                   std::to_string(g.p) + "," + std::to_string(g.q) +
                                   ") not registered");
    if ((branch == Branch::outside && g.p == g.q) || g.p > g.q) {
        MeijerGSpec inv = argument_inversion(g);
        auto terms = detail::slater_terms(inv);
        for (auto& t : terms) t.reciprocal = true;
        return terms;
    }
    return detail::slater_terms(g);
}

// Numeric value of a term sum at argument z (z = x^2 for the catalog).
inline double eval_terms(const std::vector<HypergeometricTerm>& terms, double z,
                         int* terms_evaluated = nullptr) {
    double sum = 0.0;
    int count = 0;
    for (const auto& t : terms) {
        if (t.coefficient == 0.0) continue;
        double zz = t.reciprocal ? 1.0 / z : z;
        PFQResult r = pfq_full({t.upper, t.lower, t.arg_sign * zz});
        sum += t.coefficient * std::pow(zz, t.z_power) * r.value;
        count += r.terms;
    }
    if (terms_evaluated) *terms_evaluated += count;
    return sum;
}

// Direct numeric Meijer-G evaluation at z > 0 (branch chosen from z), not
// including the spec's prefactor/monomial bookkeeping.
inline double meijerg_eval(const MeijerGSpec& g, double z, int* terms_evaluated = nullptr) {
    if (z <= 0.0) throw DomainError("meijerg_eval: requires z > 0");
    Branch br;
    if (g.p < g.q) br = Branch::inside;           // expansion is entire
    else if (g.p > g.q) br = Branch::outside;
    else {
        if (std::abs(z - 1.0) < 1e-13) throw BranchError("meijerg_eval: |z| = 1");
        br = z < 1.0 ? Branch::inside : Branch::outside;
    }
    return eval_terms(to_hypergeometric(g, br), z, terms_evaluated);
}

} // namespace fraclap
