#pragma once

// Brute-force quadrature of the singular-integral and Riesz-kernel
// definitions, used as an independent ground truth for the closed forms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "bases.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace fraclap {

struct OracleConfig {
    double split_radius = 0.5;
    int gauss_nodes = 120;
    double far_cutoff = 60.0;
    double tol = 1e-8;
    bool richardson = true;
};

struct OracleResult {
    double value = 0.0;
    double err_est = 0.0;
};

namespace detail {

inline void check_oracle_config(const OracleConfig& cfg) {
    if (!(cfg.split_radius > 0.0))
        throw ValidityError("OracleConfig: split_radius > 0 violated");
    if (!(cfg.far_cutoff > 1.0 + cfg.split_radius))
        throw ValidityError("OracleConfig: far_cutoff > 1 + split_radius violated");
    if (cfg.gauss_nodes < 4) throw ValidityError("OracleConfig: gauss_nodes too small");
}

// Iterated Aitken delta-squared acceleration of a partial-sum sequence.
// Returns the accelerated limit and a change-based error estimate; stops
// deepening once rounding noise starts to dominate.
inline std::pair<double, double> aitken_limit(std::vector<double> S) {
    double best = S.back();
    double err = S.size() >= 2 ? std::abs(S[S.size() - 1] - S[S.size() - 2])
                               : std::abs(best);
    for (int level = 0; level < 15 && S.size() >= 3; ++level) {
        std::vector<double> T(S.size() - 2);
        for (size_t i = 0; i + 2 < S.size(); ++i) {
            double d1 = S[i + 1] - S[i];
            double d2 = S[i + 2] - S[i + 1];
            double den = d2 - d1;
            T[i] = std::abs(den) < 1e-300 ? S[i + 2] : S[i + 2] - d2 * d2 / den;
        }
        double change = std::abs(T.back() - best);
        if (change <= err) {
            err = change;
            best = T.back();
        } else if (change > 8.0 * err + 1e-300) {
            break;
        } else {
            best = T.back();
        }
        S = std::move(T);
    }
    return {best, err + 1e-16 * std::abs(best)};
}

// Integral of h over [from, infinity) for smooth monotone power-type decay:
// doubling panels, then the remainder extrapolated from the geometric ratio
// of the last panel integrals.  A remainder that cannot be bounded inflates
// err so the caller's tolerance gate fires.
template <typename F>
double doubling_continuation(const F& h, double from, int nodes, double scale,
                             double& err) {
    double total = 0.0;
    double a = from;
    double last = 0.0;
    std::vector<double> ratios;
    for (int k = 0; k < 18; ++k) {
        double b = 2.0 * a;
        double pk = gl_integrate(h, a, b, nodes);
        total += pk;
        a = b;
        if (std::abs(pk) < 1e-17 * std::max(scale, std::abs(total))) {
            err += std::abs(pk) + 1e-16 * scale;
            return total;
        }
        if (last != 0.0) ratios.push_back(pk / last);
        last = pk;
    }
    // Remainder from the median of the trailing panel ratios; their scatter
    // (zero for an exact power) sets the error.
    double q = 0.0, qvar = 1.0;
    if (ratios.size() >= 5) {
        std::vector<double> tailq(ratios.end() - 5, ratios.end());
        std::sort(tailq.begin(), tailq.end());
        q = tailq[2];
        qvar = 0.0;
        for (size_t i = ratios.size() - 3; i < ratios.size(); ++i)
            qvar = std::max(qvar, std::abs(ratios[i] - q));
    }
    if (!ratios.empty() && q > 0.0 && q < 0.95) {
        double rem = last * q / (1.0 - q);
        total += rem;
        err += std::abs(rem) * (qvar / (1.0 - q) + 10.0 / a) + 1e-16 * scale;
    } else {
        err += 10.0 * std::abs(last) + std::abs(total);
    }
    return total;
}

// Tails that mix slow monotone power decay with oscillation.  A binomial
// kernel over neighbouring panel sums (lags 1 and 2, panel width pi/2)
// annihilates the period-pi and period-2pi components exactly -- every
// catalog function oscillates at integer frequency -- leaving the smooth
// local mean per panel.  The purely oscillatory residue of the computed
// panels is then drift-free and Aitken-accelerates cleanly, while the
// smooth part beyond the last panel is continued by doubling panels of a
// twice-smoothed moving average.
template <typename F>
double smoothed_split_tail(const F& h, double start, double width,
                           const std::vector<double>& panel_vals, int nodes,
                           double scale, double& err) {
    const int np = static_cast<int>(panel_vals.size());
    // Three extra panels so every drift window below is centred.
    std::vector<double> pv(panel_vals);
    for (int k = np; k < np + 3; ++k)
        pv.push_back(gl_integrate(h, start + k * width, start + (k + 1) * width,
                                  nodes));
    // conv((1,2,1)/4, (1,0,2,0,1)/4): kills e^{i pi k} and e^{i pi k / 2}.
    static const double kw[7] = {1, 2, 3, 4, 3, 2, 1};
    std::vector<double> m(np);
    for (int k = 0; k < np; ++k) {
        double acc = 0.0;
        for (int i = -3; i <= 3; ++i)
            acc += kw[i + 3] * pv[std::max(k + i, 0)];
        m[k] = acc / 16.0;
    }
    std::vector<double> osc_partial(np);
    double so = 0.0, sm = 0.0;
    for (int k = 0; k < np; ++k) {
        sm += m[k];
        so += pv[k] - m[k];
        osc_partial[k] = so;
    }
    auto lim = aitken_limit(osc_partial);
    // Smooth continuation beyond the last panel: a single 2*pi moving
    // average still carries an oscillatory residue from the amplitude
    // variation (two powers down) that would alias through the doubling
    // panels, so it is smoothed twice.
    auto M = [&](double u) {
        return gl_integrate(h, u - M_PI, u + M_PI, 32) / (2.0 * M_PI);
    };
    auto M2 = [&](double u) {
        return gl_integrate(M, u - M_PI, u + M_PI, 24) / (2.0 * M_PI);
    };
    const double end = start + np * width;
    double cont_err = 0.0;
    double cont = doubling_continuation(M2, end, std::min(nodes, 24), scale, cont_err);
    double resid = gl_integrate([&](double u) { return M(u) - M2(u); }, end,
                                end + 2.0 * M_PI, 16);
    cont_err += 2.0 * std::abs(resid);
    // Consistency of the two smooth references where they hand over: the
    // panel-kernel mean of the last panel against the doubled average.
    double mism = m[np - 1] - gl_integrate(M2, end - width, end, 8);
    err += lim.second + cont_err + 4.0 * std::abs(mism);
    return lim.first + sm + cont;
}

// Integral of h over [start, infinity).  Fixed-width panels first so that
// oscillatory integrands average out; the panel sums are kept at two
// resolutions (half-pi and pi wide) because the integrand's oscillation
// period may resonate with either width, and whichever sequence alternates
// is Aitken-accelerated.  Non-alternating tails fall through to the doubling
// continuation, and if no cheap candidate can certify its own accuracy the
// smoothing split takes over.
template <typename F>
double tail_integral(const F& h, double start, int nodes, double scale, double& err) {
    const double width = 0.5 * M_PI;
    const int max_panels = 256;
    std::vector<double> panel_vals, fine, coarse;
    panel_vals.reserve(max_panels);
    fine.reserve(max_panels);
    coarse.reserve(max_panels / 2);
    double sum = 0.0, u = start, last_fine = 0.0, last_coarse = 0.0, pk_prev = 0.0;
    int fine_changes = 0, coarse_changes = 0, tiny_run = 0;
    for (int k = 0; k < max_panels; ++k) {
        double pk = gl_integrate(h, u, u + width, nodes);
        u += width;
        sum += pk;
        panel_vals.push_back(pk);
        fine.push_back(sum);
        if (last_fine != 0.0 && pk * last_fine < 0.0) ++fine_changes;
        if (pk != 0.0) last_fine = pk;
        if (k % 2 == 1) {
            double ck = pk + pk_prev;
            coarse.push_back(sum);
            if (last_coarse != 0.0 && ck * last_coarse < 0.0) ++coarse_changes;
            if (ck != 0.0) last_coarse = ck;
        }
        pk_prev = pk;
        if (std::abs(pk) < 1e-17 * std::max(scale, std::abs(sum))) {
            if (++tiny_run >= 4) {
                err += 4.0 * std::abs(pk) + 1e-16 * scale;
                return sum;
            }
        } else {
            tiny_run = 0;
        }
    }
    bool fine_osc = fine_changes >= static_cast<int>(fine.size()) / 8;
    bool coarse_osc = coarse_changes >= static_cast<int>(coarse.size()) / 8;
    // Same-sign panels can still carry an oscillation riding on a larger
    // monotone part; detect it as ripple around the local pairwise mean.
    double ripple = 0.0, mass = 0.0;
    for (int k = 1; k + 1 < max_panels; ++k) {
        ripple += std::abs(panel_vals[k] -
                           0.5 * (panel_vals[k - 1] + panel_vals[k + 1]));
        mass += std::abs(panel_vals[k]);
    }
    // Strong ripple disqualifies the doubling candidate outright; even faint
    // ripple forces the smoothing split as a cross-check, because doubling
    // panels alias an unresolved oscillation into a smooth-looking lie.
    bool rippled = ripple > 1e-3 * mass;
    bool faint_ripple = ripple > 1e-6 * mass;
    double best = sum, best_err = std::numeric_limits<double>::max();
    if (coarse_osc) {
        auto lim = aitken_limit(coarse);
        best = lim.first;
        best_err = lim.second;
    }
    if (fine_osc) {
        auto lim = aitken_limit(fine);
        if (lim.second < best_err) {
            best = lim.first;
            best_err = lim.second;
        }
    }
    bool have_candidate = fine_osc || coarse_osc;
    if (!fine_osc && !coarse_osc && !rippled) {
        // Doubling panels alias any ripple, so this candidate is only
        // trustworthy on genuinely smooth tails.
        double derr = 0.0;
        double dv = sum + doubling_continuation(h, u, nodes, scale, derr);
        if (derr < best_err) {
            best = dv;
            best_err = derr;
        }
        have_candidate = true;
    }
    // Plain Aitken pseudo-converges (with a misleadingly small change-based
    // error) when a slow monotone component hides under the oscillation, so
    // oscillatory tails are always cross-checked against the smoothing split
    // and the split wins whenever the two disagree beyond their estimates.
    if (fine_osc || coarse_osc || faint_ripple ||
        best_err > 1e-9 * std::max(scale, std::abs(best))) {
        double serr = 0.0;
        double sv = smoothed_split_tail(h, start, width, panel_vals, nodes, scale,
                                        serr);
        // The split is the primary answer here; the cheap candidate only
        // survives when it corroborates the split within both estimates
        // (plain Aitken mislimits badly when alternation rides on a drift).
        double diff = std::abs(sv - best);
        if (!have_candidate || diff > 2.0 * (serr + best_err) ||
            serr < best_err) {
            best = sv;
            best_err = serr;
        }
    }
    err += best_err;
    return best;
}

// Distances from x to the points where catalog functions may lose
// smoothness (the origin and the support edges at +-1).
inline std::vector<double> kink_distances(double x) {
    std::vector<double> out;
    for (double c : {0.0, -1.0, 1.0}) {
        double d = std::abs(x - c);
        if (d > 1e-12) out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Integral of h over the half-segment between a possibly non-smooth edge
// and the segment midpoint: dyadic panels shrink toward the edge, and the
// remaining sliver is extrapolated from the geometric ratio of the last
// panel integrals (exact for power-type edge behavior of any integrable
// exponent, including unbounded integrable singularities).
template <typename F>
double half_graded(const F& h, double edge, double mid, int nodes, double scale,
                   double& err) {
    const int levels = 28;
    const double dir = mid >= edge ? 1.0 : -1.0;
    const double L = std::abs(mid - edge);
    if (L <= 0.0) return 0.0;
    double sum = 0.0, hi = L;
    double p_last = 0.0, p_prev = 0.0, q_prev = 0.0;
    int have = 0;
    for (int k = 0; k < levels; ++k) {
        double lo = 0.5 * hi;
        double x1 = edge + dir * lo, x2 = edge + dir * hi;
        double pk = dir > 0 ? gl_integrate(h, x1, x2, nodes)
                            : gl_integrate(h, x2, x1, nodes);
        sum += pk;
        if (have >= 1 && p_last != 0.0) q_prev = have >= 2 ? p_last / p_prev : 0.0;
        p_prev = p_last;
        p_last = pk;
        ++have;
        hi = lo;
        if (std::abs(pk) < 1e-18 * std::max(scale, std::abs(sum)) && k > 3) {
            err += std::abs(pk) + 1e-17 * scale;
            return sum;
        }
    }
    double q = p_prev != 0.0 ? p_last / p_prev : 0.0;
    if (q > 0.0 && q < 0.97) {
        double rem = p_last * q / (1.0 - q);
        sum += rem;
        double qvar = q_prev > 0.0 ? std::abs(q - q_prev) / (1.0 - q) : 0.1;
        err += std::abs(rem) * (qvar + hi / L) + 1e-17 * scale;
    } else {
        err += 2.0 * (std::abs(p_last) + std::abs(p_prev)) + 1e-17 * scale;
    }
    return sum;
}

// Integrate h over [a, b], grading into both endpoints.
template <typename F>
double edge_graded(const F& h, double a, double b, int nodes, double scale,
                   double& err) {
    if (!(b > a)) return 0.0;
    double m = a + 0.5 * (b - a);
    return half_graded(h, a, m, nodes, scale, err) +
           half_graded(h, b, m, nodes, scale, err);
}

// Mid-field integral of h over [u0, far] split at the kink distances.
template <typename F>
double midfield_integrate(const F& h, double u0, double far,
                          const std::vector<double>& kinks, int nodes, double scale,
                          double& err) {
    std::vector<double> bp{u0};
    for (double k : kinks)
        if (k > u0 * (1.0 + 1e-12) && k < far) bp.push_back(k);
    bp.push_back(far);
    std::sort(bp.begin(), bp.end());
    double sum = 0.0;
    for (size_t i = 0; i + 1 < bp.size(); ++i)
        sum += edge_graded(h, bp[i], bp[i + 1], nodes, scale, err);
    return sum;
}

} // namespace detail

// (-Delta)^s f at x by symmetric-pairing quadrature of the defining
// principal-value integral.
inline OracleResult frac_lap_oracle_1d(const std::function<double(double)>& f, double s,
                                       double x, const OracleConfig& cfg = {}) {
    if (!(s > 0.0 && s < 1.0)) throw ParamError("frac_lap_oracle_1d: s must be in (0,1)");
    detail::check_oracle_config(cfg);

    const std::vector<double> kinks = detail::kink_distances(x);
    double u0 = cfg.split_radius;
    for (double k : kinks) u0 = std::min(u0, 0.5 * k);
    u0 = std::max(u0, 1e-7);

    const double fx = f(x);
    auto g = [&](double u) { return 2.0 * fx - f(x + u) - f(x - u); };
    auto h = [&](double u) { return g(u) * std::pow(u, -1.0 - 2.0 * s); };
    const double scale = std::max(1.0, std::abs(fx));

    auto run = [&](int n, double& tail_err) {
        const QuadRule& gj = detail::cached_jacobi_rule(n, 0.0, 1.0 - 2.0 * s);
        double inner = 0.0;
        for (size_t i = 0; i < gj.x.size(); ++i) {
            double u = 0.5 * u0 * (1.0 + gj.x[i]);
            inner += gj.w[i] * g(u) / (u * u);
        }
        inner *= std::pow(0.5 * u0, 2.0 - 2.0 * s);
        double mid = detail::midfield_integrate(h, u0, cfg.far_cutoff, kinks, n, scale,
                                                 tail_err);
        // Past the cutoff the constant 2 f(x) part of the pairing integrates
        // in closed form, leaving only the (possibly oscillatory) f part for
        // the panel scheme.
        auto h_osc = [&](double u) {
            return -(f(x + u) + f(x - u)) * std::pow(u, -1.0 - 2.0 * s);
        };
        double tail = 2.0 * fx * std::pow(cfg.far_cutoff, -2.0 * s) / (2.0 * s) +
                      detail::tail_integral(h_osc, cfg.far_cutoff, std::min(n, 48),
                                            scale, tail_err);
        return inner + mid + tail;
    };

    const double C = std::pow(4.0, s) * gamma(0.5 + s) /
                     (std::sqrt(M_PI) * std::abs(gamma(-s)));
    double te1 = 0.0, te2 = 0.0;
    double v1 = run(cfg.gauss_nodes, te1);
    OracleResult res;
    if (cfg.richardson) {
        double v2 = run(2 * cfg.gauss_nodes, te2);
        res.value = C * v2;
        res.err_est = C * (std::abs(v2 - v1) + te2) + 1e-15 * scale;
    } else {
        res.value = C * v1;
        res.err_est = C * te1 + 1e-15 * scale;
    }
    if (res.err_est > cfg.tol * std::max(1.0, std::abs(res.value)))
        throw QuadratureError("frac_lap_oracle_1d: error estimate exceeds tolerance");
    return res;
}

// Riesz potential (-Delta)^{-sigma} f at x by kernel quadrature with
// Gauss-Jacobi treatment of the |x-y|^{2 sigma - 1} singularity.
inline OracleResult riesz_oracle_1d(const std::function<double(double)>& f, double sigma,
                                    double x, const OracleConfig& cfg = {}) {
    if (!(sigma > 0.0 && sigma < 0.5))
        throw ParamError("riesz_oracle_1d: sigma must be in (0,1/2)");
    detail::check_oracle_config(cfg);

    const std::vector<double> kinks = detail::kink_distances(x);
    double u0 = cfg.split_radius;
    for (double k : kinks) u0 = std::min(u0, 0.5 * k);
    u0 = std::max(u0, 1e-7);

    auto pair_sum = [&](double u) { return f(x + u) + f(x - u); };
    auto h = [&](double u) { return pair_sum(u) * std::pow(u, 2.0 * sigma - 1.0); };
    const double scale = std::max(1.0, std::abs(f(x)));

    auto run = [&](int n, double& tail_err) {
        const QuadRule& gj = detail::cached_jacobi_rule(n, 0.0, 2.0 * sigma - 1.0);
        double inner = 0.0;
        for (size_t i = 0; i < gj.x.size(); ++i) {
            double u = 0.5 * u0 * (1.0 + gj.x[i]);
            inner += gj.w[i] * pair_sum(u);
        }
        inner *= std::pow(0.5 * u0, 2.0 * sigma);
        double mid = detail::midfield_integrate(h, u0, cfg.far_cutoff, kinks, n, scale,
                                                 tail_err);
        double tail = detail::tail_integral(h, cfg.far_cutoff, std::min(n, 48), scale,
                                            tail_err);
        return inner + mid + tail;
    };

    const double C = gamma(0.5 - sigma) /
                     (std::pow(4.0, sigma) * std::sqrt(M_PI) * gamma(sigma));
    double te1 = 0.0, te2 = 0.0;
    double v1 = run(cfg.gauss_nodes, te1);
    OracleResult res;
    if (cfg.richardson) {
        double v2 = run(2 * cfg.gauss_nodes, te2);
        res.value = C * v2;
        res.err_est = C * (std::abs(v2 - v1) + te2) + 1e-15 * scale;
    } else {
        res.value = C * v1;
        res.err_est = C * te1 + 1e-15 * scale;
    }
    if (res.err_est > cfg.tol * std::max(1.0, std::abs(res.value)))
        throw QuadratureError("riesz_oracle_1d: error estimate exceeds tolerance");
    return res;
}

namespace detail {

// Angular kernel: the integral over the sphere direction of
// cos(m theta) (d=2) or P_m(cos theta) (d=3) against
// (r^2 + rho^2 - 2 r rho cos theta)^{-(d+2s)/2}, with panels graded
// geometrically away from theta = 0 where the kernel peaks as rho -> r.
inline double angular_kernel(int m, double r, double rho, int d, double kappa,
                             int nodes) {
    auto D = [&](double th) {
        double sh = std::sin(0.5 * th);
        double diff = rho - r;
        return diff * diff + 4.0 * r * rho * sh * sh;
    };
    auto integrand = [&](double th) {
        if (d == 2) return std::cos(m * th) * std::pow(D(th), -kappa);
        return jacobi_eval(m, 0.0, 0.0, std::cos(th)) * std::pow(D(th), -kappa) *
               std::sin(th);
    };
    double th_star = std::abs(rho - r) / std::sqrt(r * rho);
    th_star = std::min(std::max(th_star, 1e-14), M_PI / 2.0);
    double sum = gl_integrate(integrand, 0.0, th_star, nodes);
    double lo = th_star;
    while (lo < M_PI) {
        double hi = std::min(M_PI, 2.0 * lo);
        sum += gl_integrate(integrand, lo, hi, nodes);
        lo = hi;
    }
    return (d == 2 ? 2.0 : 2.0 * M_PI) * sum;
}

} // namespace detail

// (-Delta)^s of f(y) = V_ell(y) f_radial(|y|) at the point (r, 0, ...),
// returning the radial factor of the output (the V_ell factor divides out).
inline OracleResult frac_lap_oracle_radial(const std::function<double(double)>& f_radial,
                                           double s, int d, int ell, double r,
                                           const OracleConfig& cfg = {}) {
    if (d != 2 && d != 3)
        throw UnsupportedDimension("frac_lap_oracle_radial: d must be 2 or 3");
    if (!(s > 0.0 && s < 1.0))
        throw ParamError("frac_lap_oracle_radial: s must be in (0,1)");
    if (ell < 0) throw ParamError("frac_lap_oracle_radial: ell must be >= 0");
    if (r < 0.0) throw ParamError("frac_lap_oracle_radial: r must be >= 0");
    detail::check_oracle_config(cfg);

    const double C = std::pow(4.0, s) * gamma(0.5 * d + s) /
                     (std::pow(M_PI, 0.5 * d) * std::abs(gamma(-s)));

    if (r == 0.0) {
        if (ell != 0)
            throw DomainError("frac_lap_oracle_radial: r = 0 requires ell = 0");
        // At the origin the angular integral is trivial and the problem
        // reduces to a single radial integral against rho^{-1-2s}.
        const double f0 = f_radial(0.0);
        const double surf = d == 2 ? 2.0 * M_PI : 4.0 * M_PI;
        auto g = [&](double rho) { return f0 - f_radial(rho); };
        auto h = [&](double rho) { return g(rho) * std::pow(rho, -1.0 - 2.0 * s); };
        const std::vector<double> kinks{1.0};
        const double u0 = std::min(cfg.split_radius, 0.5);
        const double scale = std::max(1.0, std::abs(f0));
        auto run = [&](int n, double& tail_err) {
            const QuadRule& gj = detail::cached_jacobi_rule(n, 0.0, 1.0 - 2.0 * s);
            double inner = 0.0;
            for (size_t i = 0; i < gj.x.size(); ++i) {
                double u = 0.5 * u0 * (1.0 + gj.x[i]);
                inner += gj.w[i] * g(u) / (u * u);
            }
            inner *= std::pow(0.5 * u0, 2.0 - 2.0 * s);
            double mid = detail::midfield_integrate(h, u0, cfg.far_cutoff, kinks, n, scale,
                                                 tail_err);
            double tail = detail::tail_integral(h, cfg.far_cutoff, std::min(n, 48),
                                                scale, tail_err);
            return inner + mid + tail;
        };
        double te1 = 0.0, te2 = 0.0;
        double v1 = run(cfg.gauss_nodes, te1);
        OracleResult res;
        if (cfg.richardson) {
            double v2 = run(2 * cfg.gauss_nodes, te2);
            res.value = C * surf * v2;
            res.err_est = C * surf * (std::abs(v2 - v1) + te2) + 1e-15 * scale;
        } else {
            res.value = C * surf * v1;
            res.err_est = C * surf * te1 + 1e-15 * scale;
        }
        if (res.err_est > cfg.tol * std::max(1.0, std::abs(res.value)))
            throw QuadratureError("frac_lap_oracle_radial: error exceeds tolerance");
        return res;
    }

    const double kappa = 0.5 * (d + 2.0 * s);
    const double fx = f_radial(r) * std::pow(r, ell);
    double u0 = std::min(cfg.split_radius, 0.45 * r);
    if (std::abs(1.0 - r) > 1e-12) u0 = std::min(u0, 0.45 * std::abs(1.0 - r));
    u0 = std::max(u0, 1e-7);
    const double scale = std::max(1.0, std::abs(fx));

    auto run = [&](int n, double& tail_err) {
        const int na = std::max(16, n / 6);
        const int nr = std::max(12, n / 8);
        auto F = [&](double rho) {
            if (rho <= 0.0) return 0.0;
            double w0 = detail::angular_kernel(0, r, rho, d, kappa, na);
            double wl = ell == 0 ? w0 : detail::angular_kernel(ell, r, rho, d, kappa, na);
            return std::pow(rho, d - 1) *
                   (fx * w0 - f_radial(rho) * std::pow(rho, ell) * wl);
        };
        auto paired = [&](double u) { return F(r + u) + F(r - u); };

        // Singular window [0, u0]: dyadic panels toward the singularity plus
        // an analytic two-term patch c1 u^{1-2s} + c2 below the last level.
        double near = 0.0, hi = u0;
        const int levels = 15;
        for (int lev = 0; lev < levels; ++lev) {
            double lo = 0.5 * hi;
            near += detail::gl_integrate(paired, lo, hi, nr);
            hi = lo;
        }
        const double u_min = hi;
        double ua = 0.5 * u_min, ub = 0.25 * u_min;
        double pa = paired(ua), pb = paired(ub);
        double wa = std::pow(ua, 1.0 - 2.0 * s), wb = std::pow(ub, 1.0 - 2.0 * s);
        double patch, patch_scale;
        if (std::abs(wa - wb) > 1e-6 * (std::abs(wa) + std::abs(wb))) {
            double c1 = (pa - pb) / (wa - wb);
            double c2 = pa - c1 * wa;
            patch = c1 * std::pow(u_min, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) + c2 * u_min;
            patch_scale = std::abs(c1) * std::pow(u_min, 2.0 - 2.0 * s) + std::abs(c2) * u_min;
        } else {
            patch = pa * u_min;
            patch_scale = std::abs(patch);
        }
        tail_err += 4.0 * patch_scale * (u_min / u0) * (u_min / u0);

        // Inside region [0, r - u0], graded into both ends of each segment
        // (the profile may lose smoothness at rho = 1).
        std::vector<double> in_bp{0.0};
        if (1.0 < r - u0) in_bp.push_back(1.0);
        in_bp.push_back(r - u0);
        double inner = 0.0;
        for (size_t i = 0; i + 1 < in_bp.size(); ++i)
            inner += detail::edge_graded(F, in_bp[i], in_bp[i + 1], nr, scale, tail_err);

        // Outside region [r + u0, far_cutoff], graded away from r, split at 1.
        std::vector<double> kinks;
        if (1.0 > r + u0) kinks.push_back(1.0 - r);
        auto F_shift = [&](double u) { return F(r + u); };
        double outer = detail::midfield_integrate(F_shift, u0, cfg.far_cutoff, kinks, nr,
                                                  scale, tail_err);
        double tail = detail::tail_integral(F, r + cfg.far_cutoff, std::min(nr, 32),
                                            scale, tail_err);
        return near + patch + inner + outer + tail;
    };

    double te1 = 0.0, te2 = 0.0;
    double v1 = run(cfg.gauss_nodes, te1);
    OracleResult res;
    const double rl = std::pow(r, ell);
    if (cfg.richardson) {
        double v2 = run(2 * cfg.gauss_nodes, te2);
        res.value = C * v2 / rl;
        res.err_est = (C * (std::abs(v2 - v1) + te2) + 1e-15 * scale) / rl;
    } else {
        res.value = C * v1 / rl;
        res.err_est = (C * te1 + 1e-15 * scale) / rl;
    }
    if (res.err_est > cfg.tol * std::max(1.0, std::abs(res.value)))
        throw QuadratureError("frac_lap_oracle_radial: error exceeds tolerance");
    return res;
}

} // namespace fraclap
