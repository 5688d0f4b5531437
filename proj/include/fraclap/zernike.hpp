#pragma once

// Weighted generalized-Zernike expansion on the unit disk and the spectral
// solver for (-Delta)^s u = f built from the explicit Riesz images of the
// basis, plus the 1D interval analogue.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "bases.hpp"
#include "errors.hpp"
#include "operators.hpp"
#include "quadrature.hpp"

namespace fraclap {

struct ZernikeIndex {
    int n = 0;    // total degree
    int ell = 0;  // Fourier mode, same parity as n, ell <= n
    int j = 0;    // 0: sine, 1: cosine; forced 0 when ell = 0

    bool operator<(const ZernikeIndex& o) const {
        return std::tie(n, ell, j) < std::tie(o.n, o.ell, o.j);
    }
    bool operator==(const ZernikeIndex& o) const {
        return n == o.n && ell == o.ell && j == o.j;
    }
};

inline void check_zernike_index(const ZernikeIndex& idx) {
    if (idx.n < 0 || idx.ell < 0 || idx.ell > idx.n)
        throw IndexError("ZernikeIndex: need 0 <= ell <= n");
    if ((idx.n - idx.ell) % 2 != 0)
        throw IndexError("ZernikeIndex: ell and n must have the same parity");
    if (idx.j != 0 && idx.j != 1) throw IndexError("ZernikeIndex: j must be 0 or 1");
    if (idx.ell == 0 && idx.j != 0)
        throw IndexError("ZernikeIndex: j = 0 is forced when ell = 0");
}

inline double zernike_eval(const ZernikeIndex& idx, double b, double x, double y) {
    check_zernike_index(idx);
    double r2 = x * x + y * y;
    return solid_harmonic_2d(idx.ell, idx.j, x, y) *
           jacobi_eval((idx.n - idx.ell) / 2, b, idx.ell, 2.0 * r2 - 1.0);
}

inline std::vector<ZernikeIndex> zernike_indices(int N) {
    std::vector<ZernikeIndex> out;
    for (int n = 0; n <= N; ++n)
        for (int ell = n % 2; ell <= n; ell += 2)
            for (int j = 0; j <= (ell > 0 ? 1 : 0); ++j)
                out.push_back({n, ell, j});
    return out;
}

struct DiskExpansion {
    double b_param = 0.0;
    int N = 0;
    std::map<ZernikeIndex, double> coeffs;
};

// L2 norm squared of P_k^{(alpha,beta)} under the Jacobi weight on [-1,1].
inline double jacobi_norm(int k, double alpha, double beta) {
    return std::pow(2.0, alpha + beta + 1.0) / (2.0 * k + alpha + beta + 1.0) *
           gamma(k + alpha + 1.0) * gamma(k + beta + 1.0) /
           (gamma(k + alpha + beta + 1.0) * std::tgamma(k + 1.0));
}

// Coefficients of f against the weighted basis (1-r^2)^b Z^{(b)}_{n,ell,j}:
// Gauss-Jacobi in t = 2r^2-1 with exponents (b, ell) per Fourier mode,
// trapezoid in theta (exact for the modes present).
inline DiskExpansion disk_analyze(const std::function<double(double, double)>& f,
                                  double b, int N) {
    if (N < 0) throw ParamError("disk_analyze: N must be non-negative");
    if (b <= -1.0) throw ParamError("disk_analyze: weight exponent must exceed -1");
    DiskExpansion ex;
    ex.b_param = b;
    ex.N = N;
    for (const ZernikeIndex& idx : zernike_indices(N)) ex.coeffs[idx] = 0.0;

    const int Mr = N + 20;
    const int Mt = 4 * N + 16;
    std::vector<double> theta(Mt), ct(Mt), st(Mt);
    for (int m = 0; m < Mt; ++m) {
        theta[m] = 2.0 * M_PI * m / Mt;
        ct[m] = std::cos(theta[m]);
        st[m] = std::sin(theta[m]);
    }

    std::mutex write_mtx;
    detail::parallel_for(N + 1, [&](int ell) {
        const QuadRule& gj = detail::cached_jacobi_rule(Mr, b, static_cast<double>(ell));
        std::vector<double> rnode(Mr);
        std::vector<std::vector<double>> samples(Mr, std::vector<double>(Mt));
        for (int i = 0; i < Mr; ++i) {
            double t = gj.x[i];
            double r = std::sqrt(0.5 * (1.0 + t));
            rnode[i] = r;
            double wgt = std::pow(1.0 - r * r, b);
            for (int m = 0; m < Mt; ++m) {
                double v = f(r * ct[m], r * st[m]) / wgt;
                if (!std::isfinite(v))
                    throw QuadratureError("disk_analyze: non-finite sample");
                samples[i][m] = v;
            }
        }
        const double ang_norm = ell == 0 ? 2.0 * M_PI : M_PI;
        for (int j = 0; j <= (ell > 0 ? 1 : 0); ++j) {
            // Angular projection first: the projected profile is exactly
            // r^ell times a polynomial in t, so dividing by r^ell before the
            // radial Gauss-Jacobi sum leaves a smooth integrand (the rule's
            // weight mass suppresses the roundoff amplification at small r).
            std::vector<double> phi(Mr);
            for (int i = 0; i < Mr; ++i) {
                double acc = 0.0;
                for (int m = 0; m < Mt; ++m) {
                    double trig = ell == 0
                                      ? 1.0
                                      : std::sin(ell * theta[m] + 0.5 * M_PI * j);
                    acc += trig * samples[i][m];
                }
                phi[i] = acc * (2.0 * M_PI / Mt) / std::pow(rnode[i], ell);
            }
            for (int n = ell; n <= N; n += 2) {
                int k = (n - ell) / 2;
                double acc = 0.0;
                for (int i = 0; i < Mr; ++i)
                    acc += gj.w[i] * phi[i] * jacobi_eval(k, b, ell, gj.x[i]);
                double coef = acc / (ang_norm * jacobi_norm(k, b, ell));
                std::lock_guard<std::mutex> lock(write_mtx);
                ex.coeffs[{n, ell, j}] = coef;
            }
        }
    });
    return ex;
}

// Pointwise synthesis of the weighted expansion (zero outside the disk).
inline double disk_synthesize(const DiskExpansion& ex, double x, double y) {
    double r2 = x * x + y * y;
    if (r2 >= 1.0) return 0.0;
    double sum = 0.0;
    for (const auto& [idx, c] : ex.coeffs) {
        if (c == 0.0) continue;
        sum += c * zernike_eval(idx, ex.b_param, x, y);
    }
    return std::pow(1.0 - r2, ex.b_param) * sum;
}

inline std::string disk_expansion_to_json(const DiskExpansion& ex) {
    char buf[96];
    std::string out = "{";
    std::snprintf(buf, sizeof(buf), "\"b\": %.17g, \"N\": %d, \"coeffs\": [",
                  ex.b_param, ex.N);
    out += buf;
    bool first = true;
    for (const auto& [idx, c] : ex.coeffs) {
        std::snprintf(buf, sizeof(buf),
                      "%s{\"n\": %d, \"l\": %d, \"j\": %d, \"value\": %.17g}",
                      first ? "" : ", ", idx.n, idx.ell, idx.j, c);
        out += buf;
        first = false;
    }
    out += "]}";
    return out;
}

namespace detail {

// Keep evaluation points off the exact support edge where the piecewise
// formulas switch branches.
inline double nudge_off_unit(double r) {
    if (std::abs(r - 1.0) < 1e-12) return r < 1.0 ? 1.0 - 1e-12 : 1.0 + 1e-12;
    return r;
}

} // namespace detail

// Whole-plane solution of (-Delta)^sigma u = f, assembled from the explicit
// Riesz images of the weighted Zernike modes; immutable after construction.
struct DiskSolution {
    DiskExpansion expansion;
    double sigma = 1.0 / 3.0;

    double mode_radial(const ZernikeIndex& idx, double r) const {
        BasisFunction g;
        g.row = RowId::HD_Ass;
        g.n = (idx.n - idx.ell) / 2;
        g.d = 2;
        g.ell = idx.ell;
        g.j = idx.j;
        return frac_apply_radial(g, FracOrder{-sigma}, detail::nudge_off_unit(r)).value;
    }

    double operator()(double x, double y) const {
        double r = std::hypot(x, y);
        double sum = 0.0;
        for (const auto& [idx, c] : expansion.coeffs) {
            if (std::abs(c) < 1e-15) continue;
            sum += c * solid_harmonic_2d(idx.ell, idx.j, x, y) * mode_radial(idx, r);
        }
        return sum;
    }
};

inline DiskSolution solve_fractional_disk(const std::function<double(double, double)>& f,
                                          double s, int N) {
    if (!(s > 0.0 && s < 0.5))
        throw ParamError("solve_fractional_disk: s must be in (0,1/2)");
    DiskSolution sol;
    sol.sigma = s;
    sol.expansion = disk_analyze(f, -s, N);
    return sol;
}

// 1D analogue on (-1,1): expansion in (1-x^2)^{-s} P_n^{(-s,-s)} whose Riesz
// potentials are the explicit eigenrelation images.
struct IntervalSolution {
    double sigma = 0.25;
    int N = 0;
    std::vector<double> coeffs;

    double operator()(double x) const {
        double xe = x;
        if (std::abs(std::abs(x) - 1.0) < 1e-12)
            xe = (std::abs(x) < 1.0 ? 1.0 - 1e-12 : 1.0 + 1e-12) * (x < 0 ? -1.0 : 1.0);
        double sum = 0.0;
        for (int n = 0; n < static_cast<int>(coeffs.size()); ++n) {
            if (std::abs(coeffs[n]) < 1e-15) continue;
            BasisFunction g;
            g.row = RowId::T1R1;
            g.n = n;
            g.a = -sigma;
            sum += coeffs[n] * riesz_apply(g, sigma, EvalPoint::from1d(xe)).value;
        }
        return sum;
    }
};

inline IntervalSolution solve_fractional_interval(const std::function<double(double)>& f,
                                                  double s, int N) {
    if (!(s > 0.0 && s < 0.5))
        throw ParamError("solve_fractional_interval: s must be in (0,1/2)");
    if (N < 0) throw ParamError("solve_fractional_interval: N must be non-negative");
    IntervalSolution sol;
    sol.sigma = s;
    sol.N = N;
    sol.coeffs.assign(N + 1, 0.0);
    const int M = N + 20;
    const QuadRule& gj = detail::cached_jacobi_rule(M, -s, -s);
    std::vector<double> p(M);
    for (int i = 0; i < M; ++i) {
        double x = gj.x[i];
        double v = f(x) * std::pow(1.0 - x * x, s);
        if (!std::isfinite(v))
            throw QuadratureError("solve_fractional_interval: non-finite sample");
        p[i] = v;
    }
    for (int n = 0; n <= N; ++n) {
        double acc = 0.0;
        for (int i = 0; i < M; ++i)
            acc += gj.w[i] * p[i] * jacobi_eval(n, -s, -s, gj.x[i]);
        sol.coeffs[n] = acc / jacobi_norm(n, -s, -s);
    }
    return sol;
}

} // namespace fraclap
