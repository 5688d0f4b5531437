#pragma once

// Classical orthogonal polynomials (recurrence evaluation), Bessel functions,
// and the weighted catalog basis functions they combine into.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace fraclap {

inline double jacobi_eval(int n, double a, double b, double x) {
    if (a <= -1.0 || b <= -1.0) throw ParamError("jacobi_eval: requires a, b > -1");
    if (n < 0) throw ParamError("jacobi_eval: negative degree");
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int k = 2; k <= n; ++k) {
        double c = 2.0 * k + a + b;
        double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
        double a2 = (c - 1.0) * (a * a - b * b);
        double a3 = (c - 1.0) * c * (c - 2.0);
        double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

inline double gegenbauer_eval(int n, double lambda, double x) {
    if (lambda <= -0.5) throw ParamError("gegenbauer_eval: requires lambda > -1/2");
    double fac = pochhammer(2.0 * lambda, n) / pochhammer(lambda + 0.5, n);
    return fac * jacobi_eval(n, lambda - 0.5, lambda - 0.5, x);
}

inline double chebyshevT_eval(int n, double x) {
    // P_n^(±1/2) normalization: T_n = P_n^{(-1/2,-1/2)} / P_n^{(-1/2,-1/2)}(1)
    double p1 = pochhammer(0.5, n) / std::tgamma(n + 1.0);
    return jacobi_eval(n, -0.5, -0.5, x) / p1;
}

inline double chebyshevU_eval(int n, double x) {
    double p1 = pochhammer(1.5, n) / std::tgamma(n + 1.0);
    return (n + 1.0) * jacobi_eval(n, 0.5, 0.5, x) / p1;
}

inline double laguerre_eval(int n, double alpha, double x) {
    // Finite sum: L_n^(alpha)(x) = sum_k (-1)^k (alpha+k+1)_{n-k} x^k / (k! (n-k)!)
    double sum = 0.0, xk = 1.0;
    for (int k = 0; k <= n; ++k) {
        double c = pochhammer(alpha + k + 1.0, n - k) /
                   (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
        sum += (k % 2 ? -c : c) * xk;
        xk *= x;
    }
    return sum;
}

inline double hermite_eval(int n, double x) {
    if (n == 0) return 1.0;
    double h0 = 1.0, h1 = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

namespace detail {

// Hankel asymptotic expansion for J and Y, x large.
inline void bessel_asymptotic(double nu, double x, double& J, double& Y) {
    double mu = 4.0 * nu * nu;
    double P = 1.0, Q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 40; ++k) {
        double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= num / (k * 8.0 * x);
        if (std::abs(term) > prev) break;  // divergence onset
        prev = std::abs(term);
        int phase = (k % 4);
        if (phase == 1) Q += term;
        else if (phase == 2) P -= term;
        else if (phase == 3) Q -= term;
        else P += term;
        if (std::abs(term) < 1e-17) break;
    }
    double omega = x - 0.5 * nu * M_PI - 0.25 * M_PI;
    double c = std::cos(omega), s = std::sin(omega);
    double amp = std::sqrt(2.0 / (M_PI * x));
    J = amp * (P * c - Q * s);
    Y = amp * (P * s + Q * c);
}

inline double besselJ_series(double nu, double x) {
    // (x/2)^nu / Gamma(nu+1) * 0F1(; nu+1; -x^2/4), assembled with rgamma so
    // negative-integer orders fall through to the reflection in besselJ_eval.
    double z = -0.25 * x * x;
    double term = 1.0, sum = 0.0;
    double rg = rgamma(nu + 1.0);
    // Series for 0F1 with lower parameter nu+1 shifted at each step.
    // sum_k z^k / (k! (nu+1)_k) * rg
    double coeff = rg;
    for (int k = 0; k < 400; ++k) {
        sum += coeff * term;
        term *= z / (k + 1.0);
        coeff = rgamma(nu + k + 2.0);
        if (std::abs(term * coeff) < 1e-18 * std::max(1.0, std::abs(sum)) && k > 2) break;
    }
    return std::pow(0.5 * x, nu) * sum;
}

} // namespace detail

inline double besselJ_eval(double nu, double x) {
    double ax = std::abs(x);
    if (x < 0) {
        // J_nu(-x) defined for integer nu only in real terms; catalog rows use |x|.
        double r = std::round(nu);
        if (std::abs(nu - r) < 1e-12) {
            double v = besselJ_eval(nu, ax);
            return (static_cast<long long>(r) % 2) ? -v : v;
        }
        throw DomainError("besselJ_eval: negative argument with non-integer order");
    }
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        throw DomainError("besselJ_eval: x = 0 with negative order");
    }
    double r = std::round(nu);
    if (nu < 0 && std::abs(nu - r) < 1e-12) {
        double v = besselJ_eval(-nu, x);
        return (static_cast<long long>(std::llround(-r)) % 2) ? -v : v;
    }
    if (ax > 14.0) {
        double J, Y;
        detail::bessel_asymptotic(nu, ax, J, Y);
        return J;
    }
    return detail::besselJ_series(nu, ax);
}

inline double besselY_eval(double nu, double x) {
    if (x <= 0.0) throw DomainError("besselY_eval: requires x > 0");
    if (x > 14.0) {
        double J, Y;
        detail::bessel_asymptotic(nu, x, J, Y);
        return Y;
    }
    double r = std::round(nu);
    if (std::abs(nu - r) < 1e-9) {
        const double delta = 1e-6;
        return 0.5 * (besselY_eval(r + delta, x) + besselY_eval(r - delta, x));
    }
    double sp = sinpi(nu);
    return (besselJ_eval(nu, x) * cospi(nu) - besselJ_eval(-nu, x)) / sp;
}

// Coefficients c_k with P_n^{(a,b)} = sum_k c_k P_k^{(alpha,beta)}.
inline std::vector<double> jacobi_connection(int n, double a, double b, double alpha,
                                             double beta) {
    if (a <= -1 || b <= -1 || alpha <= -1 || beta <= -1)
        throw ParamError("jacobi_connection: parameters must exceed -1");
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n; ++k) {
        double pre = pochhammer(a + k + 1.0, n - k) * pochhammer(a + b + n + 1.0, k) /
                     std::tgamma(n - k + 1.0) *
                     gamma_ratio(k + alpha + beta + 1.0, 2.0 * k + alpha + beta + 1.0);
        double f = pfq({static_cast<double>(k - n), a + b + k + n + 1.0, k + alpha + 1.0},
                       {a + k + 1.0, 2.0 * k + alpha + beta + 2.0}, 1.0);
        c[k] = pre * f;
    }
    return c;
}

// (z)_+^p profile: z^p for z > 0, exactly 0 otherwise (any real p).
inline double plus_pow(double z, double p) {
    if (z <= 0.0) return 0.0;
    return std::pow(z, p);
}

// ---------------------------------------------------------------------------
// Catalog basis functions
// ---------------------------------------------------------------------------

enum class RowId {
    T1R1, T1R2, T1R3, T1R4, T1R5, T1R6, T1R7,
    T1R8, T1R9, T1R10, T1R11, T1R12, T1R13, T1R14,
    HD_A, HD_B, HD_C, HD_D,
    HD_As, HD_Ass, HD_Asss,   // constrained members of the HD_A family
};

inline std::string row_name(RowId r) {
    switch (r) {
        case RowId::T1R1: return "T1R1";
        case RowId::T1R2: return "T1R2";
        case RowId::T1R3: return "T1R3";
        case RowId::T1R4: return "T1R4";
        case RowId::T1R5: return "T1R5";
        case RowId::T1R6: return "T1R6";
        case RowId::T1R7: return "T1R7";
        case RowId::T1R8: return "T1R8";
        case RowId::T1R9: return "T1R9";
        case RowId::T1R10: return "T1R10";
        case RowId::T1R11: return "T1R11";
        case RowId::T1R12: return "T1R12";
        case RowId::T1R13: return "T1R13";
        case RowId::T1R14: return "T1R14";
        case RowId::HD_A: return "HD_A";
        case RowId::HD_B: return "HD_B";
        case RowId::HD_C: return "HD_C";
        case RowId::HD_D: return "HD_D";
        case RowId::HD_As: return "HD_As";
        case RowId::HD_Ass: return "HD_Ass";
        case RowId::HD_Asss: return "HD_Asss";
    }
    return "?";
}

inline bool row_from_name(const std::string& s, RowId& out) {
    static const std::pair<const char*, RowId> table[] = {
        {"T1R1", RowId::T1R1},   {"T1R2", RowId::T1R2},   {"T1R3", RowId::T1R3},
        {"T1R4", RowId::T1R4},   {"T1R5", RowId::T1R5},   {"T1R6", RowId::T1R6},
        {"T1R7", RowId::T1R7},   {"T1R8", RowId::T1R8},   {"T1R9", RowId::T1R9},
        {"T1R10", RowId::T1R10}, {"T1R11", RowId::T1R11}, {"T1R12", RowId::T1R12},
        {"T1R13", RowId::T1R13}, {"T1R14", RowId::T1R14}, {"HD_A", RowId::HD_A},
        {"HD_B", RowId::HD_B},   {"HD_C", RowId::HD_C},   {"HD_D", RowId::HD_D},
        {"HD_As", RowId::HD_As}, {"HD_Ass", RowId::HD_Ass},
        {"HD_Asss", RowId::HD_Asss},
    };
    for (auto& [name, id] : table)
        if (s == name) { out = id; return true; }
    return false;
}

struct BasisFunction {
    RowId row = RowId::T1R1;
    int n = 0;           // polynomial degree (rows 1-7, 5, A-D)
    double a = 0.0;      // Jacobi a (rows 1, 5, A, C, D) or phase (rows 9/10, radians)
    double b = 0.0;      // Jacobi b (rows 5, A, C, D)
    double alpha = 0.0;  // Laguerre parameter (rows 7, B)
    double lambda = 0.0; // Gegenbauer parameter (row 2)
    double nu = 0.0;     // Bessel order (rows 8-14)
    double mu = 0.0;     // second Bessel order (row 11)
    int d = 1;           // ambient dimension
    int ell = 0;         // solid-harmonic degree
    int j = 0;           // 2D solid-harmonic sign bit (0: sin, 1: cos)
};

struct EvalPoint {
    std::vector<double> coords;
    double r() const {
        double s = 0.0;
        for (double c : coords) s += c * c;
        return std::sqrt(s);
    }
    static EvalPoint from1d(double x) { return {{x}}; }
};

// Solid harmonic V_ell in 2D; in 1D, x^(n mod 2) parity factor handled by rows.
inline double solid_harmonic_2d(int ell, int j, double x, double y) {
    if (ell == 0) return 1.0;
    double theta = std::atan2(y, x);
    double r = std::hypot(x, y);
    return std::pow(r, ell) * std::sin(ell * theta + j * 0.5 * M_PI);
}

// Radial profile of the higher-dimensional catalog rows: the full function is
// V_ell(x) * hd_radial_profile(row, r).
// Weight exponent of the second Jacobi parameter forced by the ambient
// dimension and harmonic degree for the constrained HD_A members.
inline double hd_forced_b(int d, int ell) { return 0.5 * (d + 2.0 * ell - 2.0); }

inline double hd_radial_profile(const BasisFunction& f, double r) {
    double t = 2.0 * r * r - 1.0;
    switch (f.row) {
        case RowId::HD_A:
            return plus_pow(1.0 - r * r, f.a) * jacobi_eval(f.n, f.a, f.b, t);
        case RowId::HD_As:
        case RowId::HD_Ass:
            return plus_pow(1.0 - r * r, f.a) *
                   jacobi_eval(f.n, f.a, hd_forced_b(f.d, f.ell), t);
        case RowId::HD_Asss:
            return r < 1.0 ? 1.0 : 0.0;
        case RowId::HD_B:
            return std::exp(-r * r) * laguerre_eval(f.n, f.alpha, r * r);
        case RowId::HD_C:
            return plus_pow(r * r - 1.0, f.a) * jacobi_eval(f.n, f.a, f.b, t);
        case RowId::HD_D:
            return r > 1.0 ? plus_pow(r * r - 1.0, f.a) *
                                 jacobi_eval(f.n, f.a, f.b, 2.0 / (r * r) - 1.0)
                           : 0.0;
        default:
            throw ParamError("hd_radial_profile: not a higher-dimensional row");
    }
}

inline double basis_eval(const BasisFunction& f, const EvalPoint& pt) {
    const double x = pt.coords.empty() ? 0.0 : pt.coords[0];
    const double r = pt.r();
    switch (f.row) {
        case RowId::T1R1:
            return plus_pow(1.0 - x * x, f.a) * jacobi_eval(f.n, f.a, f.a, x);
        case RowId::T1R2:
            return plus_pow(1.0 - x * x, f.lambda - 0.5) * gegenbauer_eval(f.n, f.lambda, x);
        case RowId::T1R3:
            return plus_pow(1.0 - x * x, -0.5) * chebyshevT_eval(f.n, x);
        case RowId::T1R4:
            return plus_pow(1.0 - x * x, 0.5) * chebyshevU_eval(f.n, x);
        case RowId::T1R5:
            return plus_pow(1.0 - x * x, f.a) * std::pow(x * x, f.b) *
                   jacobi_eval(f.n, f.a, f.b, 2.0 * x * x - 1.0);
        case RowId::T1R6:
            return std::exp(-x * x) * hermite_eval(f.n, x);
        case RowId::T1R7:
            return std::exp(-x * x) * laguerre_eval(f.n, f.alpha, x * x);
        case RowId::T1R8:
            return besselJ_eval(f.nu, 2.0 * std::abs(x));
        case RowId::T1R9:
            return std::cos(f.a + std::abs(x)) * besselJ_eval(f.nu, std::abs(x));
        case RowId::T1R10:
            return std::sin(f.a + std::abs(x)) * besselJ_eval(f.nu, std::abs(x));
        case RowId::T1R11:
            return besselJ_eval(f.mu, std::abs(x)) * besselJ_eval(f.nu, std::abs(x));
        case RowId::T1R12:
            return besselY_eval(f.nu, 2.0 * std::abs(x));
        case RowId::T1R13:
            return std::cos(std::abs(x)) * besselY_eval(f.nu, std::abs(x));
        case RowId::T1R14:
            return std::sin(std::abs(x)) * besselY_eval(f.nu, std::abs(x));
        case RowId::HD_A:
        case RowId::HD_B:
        case RowId::HD_C:
        case RowId::HD_D:
        case RowId::HD_As:
        case RowId::HD_Ass:
        case RowId::HD_Asss: {
            double ang = 1.0;
            if (f.d == 2 && pt.coords.size() >= 2)
                ang = solid_harmonic_2d(f.ell, f.j, pt.coords[0], pt.coords[1]);
            else if (f.ell > 0)
                ang = std::pow(r, f.ell);
            return ang * hd_radial_profile(f, r);
        }
    }
    throw ParamError("basis_eval: unknown row");
}

} // namespace fraclap
