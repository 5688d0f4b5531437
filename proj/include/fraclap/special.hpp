#pragma once

// Gamma-family primitives and generalized hypergeometric series.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace fraclap {

inline constexpr double pole_tol = 1e-13;

inline bool is_nonpositive_integer(double z, double tol = pole_tol) {
    if (z > 0.5) return false;
    double r = std::round(z);
    return std::abs(z - r) <= tol;
}

// sin(pi z), cos(pi z) with range reduction on z itself; exact zeros at
// integer (sinpi) and half-integer (cospi) arguments.
inline double sinpi(double z) {
    double r = std::remainder(z, 2.0);  // r in [-1, 1]
    double a = std::abs(r);
    int sign = r < 0 ? -1 : 1;
    if (a > 0.5) a = 1.0 - a;           // reduce to [0, 1/2]
    if (a == 0.0) return 0.0;
    return sign * std::sin(M_PI * a);
}

inline double cospi(double z) {
    double r = std::abs(std::remainder(z, 2.0));  // r in [0, 1]
    if (r == 0.5) return 0.0;
    if (r > 0.5) return -std::cos(M_PI * (1.0 - r));
    return std::cos(M_PI * r);
}

namespace detail {
// Lanczos approximation, g = 607/128, 15 coefficients.
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
};

// log Gamma(z) for z >= 0.5 via Lanczos.
inline double log_gamma_pos(double z) {
    double zm1 = z - 1.0;
    double sum = lanczos_c[0];
    for (int k = 1; k < 15; ++k) sum += lanczos_c[k] / (zm1 + k);
    double t = zm1 + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (zm1 + 0.5) * std::log(t) - t + std::log(sum);
}
} // namespace detail

// log|Gamma(z)| and the sign of Gamma(z).
struct LogGamma {
    double log_abs;
    int sign;
};

inline LogGamma log_gamma_signed(double z) {
    if (is_nonpositive_integer(z))
        throw PoleError("log_gamma_signed: pole at z = " + std::to_string(z));
    if (z >= 0.5) return {detail::log_gamma_pos(z), 1};
    // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
    double sp = sinpi(z);
    double lg = std::log(M_PI) - std::log(std::abs(sp)) - detail::log_gamma_pos(1.0 - z);
    return {lg, sp >= 0 ? 1 : -1};
}

inline double gamma(double z) {
    if (is_nonpositive_integer(z))
        throw PoleError("gamma: pole at z = " + std::to_string(z));
    LogGamma lg = log_gamma_signed(z);
    return lg.sign * std::exp(lg.log_abs);
}

// 1/Gamma(z); exactly 0 at the poles of Gamma.
inline double rgamma(double z) {
    if (is_nonpositive_integer(z)) return 0.0;
    LogGamma lg = log_gamma_signed(z);
    return lg.sign * std::exp(-lg.log_abs);
}

// Rising factorial (z)_k.
inline double pochhammer(double z, int k) {
    if (k < 0) throw ParamError("pochhammer: negative k");
    if (k <= 64) {
        double p = 1.0;
        for (int r = 0; r < k; ++r) p *= z + r;
        return p;
    }
    if (is_nonpositive_integer(z) || is_nonpositive_integer(z + k - 1)) {
        // A zero factor appears somewhere in the product for integer z <= 0.
        if (is_nonpositive_integer(z) && z + k - 1 >= -pole_tol) return 0.0;
        double p = 1.0;
        for (int r = 0; r < k; ++r) p *= z + r;
        return p;
    }
    LogGamma num = log_gamma_signed(z + k);
    LogGamma den = log_gamma_signed(z);
    return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

// Gamma(u)/Gamma(v) evaluated safely when u - v is (near-)integer and both
// arguments may sit at poles; the pole residues cancel exactly because the
// offset is an integer constant.
inline double gamma_ratio(double u, double v) {
    double k = std::round(u - v);
    if (std::abs(u - v - k) < 1e-9 && std::abs(k) < 1e6) {
        if (k >= 0) return pochhammer(v, static_cast<int>(k));
        double p = pochhammer(u, static_cast<int>(-k));
        if (p == 0.0) throw PoleError("gamma_ratio: zero denominator pochhammer");
        return 1.0 / p;
    }
    if (is_nonpositive_integer(u)) throw PoleError("gamma_ratio: numerator pole");
    if (is_nonpositive_integer(v)) return 0.0;
    LogGamma nu = log_gamma_signed(u);
    LogGamma de = log_gamma_signed(v);
    return nu.sign * de.sign * std::exp(nu.log_abs - de.log_abs);
}

struct PFQParams {
    std::vector<double> upper;
    std::vector<double> lower;
    double argument = 0.0;
};

struct PFQOptions {
    double tol = 1e-14;
    int max_terms = 10000;
};

struct PFQResult {
    double value;
    int terms;
};

// Generalized hypergeometric series by term-ratio recurrence.
inline PFQResult pfq_full(const PFQParams& p, const PFQOptions& opt = {}) {
    const auto& A = p.upper;
    const auto& B = p.lower;
    const double z = p.argument;

    // Termination index if some upper parameter is a non-positive integer.
    long terminate_at = -1;
    for (double a : A) {
        if (is_nonpositive_integer(a)) {
            long k = static_cast<long>(std::llround(-a));
            if (terminate_at < 0 || k < terminate_at) terminate_at = k;
        }
    }
    // Lower-parameter poles must not be reached before termination.
    for (double b : B) {
        if (is_nonpositive_integer(b)) {
            long k = static_cast<long>(std::llround(-b));
            if (terminate_at < 0 || k < terminate_at)
                throw ParamError("pfq: lower parameter is a non-positive integer");
        }
    }
    if (A.size() == B.size() + 1 && std::abs(z) >= 1.0 && terminate_at < 0)
        throw DivergenceError("pfq: p = q+1 requires |z| < 1");

    double term = 1.0, sum = 1.0;
    int small_run = 0;
    for (int k = 0; k < opt.max_terms; ++k) {
        if (terminate_at >= 0 && k >= terminate_at) return {sum, k};
        double ratio = z;
        for (double a : A) ratio *= (a + k);
        for (double b : B) ratio /= (b + k);
        ratio /= (k + 1.0);
        term *= ratio;
        sum += term;
        if (std::abs(term) < opt.tol * std::max(1.0, std::abs(sum))) {
            if (++small_run >= 3) return {sum, k + 1};
        } else {
            small_run = 0;
        }
        if (!std::isfinite(sum)) throw NonConvergenceError("pfq: non-finite partial sum");
    }
    throw NonConvergenceError("pfq: max_terms exceeded");
}

inline double pfq(const std::vector<double>& upper, const std::vector<double>& lower,
                  double z, double tol = 1e-14, int max_terms = 10000) {
    return pfq_full({upper, lower, z}, {tol, max_terms}).value;
}

} // namespace fraclap
