#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace fraclap {

// Nodes and weights of an n-point rule on a reference interval.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

// Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts) that
// carries only the first component of each eigenvector, which is all
// Golub-Welsch needs.  d = diagonal, e = subdiagonal (e[0] unused on entry),
// z = first-row accumulator (initialised to (1,0,...,0)).
inline void tridiag_eigen_first_components(std::vector<double>& d,
                                           std::vector<double>& e,
                                           std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw NonConvergenceError("tridiag_eigen: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

// Gauss-Jacobi rule on [-1,1] for weight (1-t)^alpha (1+t)^beta, built by
// Golub-Welsch from the three-term recurrence coefficients.
inline QuadRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw ParamError("gauss_jacobi: n must be positive");
    if (alpha <= -1.0 || beta <= -1.0)
        throw ParamError("gauss_jacobi: weight exponents must exceed -1");
    std::vector<double> d(n), e(n, 0.0), z(n, 0.0);
    z[0] = 1.0;
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        d[k] = (k == 0 && ab + 2.0 == 0.0)
                   ? 0.0
                   : (den == 0.0 ? 0.0 : (beta - alpha) * (beta + alpha) / den);
        if (k == 0) d[k] = (ab + 2.0 == 0.0) ? 0.0 : (beta - alpha) / (ab + 2.0);
        if (k >= 1) {
            double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
            double dn2 = (2.0 * k + ab) * (2.0 * k + ab);
            double dnm = dn2 * (2.0 * k + ab + 1.0) * (2.0 * k + ab - 1.0);
            e[k] = std::sqrt(num / dnm);
        }
    }
    detail::tridiag_eigen_first_components(d, e, z);
    double mu0 = std::pow(2.0, ab + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) /
                 gamma(ab + 2.0);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = d[idx[i]];
        r.w[i] = mu0 * z[idx[i]] * z[idx[i]];
    }
    return r;
}

inline QuadRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

namespace detail {

// Process-wide cache; rules are expensive relative to node evaluation.
inline const QuadRule& cached_jacobi_rule(int n, double alpha, double beta) {
    static std::map<std::tuple<int, double, double>, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(n, alpha, beta);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(n, alpha, beta)).first;
    return it->second;
}

inline const QuadRule& cached_legendre_rule(int n) {
    return cached_jacobi_rule(n, 0.0, 0.0);
}

// Gauss-Legendre integral of g over [a, b].
template <typename F>
double gl_integrate(const F& g, double a, double b, int n) {
    const QuadRule& r = cached_legendre_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * g(mid + half * r.x[i]);
    return half * sum;
}

inline int env_thread_cap() {
    if (const char* env = std::getenv("FRACLAP_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Static-chunked parallel loop; falls back to serial for small ranges.
inline void parallel_for(int count, const std::function<void(int)>& body) {
    int threads = std::min(env_thread_cap(), count);
    if (threads <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr first_error = nullptr;
    std::mutex err_mtx;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < count; i += threads) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

} // namespace fraclap
