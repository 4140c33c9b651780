#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>

#include "conevol/errors.hpp"

namespace conevol {

using bigint = boost::multiprecision::cpp_int;

/// Exact binomial coefficient.
inline bigint binomial(long a, long b) {
    if (b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    bigint r = 1;
    for (long i = 1; i <= b; ++i) {
        r *= (a - b + i);
        r /= i;
    }
    return r;
}

/// log C(a, b), exact product evaluated in log space.
inline double log_binomial(long a, long b) {
    if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
    if (b > a - b) b = a - b;
    double s = 0.0;
    for (long i = 1; i <= b; ++i)
        s += std::log(static_cast<double>(a - b + i)) - std::log(static_cast<double>(i));
    return s;
}

/// dim P_{n,2d} = C(n + 2d - 1, 2d).
inline long dim_forms(int n, int d) {
    return binomial(n + 2L * d - 1, 2L * d).convert_to<long>();
}

/// dim Bi_{2n,2d} = C(n + 2d - 3, 2d - 2) * C(n + 1, 2).
inline long dim_bi(int n, int d) {
    if (n < 1 || d < 1) throw DomainError("dim_bi: need n, d >= 1");
    return (binomial(n + 2L * d - 3, 2L * d - 2) * binomial(n + 1L, 2)).convert_to<long>();
}

/// dim U_k = C(n + 2k - 1, 2k) * C(n + (2d-2)k - 1, (2d-2)k); the span of the
/// k-th tensor powers of the reproducing kernel lives here.
inline bigint dim_Uk(int n, int d, int k) {
    if (k < 1) throw DomainError("dim_Uk: need k >= 1");
    return binomial(n + 2L * k - 1, 2L * k) *
           binomial(n + (2L * d - 2) * k - 1, (2L * d - 2) * k);
}

/// Binary entropy in nats, with the 0 log(1/0) = 0 convention.
inline double entropy(double x) {
    if (x < 0.0 || x > 1.0) throw DomainError("entropy: argument outside [0, 1]");
    double s = 0.0;
    if (x > 0.0) s += x * std::log(1.0 / x);
    if (x < 1.0) s += (1.0 - x) * std::log(1.0 / (1.0 - x));
    return s;
}

/// exp(a H(b/a)), an upper bound on C(a, b).
inline double binom_entropy_bound(long a, long b) {
    if (a < 0 || b < 0 || b > a) throw DomainError("binom_entropy_bound: need 0 <= b <= a");
    if (a == 0) return 1.0;
    return std::exp(a * entropy(static_cast<double>(b) / static_cast<double>(a)));
}

/// Smallest admissible k for the L^2k ~ L^inf comparison: ceil(n ln(2d+1)).
inline int choose_k(int n, int d) {
    if (n < 1 || d < 1) throw DomainError("choose_k: need n, d >= 1");
    return static_cast<int>(std::ceil(n * std::log(2.0 * d + 1.0)));
}

/// C(n + 2kd - 1, 2kd)^{1/2k}, the numeric alpha check, in log space.
inline double alpha_numeric(int n, int d, int k) {
    return std::exp(log_binomial(n + 2L * k * d - 1, 2L * k * d) / (2.0 * k));
}

/// Volume lower bound of the orbitope-dual section:
/// alpha_k^{-1} sqrt(d_w / (2k <v,v>)).
inline double theorem1_bound(long d_w, int k, double alpha_k, double v_norm_sq) {
    if (d_w <= 0 || k <= 0 || alpha_k <= 0.0 || v_norm_sq <= 0.0)
        throw DomainError("theorem1_bound: all arguments must be positive");
    return std::sqrt(static_cast<double>(d_w) / (2.0 * k * v_norm_sq)) / alpha_k;
}

/// Volume lower bound for the convex-form section:
/// (2d / (9e^2 sqrt(2n ln(2d+1)))) sqrt(D_M / D_bi).
inline double theorem2_bound(int n, int d) {
    if (n < 2 || d < 1) throw DomainError("theorem2_bound: need n >= 2, d >= 1");
    double dm = static_cast<double>(dim_forms(n, d) - 1);
    double dbi = static_cast<double>(dim_bi(n, d));
    return 2.0 * d / (9.0 * std::exp(2.0) * std::sqrt(2.0 * n * std::log(2.0 * d + 1.0))) *
           std::sqrt(dm / dbi);
}

/// Same bound with <L_{x,y}, L_{x,y}> = dim M_bi = D_bi - 1 in place of D_bi;
/// slightly larger, reported alongside the primary form of the bound.
inline double theorem2_bound_mbi(int n, int d) {
    if (n < 2 || d < 1) throw DomainError("theorem2_bound_mbi: need n >= 2, d >= 1");
    double dm = static_cast<double>(dim_forms(n, d) - 1);
    double mbi = static_cast<double>(dim_bi(n, d) - 1);
    return 2.0 * d / (9.0 * std::exp(2.0) * std::sqrt(2.0 * n * std::log(2.0 * d + 1.0))) *
           std::sqrt(dm / mbi);
}

/// Hessian-to-L2 norm comparison constant 12 d^2 (4d + n)^2 / (n (n + 2)).
inline double metric_ratio(int n, int d) {
    if (n < 1 || d < 1) throw DomainError("metric_ratio: need n, d >= 1");
    double nn = n;
    return 12.0 * d * d * (4.0 * d + nn) * (4.0 * d + nn) / (nn * (nn + 2.0));
}

/// Every reported constant for one (n, d).
struct BoundReport {
    int n = 0;
    int d = 0;
    long dim_P = 0;     // dim P_{n,2d}
    long D_M = 0;       // dim of the zero-mean hyperplane
    long D_bi = 0;      // dim Bi_{2n,2d}
    long dim_M_bi = 0;  // D_bi - 1 = <L_{x,y}, L_{x,y}>
    int k = 0;
    double alpha_k = 0.0;            // policy value 9e^2
    double alpha_numeric = 0.0;      // C(n+2kd-1, 2kd)^{1/2k}
    double theorem1_bound = 0.0;     // raw X-section bound, k and dim M_bi
    double theorem2_bound = 0.0;     // primary form, with D_bi in the denominator
    double theorem2_bound_mbi = 0.0; // variant with dim M_bi in the denominator
    double metric_ratio = 0.0;
    double reference_exponent_pos = -0.5;
    double reference_exponent_sq = 0.0;
};

inline BoundReport build_report(int n, int d) {
    if (n < 2 || d < 1) throw DomainError("build_report: need n >= 2, d >= 1");
    BoundReport r;
    r.n = n;
    r.d = d;
    r.dim_P = dim_forms(n, d);
    r.D_M = r.dim_P - 1;
    r.D_bi = dim_bi(n, d);
    r.dim_M_bi = r.D_bi - 1;
    r.k = choose_k(n, d);
    r.alpha_k = 9.0 * std::exp(2.0);
    r.alpha_numeric = alpha_numeric(n, d, r.k);
    r.theorem1_bound = theorem1_bound(r.D_M, r.k, r.alpha_k, static_cast<double>(r.dim_M_bi));
    r.theorem2_bound = conevol::theorem2_bound(n, d);
    r.theorem2_bound_mbi = conevol::theorem2_bound_mbi(n, d);
    r.metric_ratio = conevol::metric_ratio(n, d);
    r.reference_exponent_pos = -0.5;
    r.reference_exponent_sq = -(static_cast<double>(d) - 0.5);
    return r;
}

} // namespace conevol
