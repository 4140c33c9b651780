#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "conevol/biform.hpp"
#include "conevol/forms.hpp"

namespace conevol {

enum class MetricTag { L2, Hessian };

namespace detail {

using bigint = boost::multiprecision::cpp_int;

inline bigint double_factorial(int m) {
    // (-1)!! = 1 by convention
    bigint r = 1;
    for (int k = m; k >= 2; k -= 2) r *= k;
    return r;
}

} // namespace detail

/// Moment of the monomial x^alpha under the rotation-invariant probability
/// measure on the unit sphere: 0 if any exponent is odd, otherwise
/// prod_i (alpha_i - 1)!! / (n (n+2) ... (n + |alpha| - 2)).
/// Numerator and denominator are exact integers; division happens last.
inline double monomial_moment(int n, const ExponentVec& alpha) {
    if (static_cast<int>(alpha.size()) != n)
        throw DimensionMismatch("monomial_moment: exponent length != n");
    int total = 0;
    for (int e : alpha) {
        if (e < 0) throw DomainError("monomial_moment: negative exponent");
        if (e % 2 != 0) return 0.0;
        total += e;
    }
    if (total == 0) return 1.0;
    detail::bigint num = 1;
    for (int e : alpha) num *= detail::double_factorial(e - 1);
    detail::bigint den = 1;
    for (int j = 0; j < total / 2; ++j) den *= (n + 2 * j);
    return num.convert_to<double>() / den.convert_to<double>();
}

namespace detail {

// Moment lookups dominate the exact inner products; cache per thread.
inline double cached_moment(int n, const ExponentVec& alpha) {
    thread_local std::map<std::pair<int, ExponentVec>, double> cache;
    auto key = std::make_pair(n, alpha);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double v = monomial_moment(n, alpha);
    cache.emplace(std::move(key), v);
    return v;
}

} // namespace detail

/// Integral of a form over the unit sphere (probability measure).
inline double sphere_integral(const Form& p) {
    double s = 0.0;
    for (const auto& [alpha, c] : p.terms()) s += c * detail::cached_moment(p.n_vars(), alpha);
    return s;
}

/// Integral of a product of two forms, without materializing the product.
inline double sphere_integral_product(const Form& p, const Form& q) {
    if (p.n_vars() != q.n_vars())
        throw DimensionMismatch("sphere_integral_product: n_vars differ");
    const int n = p.n_vars();
    double s = 0.0;
    ExponentVec gamma(n);
    for (const auto& [alpha, ca] : p.terms()) {
        for (const auto& [beta, cb] : q.terms()) {
            for (int i = 0; i < n; ++i) gamma[i] = alpha[i] + beta[i];
            s += ca * cb * detail::cached_moment(n, gamma);
        }
    }
    return s;
}

/// L2 inner product <p, q>_2 = \int pq dsigma on the unit sphere.
inline double l2_inner(const Form& p, const Form& q) {
    if (p.n_vars() != q.n_vars()) throw DimensionMismatch("l2_inner: n_vars differ");
    if (p.degree() != q.degree()) throw DegreeMismatch("l2_inner: degrees differ");
    return sphere_integral_product(p, q);
}

/// Quartic y-moment \int y_i y_j y_k y_l dsigma =
/// (d_ij d_kl + d_ik d_jl + d_il d_jk) / (n(n+2)).
inline double quartic_y_moment(int n, int i, int j, int k, int l) {
    int s = 0;
    if (i == j && k == l) ++s;
    if (i == k && j == l) ++s;
    if (i == l && j == k) ++s;
    return static_cast<double>(s) / (static_cast<double>(n) * (n + 2));
}

/// Product-sphere inner product <f, g> = \int_{S x S} fg dsigma, computed
/// exactly: quartic monomial moments over y, then monomial moments over x.
inline double product_sphere_inner(const BiForm& f, const BiForm& g) {
    if (f.n_vars() != g.n_vars()) throw DimensionMismatch("product_sphere_inner: n_vars differ");
    if (f.x_degree() != g.x_degree())
        throw DegreeMismatch("product_sphere_inner: x-degrees differ");
    const int n = f.n_vars();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double wij = (i == j) ? 1.0 : 2.0;
            for (int k = 0; k < n; ++k) {
                for (int l = k; l < n; ++l) {
                    double wkl = (k == l) ? 1.0 : 2.0;
                    double ym = quartic_y_moment(n, i, j, k, l);
                    if (ym == 0.0) continue;
                    s += wij * wkl * ym * sphere_integral_product(f.entry(i, j), g.entry(k, l));
                }
            }
        }
    }
    return s;
}

/// Squared product-sphere norm of b = y^T M(x) y through the closed form
/// (2 \int <M,M> dx + \int tr^2 M dx) / (n(n+2)); an independent route that
/// must agree with product_sphere_inner(b, b).
inline double quads_norm(const BiForm& b) {
    const int n = b.n_vars();
    double frob = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            frob += sphere_integral_product(b.entry(i, j), b.entry(i, j));
    }
    Form tr = b.trace_form();
    double tr2 = sphere_integral_product(tr, tr);
    return (2.0 * frob + tr2) / (static_cast<double>(n) * (n + 2));
}

/// Hessian inner product <p, q>_H = <B_p, B_q> over the product sphere.
inline double hessian_inner(const Form& p, const Form& q) {
    if (p.n_vars() != q.n_vars()) throw DimensionMismatch("hessian_inner: n_vars differ");
    if (p.degree() != q.degree()) throw DegreeMismatch("hessian_inner: degrees differ");
    if (p.degree() < 2 || p.degree() % 2 != 0)
        throw DegreeMismatch("hessian_inner: need even degree >= 2");
    return product_sphere_inner(hessian_biform(p), hessian_biform(q));
}

/// \int_{S^{d_w - 1}} <x, u>^{2k} dx / |u|^{2k}
///   = Gamma(d_w/2) Gamma(k + 1/2) / (sqrt(pi) Gamma(k + d_w/2)),
/// evaluated in log space.  Always <= (2k/d_w)^k.
inline double linear_power_moment(int d_w, int k) {
    if (d_w < 1 || k < 1) throw DomainError("linear_power_moment: need d_w, k >= 1");
    double lg = std::lgamma(d_w / 2.0) + std::lgamma(k + 0.5) - 0.5 * std::log(M_PI) -
                std::lgamma(k + d_w / 2.0);
    return std::exp(lg);
}

/// Closed-form upper bound (2k/d_w)^k for the moment above.
inline double linear_power_moment_bound(int d_w, int k) {
    return std::pow(2.0 * k / d_w, k);
}

/// Decomposition p = sum_m (x.x)^m f_m with every f_m harmonic.
struct HarmonicDecomposition {
    // (m, f_m) with f_m of degree deg(p) - 2m; zero components omitted.
    std::vector<std::pair<int, Form>> components;

    Form reconstruct(int n, int degree) const {
        Form out(n, degree);
        for (const auto& [m, f] : components) out += radial_power(n, m) * f;
        return out;
    }
};

/// Exact harmonic decomposition via the Laplacian recursion: with
/// Delta p = sum_m r^{2m-2} 2m(n + 2 deg(p) - 2m - 2) f_m, the components of
/// Delta p determine f_1..f_d and f_0 falls out by subtraction.
inline HarmonicDecomposition harmonic_decompose(const Form& p) {
    const int n = p.n_vars();
    const int deg = p.degree();
    HarmonicDecomposition out;
    if (p.is_zero()) return out;
    if (deg <= 1) {
        out.components.emplace_back(0, p);
        return out;
    }
    HarmonicDecomposition sub = harmonic_decompose(p.laplacian());
    Form rest(n, deg);
    for (const auto& [mm, h] : sub.components) {
        int m = mm + 1; // h is the (m-1)-component of Delta p
        double c = 2.0 * m * (n + 2.0 * deg - 2.0 * m - 2.0);
        Form fm = h * (1.0 / c);
        out.components.emplace_back(m, fm);
        rest += radial_power(n, m) * fm;
    }
    Form f0 = p - rest;
    f0.prune(1e-14 * std::max(1.0, p.max_abs_coeff()));
    if (!f0.is_zero()) out.components.emplace_back(0, f0);
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

/// Dirichlet energy \int <grad g, grad g> dsigma, exact via monomial moments.
inline double dirichlet_integral(const Form& g) {
    if (g.degree() < 1) return 0.0;
    double s = 0.0;
    for (int i = 0; i < g.n_vars(); ++i) {
        Form gi = g.partial(i);
        s += sphere_integral_product(gi, gi);
    }
    return s;
}

/// Gram matrix of a basis under the chosen metric.
inline Eigen::MatrixXd gram_matrix(const std::vector<Form>& basis, MetricTag metric) {
    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXd g(m, m);
    std::vector<BiForm> hess;
    if (metric == MetricTag::Hessian) {
        hess.reserve(m);
        for (const auto& f : basis) hess.push_back(hessian_biform(f));
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double v = (metric == MetricTag::L2)
                           ? l2_inner(basis[i], basis[j])
                           : product_sphere_inner(hess[i], hess[j]);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

} // namespace conevol
