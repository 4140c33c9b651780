#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "conevol/biform.hpp"
#include "conevol/bounds.hpp"
#include "conevol/forms.hpp"
#include "conevol/membership.hpp"
#include "conevol/optimize.hpp"
#include "conevol/sphere.hpp"

namespace conevol {

enum class GaugeKind { PosTilde, XSection, KTilde, SqTilde, Ball };

/// Gauge oracle for the translated cone sections of P_{n,2d}.
struct GaugeOracle {
    GaugeKind kind = GaugeKind::Ball;
    int n = 2;
    int d = 1;
    MetricTag metric = MetricTag::L2; // ambient metric (Ball norm)
    OptConfig opt;
    SolverConfig sos;
    double sos_rel_tol = 1e-2; // bisection width for SqTilde
};

struct GaugeValue {
    double value = 0.0;
    bool reliable = true;
};

/// Orthonormal basis of the zero-mean hyperplane M_{n,2d} under a metric.
struct SubspaceBasis {
    MetricTag metric = MetricTag::L2;
    int n = 0;
    int d = 0;
    std::vector<Form> forms;
    long dim = 0;

    Form combine(const Eigen::VectorXd& coords) const {
        Form p(n, 2 * d);
        for (long i = 0; i < dim; ++i) p += coords(i) * forms[i];
        return p;
    }
};

/// Orthonormalizes the zero-mean projections of the degree-2d monomials via
/// an exact Gram matrix and its eigendecomposition.  dim = C(n+2d-1,2d) - 1.
inline SubspaceBasis orthonormal_basis(int n, int d, MetricTag metric) {
    if (d < 1) throw DomainError("orthonormal_basis: need 2d >= 2");
    SubspaceBasis out;
    out.metric = metric;
    out.n = n;
    out.d = d;

    Form r2d = radial_power(n, d);
    std::vector<Form> cands;
    for (const auto& alpha : monomial_exponents(n, 2 * d)) {
        Form mono(n, 2 * d);
        mono.add_term(alpha, 1.0);
        cands.push_back(mono - monomial_moment(n, alpha) * r2d);
    }

    Eigen::MatrixXd g = gram_matrix(cands, metric);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const double tol = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());
    for (int i = 0; i < g.rows(); ++i) {
        double lam = es.eigenvalues()(i);
        if (lam <= tol) continue;
        Form e(n, 2 * d);
        for (int j = 0; j < g.rows(); ++j) e += (es.eigenvectors()(j, i) / std::sqrt(lam)) * cands[j];
        out.forms.push_back(e);
    }
    out.dim = static_cast<long>(out.forms.size());
    if (out.dim != dim_forms(n, d) - 1)
        throw RankDeficiency("orthonormal_basis: unexpected numeric rank");
    return out;
}

namespace detail {

inline void require_zero_mean(const Form& p) {
    double mean = sphere_integral(p);
    double scale = std::max(1.0, p.max_abs_coeff());
    if (std::abs(mean) > 1e-7 * scale)
        throw DomainError("gauge: direction must have zero sphere mean");
}

/// min over the x-sphere of the generalized eigenvalue
/// lambda_min(H_p(x), C(x)) with C(x) = 2d (2(d-1) x x^T + I); this is the
/// pointwise ratio B_p / B_{r^{2d}} minimized in y exactly.
inline MinResult ktilde_ratio_min(const Form& p, const OptConfig& cfg) {
    const int n = p.n_vars();
    const int d = p.degree() / 2;
    BiForm h = hessian_biform(p);
    BiFormDerivatives dh(h);
    const double c0 = 2.0 * d;
    const double c1 = 2.0 * d * 2.0 * (d - 1);

    auto pencil = [&](const Eigen::VectorXd& x) {
        Eigen::MatrixXd a = h.matrix_at(std::span<const double>(x.data(), n));
        Eigen::MatrixXd c = c1 * (x * x.transpose());
        c.diagonal().array() += c0;
        return std::make_pair(a, c);
    };
    auto value = [&](const Eigen::VectorXd& x) {
        auto [a, c] = pencil(x);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, c, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    };
    auto grad = [&](const Eigen::VectorXd& x) {
        auto [a, c] = pencil(x);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, c);
        double lam = es.eigenvalues()(0);
        Eigen::VectorXd v = es.eigenvectors().col(0); // v^T C v = 1
        Eigen::VectorXd g(n);
        double xv = x.dot(v);
        for (int k = 0; k < n; ++k) {
            double dc = 2.0 * c1 * v(k) * xv; // v^T dC/dx_k v
            g(k) = v.dot(dh.matrix_at(k, x) * v) - lam * dc;
        }
        return g;
    };
    return minimize_on_sphere(n, value, grad, cfg);
}

} // namespace detail

/// Gauge of the oracle's body in direction p.  For the cone sections p must
/// have zero sphere mean; Ball accepts any form.
inline GaugeValue gauge(const GaugeOracle& oracle, const Form& p) {
    switch (oracle.kind) {
        case GaugeKind::Ball: {
            double v = (oracle.metric == MetricTag::L2) ? std::sqrt(l2_inner(p, p))
                                                        : std::sqrt(hessian_inner(p, p));
            return {v, true};
        }
        case GaugeKind::PosTilde: {
            detail::require_zero_mean(p);
            MinResult mr = sphere_minimize(p, oracle.opt);
            return {std::max(0.0, -mr.value), mr.converged};
        }
        case GaugeKind::XSection: {
            detail::require_zero_mean(p);
            BiMinResult mr = biform_min(hessian_biform(p), oracle.opt);
            return {std::max(0.0, -mr.value), mr.converged};
        }
        case GaugeKind::KTilde: {
            detail::require_zero_mean(p);
            MinResult mr = detail::ktilde_ratio_min(p, oracle.opt);
            return {std::max(0.0, -mr.value), mr.converged};
        }
        case GaugeKind::SqTilde: {
            detail::require_zero_mean(p);
            Form r2d = radial_power(oracle.n, oracle.d);
            auto feasible = [&](double lam) {
                GramCertificate cert = sos_project(p * (1.0 / lam) + r2d, oracle.sos);
                return cert.status == SosStatus::Feasible;
            };
            double hi = 1.0;
            while (!feasible(hi)) {
                hi *= 2.0;
                if (hi > 1e6)
                    throw BisectionBracketFailure("gauge: no SOS bracket below 1e6");
            }
            double lo = 0.0;
            while (hi - lo > oracle.sos_rel_tol * hi) {
                double mid = 0.5 * (lo + hi);
                if (mid <= 0.0) break;
                if (feasible(mid)) hi = mid;
                else lo = mid;
            }
            return {hi, true};
        }
    }
    throw DomainError("gauge: unknown oracle kind");
}

} // namespace conevol
