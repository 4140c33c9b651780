#pragma once

#include <Eigen/Dense>
#include <vector>

#include "conevol/forms.hpp"
#include "conevol/optimize.hpp"
#include "conevol/sphere.hpp"

namespace conevol {

enum class SosStatus { Feasible, Infeasible, Undecided };

struct SolverConfig {
    double psd_tol = 1e-9;
    double feas_tol = 1e-8;
    int max_iters = 50000;
    double infeas_gap = 1e-6;
};

/// Outcome of the Gram-matrix feasibility search for p in Sq_{n,2d}.
/// The Gram matrix is indexed by the degree-d monomial basis in
/// lexicographic order.
struct GramCertificate {
    SosStatus status = SosStatus::Undecided;
    Eigen::MatrixXd gram;
    std::vector<ExponentVec> basis;
    double affine_residual = 0.0;
    double min_eigenvalue = 0.0;
    int iterations = 0;
    double gap_estimate = 0.0; // Dykstra between-set gap at termination
};

struct MembershipResult {
    bool member = false;
    double margin = 0.0;
    bool reliable = true; // false if the optimizer failed to converge
};

/// p is nonnegative iff its minimum on the unit sphere is >= 0; margin is the
/// minimum found.
inline MembershipResult is_nonneg(const Form& p, double tol = 1e-8, const OptConfig& cfg = {}) {
    if (p.degree() % 2 != 0) throw DegreeMismatch("is_nonneg: need even degree");
    MinResult mr = sphere_minimize(p, cfg);
    return {mr.value >= -tol, mr.value, mr.converged};
}

/// p is convex iff B_p >= 0 on the product sphere; margin is the minimum of
/// lambda_min(H_p(x)) over the unit sphere.
inline MembershipResult is_convex(const Form& p, double tol = 1e-8, const OptConfig& cfg = {}) {
    if (p.degree() % 2 != 0 || p.degree() < 2)
        throw DegreeMismatch("is_convex: need even degree >= 2");
    BiMinResult mr = biform_min(hessian_biform(p), cfg);
    return {mr.value >= -tol, mr.value, mr.converged};
}

namespace detail {

// Affine constraint groups for the Gram map: entries (i, j) with
// basis[i] + basis[j] = alpha must sum to coeff_alpha(p).
struct GramConstraints {
    GramConstraints(const Form& p, const std::vector<ExponentVec>& basis) {
        const int m = static_cast<int>(basis.size());
        const int n = p.n_vars();
        std::map<ExponentVec, int> group_of;
        ExponentVec alpha(n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int v = 0; v < n; ++v) alpha[v] = basis[i][v] + basis[j][v];
                auto [it, inserted] = group_of.emplace(alpha, static_cast<int>(groups.size()));
                if (inserted) {
                    groups.push_back({});
                    targets.push_back(p.coeff(alpha));
                }
                groups[it->second].push_back({i, j});
            }
        }
    }

    // Exact orthogonal projection onto the affine set (groups are disjoint).
    void project(Eigen::MatrixXd& q) const {
        for (size_t g = 0; g < groups.size(); ++g) {
            double s = 0.0;
            for (auto [i, j] : groups[g]) s += q(i, j);
            double corr = (targets[g] - s) / static_cast<double>(groups[g].size());
            for (auto [i, j] : groups[g]) q(i, j) += corr;
        }
    }

    double residual(const Eigen::MatrixXd& q) const {
        double r = 0.0;
        for (size_t g = 0; g < groups.size(); ++g) {
            double s = 0.0;
            for (auto [i, j] : groups[g]) s += q(i, j);
            r = std::max(r, std::abs(s - targets[g]));
        }
        return r;
    }

    std::vector<std::vector<std::pair<int, int>>> groups;
    std::vector<double> targets;
};

inline Eigen::MatrixXd psd_project(const Eigen::MatrixXd& q, double& min_eig) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()));
    min_eig = es.eigenvalues()(0);
    Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace detail

/// Dykstra's alternating projections between the PSD cone and the affine set
/// of Gram matrices representing p.  Feasible when one iterate satisfies both
/// tolerances; Infeasible when the between-set gap stabilizes above
/// infeas_gap for 1000 consecutive iterations (heuristic, not a certificate).
inline GramCertificate sos_project(const Form& p, const SolverConfig& cfg = {}) {
    if (p.degree() % 2 != 0) throw DegreeMismatch("sos_project: need even degree");
    const int n = p.n_vars();
    const int d = p.degree() / 2;

    GramCertificate cert;
    cert.basis = monomial_exponents(n, d);
    const int m = static_cast<int>(cert.basis.size());
    detail::GramConstraints constraints(p, cert.basis);

    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    constraints.project(x);
    Eigen::MatrixXd inc_p = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd inc_q = Eigen::MatrixXd::Zero(m, m);

    double prev_gap = std::numeric_limits<double>::infinity();
    int stable_count = 0;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        double min_eig = 0.0;
        Eigen::MatrixXd y = detail::psd_project(x + inc_p, min_eig);
        inc_p = x + inc_p - y;

        Eigen::MatrixXd z = y + inc_q;
        constraints.project(z);
        inc_q = y + inc_q - z;

        double gap = (y - z).norm();
        cert.iterations = it;
        cert.gap_estimate = gap;

        // y is PSD by construction; accept when it also meets the affine set
        double resid_y = constraints.residual(y);
        if (resid_y <= cfg.feas_tol) {
            cert.status = SosStatus::Feasible;
            cert.gram = y;
            cert.affine_residual = resid_y;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y, Eigen::EigenvaluesOnly);
            cert.min_eigenvalue = es.eigenvalues()(0);
            return cert;
        }
        // z meets the affine set exactly; accept when nearly PSD
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z, Eigen::EigenvaluesOnly);
        double min_eig_z = es.eigenvalues()(0);
        if (min_eig_z >= -cfg.psd_tol) {
            cert.status = SosStatus::Feasible;
            cert.gram = z;
            cert.affine_residual = 0.0;
            cert.min_eigenvalue = min_eig_z;
            return cert;
        }

        if (gap > cfg.infeas_gap && std::abs(gap - prev_gap) <= 1e-10 * std::max(1.0, gap)) {
            if (++stable_count >= 1000) {
                cert.status = SosStatus::Infeasible;
                cert.gram = z;
                cert.affine_residual = 0.0;
                cert.min_eigenvalue = min_eig_z;
                return cert;
            }
        } else {
            stable_count = 0;
        }
        prev_gap = gap;
        x = z;
    }
    cert.status = SosStatus::Undecided;
    cert.gram = x;
    cert.affine_residual = constraints.residual(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    cert.min_eigenvalue = es.eigenvalues()(0);
    return cert;
}

/// Decision wrapper over sos_project; Undecided throws.
inline bool is_sos(const Form& p, const SolverConfig& cfg = {}) {
    GramCertificate cert = sos_project(p, cfg);
    if (cert.status == SosStatus::Undecided)
        throw DomainError("is_sos: solver undecided; loosen tolerances or raise max_iters");
    return cert.status == SosStatus::Feasible;
}

/// Reconstructs the form represented by a Gram matrix over the given basis.
inline Form gram_to_form(const Eigen::MatrixXd& gram, const std::vector<ExponentVec>& basis,
                         int n, int degree) {
    Form out(n, degree);
    const int m = static_cast<int>(basis.size());
    ExponentVec alpha(n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int v = 0; v < n; ++v) alpha[v] = basis[i][v] + basis[j][v];
            out.add_term(alpha, gram(i, j));
        }
    }
    out.prune(0.0);
    return out;
}

} // namespace conevol
