#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "conevol/biform.hpp"
#include "conevol/forms.hpp"

namespace conevol {

/// Multistart configuration for the sphere minimizers.
struct OptConfig {
    int restarts = 32;
    int max_iters = 300;
    double step_tol = 1e-12;
    int grid_points = 10000;
};

struct MinResult {
    double value = 0.0;
    Eigen::VectorXd argmin;
    bool converged = true;
};

namespace detail {

// Fixed seed so the coarse grid (and hence every gauge value) is a
// deterministic function of the problem alone.
constexpr uint64_t kGridSeed = 0x9e3779b97f4a7c15ull;

inline std::vector<Eigen::VectorXd> sphere_grid(int n, int count) {
    std::mt19937_64 rng(kGridSeed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = gauss(rng);
        double nrm = x.norm();
        if (nrm < 1e-12) { --k; continue; }
        pts.push_back(x / nrm);
    }
    return pts;
}

} // namespace detail

/// Projected gradient descent with Armijo backtracking on the unit sphere,
/// multistarted from the best points of a deterministic coarse grid.
/// `value` and `grad` evaluate the objective and its ambient gradient.
inline MinResult minimize_on_sphere(
    int n, const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const OptConfig& cfg = {}) {
    auto grid = detail::sphere_grid(n, std::max(cfg.grid_points, cfg.restarts));
    // rank grid points by objective, keep the best as starting points
    std::vector<std::pair<double, int>> ranked(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) ranked[i] = {value(grid[i]), static_cast<int>(i)};
    std::partial_sort(ranked.begin(), ranked.begin() + std::min<size_t>(cfg.restarts, ranked.size()),
                      ranked.end());

    MinResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.converged = false;

    const int n_starts = std::min<int>(cfg.restarts, static_cast<int>(ranked.size()));
    for (int s = 0; s < n_starts; ++s) {
        Eigen::VectorXd x = grid[ranked[s].second];
        double fx = ranked[s].first;
        double step = 1.0;
        bool converged = false;
        int stall = 0; // consecutive iterations with negligible decrease
        for (int it = 0; it < cfg.max_iters; ++it) {
            Eigen::VectorXd g = grad(x);
            Eigen::VectorXd gt = g - g.dot(x) * x; // tangential component
            double gn2 = gt.squaredNorm();
            if (gn2 < cfg.step_tol * cfg.step_tol) { converged = true; break; }
            // Armijo backtracking along the projected ray
            double t = std::min(step * 2.0, 1.0);
            bool moved = false;
            double prev = fx;
            for (int bt = 0; bt < 60; ++bt) {
                Eigen::VectorXd xn = (x - t * gt).normalized();
                double fn = value(xn);
                if (fn <= fx - 1e-4 * t * gn2) {
                    x = xn;
                    fx = fn;
                    step = t;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) { converged = true; break; }
            if (step < cfg.step_tol) { converged = true; break; }
            // non-smooth objectives (eigenvalue fields) keep improving by
            // geometrically shrinking amounts; treat a sustained stall as
            // convergence rather than budget exhaustion
            if (prev - fx <= 1e-11 * (1.0 + std::abs(fx))) {
                if (++stall >= 5) { converged = true; break; }
            } else {
                stall = 0;
            }
        }
        if (fx < best.value) {
            best.value = fx;
            best.argmin = x;
            best.converged = converged;
        } else if (fx == best.value && converged) {
            best.converged = true;
        }
    }
    return best;
}

/// Approximate global minimum of a form over the unit sphere.
inline MinResult sphere_minimize(const Form& p, const OptConfig& cfg = {}) {
    const int n = p.n_vars();
    auto value = [&p, n](const Eigen::VectorXd& x) {
        return p.eval(std::span<const double>(x.data(), n));
    };
    auto grad = [&p, n](const Eigen::VectorXd& x) {
        auto g = p.gradient_at(std::span<const double>(x.data(), n));
        return Eigen::Map<const Eigen::VectorXd>(g.data(), n).eval();
    };
    return minimize_on_sphere(n, value, grad, cfg);
}

/// Precomputed partial derivatives of a bi-form's entry matrix, for the
/// eigenvalue-field minimizers.
struct BiFormDerivatives {
    explicit BiFormDerivatives(const BiForm& b) : n(b.n_vars()) {
        partials.resize(n);
        for (int k = 0; k < n; ++k) {
            partials[k].reserve(static_cast<size_t>(n) * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) partials[k].push_back(b.entry(i, j).partial(k));
        }
    }

    Eigen::MatrixXd matrix_at(int k, const Eigen::VectorXd& x) const {
        Eigen::MatrixXd m(n, n);
        std::span<const double> xs(x.data(), static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = partials[k][static_cast<size_t>(i) * n + j].eval(xs);
        return m;
    }

    int n;
    std::vector<std::vector<Form>> partials; // per variable, row-major entries
};

struct BiMinResult {
    double value = 0.0;
    Eigen::VectorXd arg_x;
    Eigen::VectorXd arg_y;
    bool converged = true;
};

/// Minimum of b(x, y) = y^T M(x) y over the product of unit spheres,
/// computed as min over x of lambda_min(M(x)); the optimal y for fixed x is
/// the eigenvector of the smallest eigenvalue.
inline BiMinResult biform_min(const BiForm& b, const OptConfig& cfg = {}) {
    const int n = b.n_vars();
    BiFormDerivatives db(b);
    auto value = [&b, n](const Eigen::VectorXd& x) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            b.matrix_at(std::span<const double>(x.data(), n)), Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    };
    auto grad = [&b, &db, n](const Eigen::VectorXd& x) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            b.matrix_at(std::span<const double>(x.data(), n)));
        Eigen::VectorXd v = es.eigenvectors().col(0);
        Eigen::VectorXd g(n);
        for (int k = 0; k < n; ++k) g(k) = v.dot(db.matrix_at(k, x) * v);
        return g;
    };
    MinResult mr = minimize_on_sphere(n, value, grad, cfg);
    BiMinResult out;
    out.value = mr.value;
    out.arg_x = mr.argmin;
    out.converged = mr.converged;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        b.matrix_at(std::span<const double>(mr.argmin.data(), n)));
    out.arg_y = es.eigenvectors().col(0);
    return out;
}

} // namespace conevol
