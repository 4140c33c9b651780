#pragma once

#include <Eigen/Dense>
#include <vector>

#include "conevol/forms.hpp"

namespace conevol {

/// Bi-homogeneous form b(x, y) = y^T M(x) y with M symmetric and each entry a
/// homogeneous form of fixed degree in x.  Degree in y is always 2.
class BiForm {
public:
    BiForm() = default;

    /// Zero bi-form with entries of the given x-degree.
    BiForm(int n_vars, int x_degree) : n_(n_vars), xdeg_(x_degree) {
        if (n_vars < 1) throw DimensionMismatch("BiForm: need n_vars >= 1");
        if (x_degree < 0) throw DegreeMismatch("BiForm: need x_degree >= 0");
        entries_.assign(static_cast<size_t>(n_) * (n_ + 1) / 2, Form(n_, xdeg_));
    }

    int n_vars() const { return n_; }
    int x_degree() const { return xdeg_; }

    const Form& entry(int i, int j) const { return entries_[idx(i, j)]; }

    void set_entry(int i, int j, Form f) {
        if (f.n_vars() != n_ || f.degree() != xdeg_)
            throw DimensionMismatch("BiForm::set_entry: wrong entry shape");
        entries_[idx(i, j)] = std::move(f);
    }

    double eval(std::span<const double> x, std::span<const double> y) const {
        if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
            throw DimensionMismatch("BiForm::eval: point length != n_vars");
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) s += entry(i, j).eval(x) * y[i] * y[j];
        }
        return s;
    }

    double eval(const std::vector<double>& x, const std::vector<double>& y) const {
        return eval(std::span<const double>(x), std::span<const double>(y));
    }

    /// M(x) as a dense symmetric matrix.
    Eigen::MatrixXd matrix_at(std::span<const double> x) const {
        Eigen::MatrixXd m(n_, n_);
        for (int i = 0; i < n_; ++i) {
            for (int j = i; j < n_; ++j) {
                double v = entry(i, j).eval(x);
                m(i, j) = v;
                m(j, i) = v;
            }
        }
        return m;
    }

    /// tr M(x) as a form; for a Hessian bi-form this is the Laplacian.
    Form trace_form() const {
        Form t(n_, xdeg_);
        for (int i = 0; i < n_; ++i) t += entry(i, i);
        return t;
    }

    BiForm& operator+=(const BiForm& other) {
        check_same_shape(other);
        for (size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
        return *this;
    }

    BiForm& operator-=(const BiForm& other) {
        check_same_shape(other);
        for (size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
        return *this;
    }

    BiForm& operator*=(double t) {
        for (auto& e : entries_) e *= t;
        return *this;
    }

    friend BiForm operator+(BiForm a, const BiForm& b) { a += b; return a; }
    friend BiForm operator-(BiForm a, const BiForm& b) { a -= b; return a; }
    friend BiForm operator*(BiForm a, double t) { a *= t; return a; }
    friend BiForm operator*(double t, BiForm a) { a *= t; return a; }

    double coeff_distance(const BiForm& other) const {
        check_same_shape(other);
        double m = 0.0;
        for (size_t k = 0; k < entries_.size(); ++k)
            m = std::max(m, entries_[k].coeff_distance(other.entries_[k]));
        return m;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& e : entries_) m = std::max(m, e.max_abs_coeff());
        return m;
    }

private:
    void check_same_shape(const BiForm& other) const {
        if (n_ != other.n_ || xdeg_ != other.xdeg_)
            throw DimensionMismatch("BiForm: shape mismatch");
    }

    size_t idx(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw DimensionMismatch("BiForm: entry index out of range");
        if (i > j) std::swap(i, j);
        // packed upper triangle, row-major
        return static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
    }

    int n_ = 1;
    int xdeg_ = 0;
    std::vector<Form> entries_;
};

/// B_p(x, y) = y^T H_p(x) y where H_p is the Hessian of p.
inline BiForm hessian_biform(const Form& p) {
    if (p.degree() < 2) {
        return BiForm(p.n_vars(), 0);
    }
    const int n = p.n_vars();
    BiForm b(n, p.degree() - 2);
    for (int i = 0; i < n; ++i) {
        Form pi = p.partial(i);
        for (int j = i; j < n; ++j) b.set_entry(i, j, pi.partial(j));
    }
    return b;
}

/// Hessian of p evaluated at a point.
inline Eigen::MatrixXd hessian_at(const Form& p, std::span<const double> x) {
    if (static_cast<int>(x.size()) != p.n_vars())
        throw DimensionMismatch("hessian_at: point length != n_vars");
    return hessian_biform(p).matrix_at(x);
}

inline Eigen::MatrixXd hessian_at(const Form& p, const std::vector<double>& x) {
    return hessian_at(p, std::span<const double>(x));
}

/// B_{r^{2d}} = 2d (x.x)^{d-2} (2(d-1) <x,y>^2 + (x.x)(y.y)) as an explicit
/// bi-form; entries M_ij = 2d (2(d-1)(x.x)^{d-2} x_i x_j + (x.x)^{d-1} delta_ij).
inline BiForm b_r2d(int n, int d) {
    if (d < 1) throw DomainError("b_r2d: need d >= 1");
    BiForm b(n, 2 * d - 2);
    const double two_d = 2.0 * d;
    Form rd1 = radial_power(n, d - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Form e(n, 2 * d - 2);
            if (d >= 2) {
                Form xij(n, 2);
                ExponentVec a(n, 0);
                a[i] += 1;
                a[j] += 1;
                xij.add_term(a, 1.0);
                e += (two_d * 2.0 * (d - 1)) * (radial_power(n, d - 2) * xij);
            }
            if (i == j) e += two_d * rd1;
            b.set_entry(i, j, e);
        }
    }
    return b;
}

} // namespace conevol
