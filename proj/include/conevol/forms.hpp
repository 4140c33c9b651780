#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conevol/errors.hpp"

namespace conevol {

/// Monomial exponent vector; length equals the number of variables.
using ExponentVec = std::vector<int>;

inline int exp_degree(const ExponentVec& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

/// Homogeneous form in n variables with a sparse coefficient map.
/// Terms are kept in lexicographic exponent order; zero coefficients are
/// dropped on construction, so equal forms have equal term maps.
class Form {
public:
    using TermMap = std::map<ExponentVec, double>;

    Form() = default;

    /// Zero form of the given shape.
    Form(int n_vars, int degree) : n_(n_vars), degree_(degree) {
        if (n_vars < 1) throw DimensionMismatch("Form: need n_vars >= 1");
        if (degree < 0) throw DegreeMismatch("Form: need degree >= 0");
    }

    static Form from_terms(int n_vars, int degree,
                           const std::vector<std::pair<ExponentVec, double>>& terms) {
        Form f(n_vars, degree);
        for (const auto& [alpha, c] : terms) f.add_term(alpha, c);
        f.prune();
        return f;
    }

    int n_vars() const { return n_; }
    int degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double coeff(const ExponentVec& alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? 0.0 : it->second;
    }

    /// Merges one term into the map, validating shape and homogeneity.
    void add_term(const ExponentVec& alpha, double c) {
        if (static_cast<int>(alpha.size()) != n_)
            throw DimensionMismatch("Form::add_term: exponent length != n_vars");
        for (int e : alpha)
            if (e < 0) throw DomainError("Form::add_term: negative exponent");
        if (exp_degree(alpha) != degree_)
            throw DegreeMismatch("Form::add_term: exponent sum != degree");
        terms_[alpha] += c;
    }

    void prune(double tol = 0.0) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) <= tol) it = terms_.erase(it);
            else ++it;
        }
    }

    double eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != n_)
            throw DimensionMismatch("Form::eval: point length != n_vars");
        double s = 0.0;
        for (const auto& [alpha, c] : terms_) {
            double m = c;
            for (int i = 0; i < n_; ++i) {
                for (int e = 0; e < alpha[i]; ++e) m *= x[i];
            }
            s += m;
        }
        return s;
    }

    double eval(const std::vector<double>& x) const {
        return eval(std::span<const double>(x));
    }

    /// Partial derivative with respect to variable i.
    Form partial(int i) const {
        if (i < 0 || i >= n_) throw DimensionMismatch("Form::partial: bad index");
        Form out(n_, std::max(degree_ - 1, 0));
        if (degree_ == 0) return out;
        for (const auto& [alpha, c] : terms_) {
            if (alpha[i] == 0) continue;
            ExponentVec beta = alpha;
            beta[i] -= 1;
            out.terms_[beta] += c * alpha[i];
        }
        out.prune();
        return out;
    }

    std::vector<Form> gradient() const {
        std::vector<Form> g;
        g.reserve(n_);
        for (int i = 0; i < n_; ++i) g.push_back(partial(i));
        return g;
    }

    std::vector<double> gradient_at(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != n_)
            throw DimensionMismatch("Form::gradient_at: point length != n_vars");
        std::vector<double> g(n_, 0.0);
        for (const auto& [alpha, c] : terms_) {
            for (int i = 0; i < n_; ++i) {
                if (alpha[i] == 0) continue;
                double m = c * alpha[i];
                for (int j = 0; j < n_; ++j) {
                    int e = alpha[j] - (j == i ? 1 : 0);
                    for (int k = 0; k < e; ++k) m *= x[j];
                }
                g[i] += m;
            }
        }
        return g;
    }

    /// Laplacian; forms of degree < 2 map to the zero form.
    Form laplacian() const {
        Form out(n_, std::max(degree_ - 2, 0));
        if (degree_ < 2) return out;
        for (const auto& [alpha, c] : terms_) {
            for (int i = 0; i < n_; ++i) {
                if (alpha[i] < 2) continue;
                ExponentVec beta = alpha;
                beta[i] -= 2;
                out.terms_[beta] += c * alpha[i] * (alpha[i] - 1);
            }
        }
        out.prune();
        return out;
    }

    Form& operator+=(const Form& other) {
        check_same_shape(other, "Form::operator+=");
        for (const auto& [alpha, c] : other.terms_) terms_[alpha] += c;
        prune();
        return *this;
    }

    Form& operator-=(const Form& other) {
        check_same_shape(other, "Form::operator-=");
        for (const auto& [alpha, c] : other.terms_) terms_[alpha] -= c;
        prune();
        return *this;
    }

    Form& operator*=(double t) {
        if (t == 0.0) { terms_.clear(); return *this; }
        for (auto& [alpha, c] : terms_) c *= t;
        return *this;
    }

    friend Form operator+(Form a, const Form& b) { a += b; return a; }
    friend Form operator-(Form a, const Form& b) { a -= b; return a; }
    friend Form operator*(Form a, double t) { a *= t; return a; }
    friend Form operator*(double t, Form a) { a *= t; return a; }

    /// Polynomial product; degrees add.
    friend Form operator*(const Form& a, const Form& b) {
        if (a.n_ != b.n_) throw DimensionMismatch("Form product: n_vars differ");
        Form out(a.n_, a.degree_ + b.degree_);
        ExponentVec gamma(a.n_);
        for (const auto& [alpha, ca] : a.terms_) {
            for (const auto& [beta, cb] : b.terms_) {
                for (int i = 0; i < a.n_; ++i) gamma[i] = alpha[i] + beta[i];
                out.terms_[gamma] += ca * cb;
            }
        }
        out.prune();
        return out;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [alpha, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Largest coefficient difference against another form of the same shape.
    double coeff_distance(const Form& other) const {
        check_same_shape(other, "Form::coeff_distance");
        double m = 0.0;
        for (const auto& [alpha, c] : terms_) m = std::max(m, std::abs(c - other.coeff(alpha)));
        for (const auto& [alpha, c] : other.terms_) m = std::max(m, std::abs(c - coeff(alpha)));
        return m;
    }

private:
    void check_same_shape(const Form& other, const char* where) const {
        if (n_ != other.n_) throw DimensionMismatch(std::string(where) + ": n_vars differ");
        if (degree_ != other.degree_) throw DegreeMismatch(std::string(where) + ": degrees differ");
    }

    int n_ = 1;
    int degree_ = 0;
    TermMap terms_;
};

/// (x_1^2 + ... + x_n^2)^m
inline Form radial_power(int n, int m) {
    if (m < 0) throw DomainError("radial_power: negative power");
    Form r2(n, 2);
    for (int i = 0; i < n; ++i) {
        ExponentVec a(n, 0);
        a[i] = 2;
        r2.add_term(a, 1.0);
    }
    Form out(n, 0);
    out.add_term(ExponentVec(n, 0), 1.0);
    for (int k = 0; k < m; ++k) out = out * r2;
    return out;
}

/// All exponent vectors of the given total degree, lexicographically ordered.
inline std::vector<ExponentVec> monomial_exponents(int n, int degree) {
    std::vector<ExponentVec> out;
    ExponentVec cur(n, 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n - 1) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[pos] = e;
            self(self, pos + 1, remaining - e);
        }
    };
    if (n >= 1 && degree >= 0) rec(rec, 0, degree);
    std::sort(out.begin(), out.end());
    return out;
}

/// Motzkin form x1^4 x2^2 + x1^2 x2^4 - 3 x1^2 x2^2 x3^2 + x3^6 (n = 3, degree 6).
inline Form motzkin_form() {
    return Form::from_terms(3, 6, {
        {{4, 2, 0}, 1.0},
        {{2, 4, 0}, 1.0},
        {{2, 2, 2}, -3.0},
        {{0, 0, 6}, 1.0},
    });
}

} // namespace conevol
