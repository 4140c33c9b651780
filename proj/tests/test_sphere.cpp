#include <catch2/catch_amalgamated.hpp>

#include "conevol/gauge.hpp"
#include "conevol/sphere.hpp"
#include "test_util.hpp"

using namespace conevol;
using testutil::random_form;
using testutil::random_unit_vector;

namespace {

// Monte-Carlo oracle for sphere integrals, independent of the moment formula.
double mc_sphere_integral(const Form& p, long samples, uint64_t seed) {
    std::mt19937_64 rng(seed);
    double s = 0.0;
    for (long i = 0; i < samples; ++i) s += p.eval(random_unit_vector(p.n_vars(), rng));
    return s / static_cast<double>(samples);
}

double mc_product_sphere_integral(const BiForm& f, const BiForm& g, long samples, uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = f.n_vars();
    double s = 0.0;
    for (long i = 0; i < samples; ++i) {
        auto x = random_unit_vector(n, rng);
        auto y = random_unit_vector(n, rng);
        s += f.eval(x, y) * g.eval(x, y);
    }
    return s / static_cast<double>(samples);
}

BiForm random_biform(int n, int xdeg, std::mt19937_64& rng) {
    BiForm b(n, xdeg);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) b.set_entry(i, j, random_form(n, xdeg, rng));
    return b;
}

} // namespace

TEST_CASE("monomial_moment") {
    SECTION("x_i^2 integrates to 1/n") {
        for (int n : {2, 3, 5, 8}) {
            ExponentVec a(n, 0);
            a[0] = 2;
            REQUIRE_THAT(monomial_moment(n, a), Catch::Matchers::WithinRel(1.0 / n, 1e-14));
        }
    }
    SECTION("x1^4 on S^2 is 1/5, cross-checked by Monte Carlo") {
        REQUIRE_THAT(monomial_moment(3, {4, 0, 0}), Catch::Matchers::WithinRel(0.2, 1e-14));
        Form p = Form::from_terms(3, 4, {{{4, 0, 0}, 1.0}});
        REQUIRE_THAT(mc_sphere_integral(p, 10'000'000, 1234), Catch::Matchers::WithinAbs(0.2, 1e-3));
    }
    SECTION("odd exponents vanish") {
        REQUIRE(monomial_moment(3, {1, 1, 0}) == 0.0);
        REQUIRE(monomial_moment(2, {3, 2}) == 0.0);
    }
}

TEST_CASE("l2_inner") {
    SECTION("r^{2d} has unit norm") {
        for (auto [n, d] : {std::pair{2, 1}, {3, 2}, {4, 3}}) {
            Form r = radial_power(n, d);
            REQUIRE_THAT(l2_inner(r, r), Catch::Matchers::WithinRel(1.0, 1e-12));
        }
    }
    SECTION("<x1^2, x2^2> on S^1 is 1/8") {
        Form a = Form::from_terms(2, 2, {{{2, 0}, 1.0}});
        Form b = Form::from_terms(2, 2, {{{0, 2}, 1.0}});
        REQUIRE_THAT(l2_inner(a, b), Catch::Matchers::WithinRel(0.125, 1e-14));
    }
    SECTION("odd-degree cross terms vanish") {
        Form a = Form::from_terms(2, 1, {{{1, 0}, 1.0}});
        Form b = Form::from_terms(2, 1, {{{0, 1}, 1.0}});
        REQUIRE(l2_inner(a, b) == 0.0);
    }
    SECTION("shape errors") {
        Form a = Form::from_terms(2, 2, {{{2, 0}, 1.0}});
        Form b = Form::from_terms(2, 4, {{{4, 0}, 1.0}});
        Form c = Form::from_terms(3, 2, {{{2, 0, 0}, 1.0}});
        REQUIRE_THROWS_AS(l2_inner(a, b), DegreeMismatch);
        REQUIRE_THROWS_AS(l2_inner(a, c), DimensionMismatch);
    }
}

TEST_CASE("product_sphere_inner") {
    SECTION("constant identity bi-form has unit norm") {
        for (int n : {2, 3, 4}) {
            BiForm b(n, 0);
            Form one(n, 0);
            one.add_term(ExponentVec(n, 0), 1.0);
            for (int i = 0; i < n; ++i) b.set_entry(i, i, one);
            REQUIRE_THAT(product_sphere_inner(b, b), Catch::Matchers::WithinRel(1.0, 1e-12));
        }
    }
    SECTION("B_{r^4} norm against Monte Carlo, n=2") {
        BiForm b = b_r2d(2, 2);
        double exact = product_sphere_inner(b, b);
        double mc = mc_product_sphere_integral(b, b, 1'000'000, 99);
        REQUIRE_THAT(mc, Catch::Matchers::WithinRel(exact, 1e-2));
    }
    SECTION("bilinearity") {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 10; ++t) {
            BiForm f = random_biform(3, 2, rng);
            BiForm g = random_biform(3, 2, rng);
            BiForm h = random_biform(3, 2, rng);
            double lhs = product_sphere_inner(f + g, h);
            double rhs = product_sphere_inner(f, h) + product_sphere_inner(g, h);
            REQUIRE_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-10));
        }
    }
}

TEST_CASE("quads_norm matches product_sphere_inner (two independent evaluation paths)") {
    SECTION("constant identity matrix gives 1") {
        int n = 4;
        BiForm b(n, 0);
        Form one(n, 0);
        one.add_term(ExponentVec(n, 0), 1.0);
        for (int i = 0; i < n; ++i) b.set_entry(i, i, one);
        REQUIRE_THAT(quads_norm(b), Catch::Matchers::WithinRel(1.0, 1e-12));
    }
    SECTION("100 random bi-forms, two-path equality") {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 100; ++t) {
            int n = 2 + (t % 3);
            BiForm b = random_biform(n, 2, rng);
            double a = product_sphere_inner(b, b);
            double q = quads_norm(b);
            REQUIRE_THAT(q, Catch::Matchers::WithinRel(a, 1e-9));
        }
    }
    SECTION("random diagonal monomial entries vs Monte Carlo") {
        std::mt19937_64 rng(37);
        BiForm b(3, 2);
        for (int i = 0; i < 3; ++i) b.set_entry(i, i, random_form(3, 2, rng));
        double mc = mc_product_sphere_integral(b, b, 1'000'000, 41);
        REQUIRE_THAT(mc, Catch::Matchers::WithinRel(quads_norm(b), 1e-2));
    }
}

TEST_CASE("hessian_inner") {
    SECTION("positive definite on random nonzero forms") {
        std::mt19937_64 rng(43);
        for (int t = 0; t < 100; ++t) {
            Form p = random_form(3, 4, rng);
            REQUIRE(hessian_inner(p, p) > 0.0);
        }
    }
    SECTION("rotation invariance") {
        std::mt19937_64 rng(47);
        for (int t = 0; t < 10; ++t) {
            Form p = random_form(3, 4, rng);
            Form q = random_form(3, 4, rng);
            auto rot = testutil::random_rotation(3, rng);
            double lhs = hessian_inner(testutil::compose_linear(p, rot),
                                       testutil::compose_linear(q, rot));
            REQUIRE_THAT(lhs, Catch::Matchers::WithinRel(hessian_inner(p, q), 1e-8));
        }
    }
    SECTION("<r^4, r^4>_H equals quads_norm(B_{r^4})") {
        Form r4 = radial_power(2, 2);
        REQUIRE_THAT(hessian_inner(r4, r4),
                     Catch::Matchers::WithinRel(quads_norm(b_r2d(2, 2)), 1e-12));
    }
}

TEST_CASE("linear_power_moment") {
    SECTION("k = 1 collapses to 1/d_w") {
        for (int dw : {1, 2, 5, 14, 100})
            REQUIRE_THAT(linear_power_moment(dw, 1), Catch::Matchers::WithinRel(1.0 / dw, 1e-12));
    }
    SECTION("(2, 2) -> 3/8") {
        REQUIRE_THAT(linear_power_moment(2, 2), Catch::Matchers::WithinRel(0.375, 1e-12));
    }
    SECTION("always below the (2k/d_w)^k bound") {
        for (int dw : {1, 2, 3, 14, 35, 200}) {
            for (int k : {1, 2, 5, 10, 40}) {
                REQUIRE(linear_power_moment(dw, k) <= linear_power_moment_bound(dw, k) * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("harmonic_decompose") {
    SECTION("x1^2 in n=2 splits as (x1^2 - r^2/2) + r^2/2") {
        Form p = Form::from_terms(2, 2, {{{2, 0}, 1.0}});
        auto dec = harmonic_decompose(p);
        REQUIRE(dec.components.size() == 2);
        REQUIRE(dec.components[0].first == 0);
        REQUIRE(dec.components[1].first == 1);
        REQUIRE(dec.components[0].second.laplacian().is_zero());
        REQUIRE_THAT(dec.components[1].second.coeff({0, 0}), Catch::Matchers::WithinRel(0.5, 1e-12));
        REQUIRE(dec.reconstruct(2, 2).coeff_distance(p) < 1e-12);
    }
    SECTION("harmonic input passes through") {
        Form h = Form::from_terms(2, 2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}});
        auto dec = harmonic_decompose(h);
        REQUIRE(dec.components.size() == 1);
        REQUIRE(dec.components[0].first == 0);
        REQUIRE(dec.components[0].second.coeff_distance(h) < 1e-12);
    }
    SECTION("pure radial r^4 in n=3") {
        auto dec = harmonic_decompose(radial_power(3, 2));
        REQUIRE(dec.components.size() == 1);
        REQUIRE(dec.components[0].first == 2);
        REQUIRE_THAT(dec.components[0].second.coeff({0, 0, 0}),
                     Catch::Matchers::WithinRel(1.0, 1e-12));
    }
    SECTION("random forms: reconstruction and harmonicity") {
        std::mt19937_64 rng(53);
        for (int t = 0; t < 50; ++t) {
            int n = 2 + (t % 3);
            Form p = random_form(n, 6, rng);
            auto dec = harmonic_decompose(p);
            REQUIRE(dec.reconstruct(n, 6).coeff_distance(p) < 1e-9 * std::max(1.0, p.max_abs_coeff()));
            for (const auto& [m, f] : dec.components)
                REQUIRE(f.laplacian().max_abs_coeff() < 1e-9 * std::max(1.0, f.max_abs_coeff()));
        }
    }
}

TEST_CASE("dirichlet_integral") {
    SECTION("f = x1^2 - x2^2 on S^1: energy 4 = j(2j+n-2) ||f||^2") {
        Form f = Form::from_terms(2, 2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}});
        REQUIRE_THAT(dirichlet_integral(f), Catch::Matchers::WithinRel(4.0, 1e-12));
        REQUIRE_THAT(2.0 * (2.0 * 2 + 2 - 2) * l2_inner(f, f),
                     Catch::Matchers::WithinRel(4.0, 1e-12));
    }
    SECTION("g = r^2: energy 4, below (2k^2+kn) bound") {
        for (int n : {2, 3, 5}) {
            Form g = radial_power(n, 1);
            REQUIRE_THAT(dirichlet_integral(g), Catch::Matchers::WithinRel(4.0, 1e-12));
            REQUIRE(dirichlet_integral(g) <= (2.0 * 4 + 2.0 * n) * l2_inner(g, g) + 1e-12);
        }
    }
    SECTION("degree-4 forms in n=3 respect the 44 ||g||^2 bound") {
        std::mt19937_64 rng(59);
        for (int t = 0; t < 100; ++t) {
            Form g = random_form(3, 4, rng);
            REQUIRE(dirichlet_integral(g) <= 44.0 * l2_inner(g, g) * (1 + 1e-12));
        }
    }
}

TEST_CASE("Stokes identity for harmonic components") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 50; ++t) {
        int n = 2 + (t % 3);
        Form p = random_form(n, 6, rng);
        for (const auto& [m, f] : harmonic_decompose(p).components) {
            int j = f.degree();
            if (j == 0) continue;
            double lhs = dirichlet_integral(f);
            double rhs = j * (2.0 * j + n - 2.0) * l2_inner(f, f);
            REQUIRE_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-8));
        }
    }
}

TEST_CASE("Dirichlet energy bound across n in 2..6, degrees up to 8") {
    std::mt19937_64 rng(67);
    int trials = 0;
    for (int n = 2; n <= 6; ++n) {
        for (int k : {2, 3, 4, 6, 8}) {
            for (int t = 0; t < 40; ++t) {
                Form g = random_form(n, k, rng);
                double bound = (2.0 * k * k + static_cast<double>(k) * n) * l2_inner(g, g);
                REQUIRE(dirichlet_integral(g) <= bound * (1 + 1e-10));
                ++trials;
            }
        }
    }
    REQUIRE(trials == 1000);
}

TEST_CASE("Hessian vs L2 metric comparison") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + (t % 3);
        int d = 2;
        Form g = random_form(n, 2 * d, rng);
        double ratio = 12.0 * d * d * (4.0 * d + n) * (4.0 * d + n) / (n * (n + 2.0));
        REQUIRE(hessian_inner(g, g) <= ratio * l2_inner(g, g) * (1 + 1e-10));
    }
}

TEST_CASE("gram_matrix") {
    SECTION("monomial basis of P_{2,2} under L2") {
        Form a = Form::from_terms(2, 2, {{{2, 0}, 1.0}});
        Form b = Form::from_terms(2, 2, {{{0, 2}, 1.0}});
        Form c = Form::from_terms(2, 2, {{{1, 1}, 1.0}});
        Eigen::MatrixXd g = gram_matrix({a, b, c}, MetricTag::L2);
        Eigen::MatrixXd expect(3, 3);
        expect << 3.0 / 8, 1.0 / 8, 0, 1.0 / 8, 3.0 / 8, 0, 0, 0, 1.0 / 8;
        REQUIRE((g - expect).norm() < 1e-12);
    }
    SECTION("orthonormal input gives identity") {
        SubspaceBasis basis = orthonormal_basis(3, 1, MetricTag::L2);
        Eigen::MatrixXd g = gram_matrix(basis.forms, MetricTag::L2);
        REQUIRE((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).norm() < 1e-10);
    }
    SECTION("rank equals number of independent inputs") {
        Form a = Form::from_terms(2, 2, {{{2, 0}, 1.0}});
        Form b = Form::from_terms(2, 2, {{{0, 2}, 1.0}});
        Form c = a + b;
        Eigen::MatrixXd g = gram_matrix({a, b, c}, MetricTag::L2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
        int rank = (es.eigenvalues().array() > 1e-10).count();
        REQUIRE(rank == 2);
    }
}

TEST_CASE("reproducing kernel norm: sum e_i(x,y)^2 = dim M_bi") {
    // orthonormal basis of the zero-mean bi-form hyperplane for n=3, d=2
    const int n = 3, d = 2;
    std::vector<BiForm> cands;
    Form one(n, 0);
    one.add_term(ExponentVec(n, 0), 1.0);
    BiForm mean_form(n, 2 * d - 2); // (x.x)^{d-1} (y.y), unit product-sphere mean
    for (int i = 0; i < n; ++i) mean_form.set_entry(i, i, radial_power(n, d - 1));

    auto mean_of = [&](const BiForm& b) { return product_sphere_inner(b, mean_form) /
                                                 product_sphere_inner(mean_form, mean_form); };

    for (const auto& alpha : monomial_exponents(n, 2 * d - 2)) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                BiForm b(n, 2 * d - 2);
                Form mono(n, 2 * d - 2);
                mono.add_term(alpha, 1.0);
                b.set_entry(i, j, mono);
                b -= mean_of(b) * mean_form;
                cands.push_back(b);
            }
        }
    }

    const int m = static_cast<int>(cands.size());
    Eigen::MatrixXd g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) g(i, j) = g(j, i) = product_sphere_inner(cands[i], cands[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    std::vector<BiForm> basis;
    double tol = 1e-10 * es.eigenvalues().maxCoeff();
    for (int i = 0; i < m; ++i) {
        if (es.eigenvalues()(i) <= tol) continue;
        BiForm e(n, 2 * d - 2);
        for (int j = 0; j < m; ++j) e += (es.eigenvectors()(j, i) / std::sqrt(es.eigenvalues()(i))) * cands[j];
        basis.push_back(e);
    }
    const long dim_m_bi = dim_bi(n, d) - 1;
    REQUIRE(static_cast<long>(basis.size()) == dim_m_bi);

    std::mt19937_64 rng(73);
    for (int t = 0; t < 10; ++t) {
        auto x = random_unit_vector(n, rng);
        auto y = random_unit_vector(n, rng);
        double s = 0.0;
        for (const auto& e : basis) {
            double v = e.eval(x, y);
            s += v * v;
        }
        REQUIRE_THAT(s, Catch::Matchers::WithinRel(static_cast<double>(dim_m_bi), 1e-6));
    }
}
