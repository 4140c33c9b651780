#include <catch2/catch_amalgamated.hpp>

#include "conevol/bounds.hpp"
#include "conevol/forms.hpp"

using namespace conevol;

TEST_CASE("dim_bi") {
    REQUIRE(dim_bi(3, 2) == 36);
    REQUIRE(dim_bi(2, 2) == 9);
    for (int n : {2, 3, 4, 6}) REQUIRE(dim_bi(n, 1) == n * (n + 1) / 2);
    // enumeration oracle: x-monomials of degree 2d-2 times y-quadratics
    for (int n : {2, 3, 4}) {
        for (int d : {1, 2, 3}) {
            long count = static_cast<long>(monomial_exponents(n, 2 * d - 2).size()) *
                         static_cast<long>(monomial_exponents(n, 2).size());
            REQUIRE(dim_bi(n, d) == count);
        }
    }
}

TEST_CASE("dim_Uk") {
    REQUIRE(dim_Uk(3, 2, 1) == 36);
    REQUIRE(dim_Uk(2, 2, 3) == 49);
    SECTION("k = 1 recovers dim_bi") {
        for (int n = 2; n <= 6; ++n)
            for (int d = 1; d <= 6; ++d) REQUIRE(dim_Uk(n, d, 1) == dim_bi(n, d));
    }
    SECTION("always below C(n+2kd-1, 2kd)^2") {
        for (int n : {2, 3, 5, 10}) {
            for (int d : {1, 2, 3}) {
                for (int k : {1, 2, 5}) {
                    bigint rhs = binomial(n + 2L * k * d - 1, 2L * k * d);
                    REQUIRE(dim_Uk(n, d, k) < rhs * rhs);
                }
            }
        }
    }
}

TEST_CASE("entropy") {
    REQUIRE_THAT(entropy(0.5), Catch::Matchers::WithinRel(std::log(2.0), 1e-14));
    REQUIRE(entropy(0.0) == 0.0);
    REQUIRE(entropy(1.0) == 0.0);
    REQUIRE_THAT(entropy(0.25),
                 Catch::Matchers::WithinRel(0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0), 1e-14));
    REQUIRE_THROWS_AS(entropy(-0.1), DomainError);
    REQUIRE_THROWS_AS(entropy(1.1), DomainError);
}

TEST_CASE("binom_entropy_bound") {
    REQUIRE_THAT(binom_entropy_bound(4, 2), Catch::Matchers::WithinRel(16.0, 1e-12));
    REQUIRE(binomial(4, 2) == 6);
    REQUIRE(binom_entropy_bound(10, 0) == 1.0);
    SECTION("exact big-integer check for all a <= 60") {
        for (long a = 0; a <= 60; ++a) {
            for (long b = 0; b <= a; ++b) {
                // compare C(a,b) <= exp(aH(b/a)) in log space against the exact integer
                double logc = log_binomial(a, b);
                double logbound = (a == 0) ? 0.0 : a * entropy(static_cast<double>(b) / a);
                REQUIRE(logc <= logbound + 1e-9);
                // the log_binomial route itself matches the big integer
                bigint c = binomial(a, b);
                REQUIRE_THAT(logc, Catch::Matchers::WithinAbs(
                                       std::log(c.convert_to<double>()), 1e-9));
            }
        }
    }
    REQUIRE_THROWS_AS(binom_entropy_bound(4, 5), DomainError);
}

TEST_CASE("choose_k") {
    REQUIRE(choose_k(3, 2) == 5);
    REQUIRE(choose_k(1, 1) == 2);
    SECTION("3e check over the (n, d) grid") {
        const double three_e = 3.0 * std::exp(1.0);
        for (int n = 2; n <= 20; ++n) {
            for (int d = 1; d <= 5; ++d) {
                int k = choose_k(n, d);
                REQUIRE(alpha_numeric(n, d, k) <= three_e + 1e-12);
            }
        }
    }
}

TEST_CASE("theorem1_bound") {
    REQUIRE_THAT(theorem1_bound(10, 5, 1.0, 1.0), Catch::Matchers::WithinRel(1.0, 1e-14));
    SECTION("doubling alpha halves the bound") {
        double b1 = theorem1_bound(14, 5, 2.0, 35.0);
        double b2 = theorem1_bound(14, 5, 4.0, 35.0);
        REQUIRE_THAT(b1, Catch::Matchers::WithinRel(2.0 * b2, 1e-14));
    }
    SECTION("n=3, d=2 arithmetic") {
        double expect = std::sqrt(14.0 / 350.0) / (9.0 * std::exp(2.0));
        REQUIRE_THAT(theorem1_bound(14, 5, 9.0 * std::exp(2.0), 35.0),
                     Catch::Matchers::WithinRel(expect, 1e-12));
        REQUIRE_THAT(expect, Catch::Matchers::WithinAbs(0.003008, 2e-6));
    }
    REQUIRE_THROWS_AS(theorem1_bound(0, 5, 1.0, 1.0), DomainError);
}

TEST_CASE("theorem2_bound") {
    SECTION("n=3, d=2 is about 0.01207") {
        REQUIRE_THAT(theorem2_bound(3, 2), Catch::Matchers::WithinAbs(0.01207, 5e-5));
    }
    SECTION("bound * sqrt(n) converges for fixed d") {
        double prev = theorem2_bound(10, 2) * std::sqrt(10.0);
        double prev_delta = 1e9;
        for (long n = 100; n <= 10000; n *= 10) {
            double cur = theorem2_bound(static_cast<int>(n), 2) * std::sqrt(static_cast<double>(n));
            double delta = std::abs(cur - prev);
            REQUIRE(delta < prev_delta);
            prev_delta = delta;
            prev = cur;
        }
    }
    SECTION("positive everywhere on a grid") {
        for (int n = 2; n <= 10; ++n)
            for (int d = 1; d <= 5; ++d) REQUIRE(theorem2_bound(n, d) > 0.0);
    }
}

TEST_CASE("metric_ratio") {
    REQUIRE_THAT(metric_ratio(3, 2), Catch::Matchers::WithinRel(387.2, 1e-12));
    SECTION("limit 12d^2 as n grows") {
        for (int d : {1, 2, 3}) {
            double at_big_n = metric_ratio(1000000, d);
            REQUIRE_THAT(at_big_n, Catch::Matchers::WithinRel(12.0 * d * d, 1e-2));
        }
    }
    SECTION("greater than 1") {
        for (int n = 1; n <= 10; ++n)
            for (int d = 1; d <= 5; ++d) REQUIRE(metric_ratio(n, d) > 1.0);
    }
}

TEST_CASE("build_report") {
    SECTION("n=3, d=2") {
        BoundReport r = build_report(3, 2);
        REQUIRE(r.dim_P == 15);
        REQUIRE(r.D_M == 14);
        REQUIRE(r.D_bi == 36);
        REQUIRE(r.dim_M_bi == 35);
        REQUIRE(r.k == 5);
        REQUIRE_THAT(r.theorem2_bound, Catch::Matchers::WithinAbs(0.01207, 5e-5));
        REQUIRE_THAT(r.metric_ratio, Catch::Matchers::WithinRel(387.2, 1e-12));
        REQUIRE(r.alpha_numeric <= 9.0 * std::exp(2.0));
    }
    SECTION("n=4, d=2") {
        BoundReport r = build_report(4, 2);
        REQUIRE(r.D_M == 34);
        REQUIRE(r.D_bi == 100);
    }
    SECTION("theorem2 (with D_bi) is below the dim-M_bi variant") {
        for (int n = 2; n <= 6; ++n) {
            for (int d = 1; d <= 3; ++d) {
                BoundReport r = build_report(n, d);
                REQUIRE(r.theorem2_bound <= r.theorem2_bound_mbi * (1 + 1e-12));
            }
        }
    }
}
