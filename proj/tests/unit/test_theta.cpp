#include "doctest.h"
#include "oracles.hpp"
#include "qmf/theta.hpp"

using namespace qmf;

TEST_CASE("theta entries") {
    BrandtModule m(class_set(build_order(11, 11)));
    auto f = theta_entry(m, 0, 0, 10);
    CHECK(f.coeffs.size() == 11);
    CHECK(f.coeffs[0] == Q(1, 2));
    CHECK(f.coeffs[1] == 1);
    CHECK(f.coeffs[2] == 1);
    auto g = theta_entry(m, 0, 1, 10);
    CHECK(g.coeffs[0] == 0);
    for (long n = 1; n <= 10; ++n) CHECK(g.coeffs[n] == m.matrix(n)(0, 1));
    CHECK_THROWS_AS(theta_entry(m, 2, 0, 5), ArgumentError);
    CHECK_THROWS_AS(theta_entry(m, 0, 0, 0), ArgumentError);
}

TEST_CASE("theta entries lie in M_2(11) away from the level") {
    // span of E_{2,11,1} and the eta product, compared at n prime to 11
    BrandtModule m(class_set(build_order(11, 11)));
    auto eta = oracle::eta_11(40);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            auto f = theta_entry(m, i, j, 40);
            // a_1 = alpha + beta, a_2 = 3 alpha - 2 beta
            Q alpha = (2 * f.coeffs[1] + f.coeffs[2]) / 5;
            Q beta = f.coeffs[1] - alpha;
            for (long n = 1; n <= 40; ++n) {
                if (n % 11 == 0) continue;
                CAPTURE(n);
                CHECK(f.coeffs[n] == alpha * Q(oracle::constrained_sigma(n, 11, 1)) + beta * Q(eta[n]));
            }
        }
}

TEST_CASE("level 11 theta span is the eta product") {
    HeckeContext ctx;
    auto span = theta_new_span(ctx, build_order(11, 11), 50);
    REQUIRE(span.size() == 1);
    auto eta = oracle::eta_11(50);
    CHECK(span[0].coeffs[0] == 0);
    for (int n = 1; n <= 50; ++n) {
        CAPTURE(n);
        CHECK(span[0].coeffs[n] == eta[n]);
    }
    CHECK(span[0].label == "theta-new-11-1");
}

TEST_CASE("theta kernels") {
    HeckeContext ctx;
    auto k11 = theta_kernel_dimension(ctx, build_order(11, 11));
    CHECK(k11.dim_new == 1);
    CHECK(k11.kernel == 0);
    auto k22 = theta_kernel_dimension(ctx, build_order(11, 22));
    CHECK(k22.dim_new == 0);
    CHECK(k22.kernel == 0);
    auto k121 = theta_kernel_dimension(ctx, build_order(11, 121));
    CHECK(k121.dim_new == 7);
    CHECK(k121.kernel == 3);
    CHECK(theta_kernel_dimension(ctx, build_order(5, 125)).kernel == 0);
}

TEST_CASE("Sturm bound") {
    CHECK(sturm_bound(11) == 2);
    CHECK(sturm_bound(121) == 22);
    CHECK(sturm_bound(1) == 1);
}

TEST_CASE("Eisenstein q-expansions") {
    auto e = eisenstein_q_expansion(11, 1, 5);
    CHECK(e.coeffs == std::vector<Q>{Q(-5, 132), Q(1), Q(3), Q(4), Q(7), Q(6)});
    CHECK(e.label == "E2-11-1");
    auto e2 = eisenstein_q_expansion(2, 3, 12);
    CHECK(e2.coeffs[0] == Q(-1, 72));
    for (long n = 1; n <= 12; ++n) CHECK(e2.coeffs[n] == oracle::constrained_sigma(n, 2, 3));
    CHECK_THROWS_AS(eisenstein_q_expansion(1, 1, 5), ArgumentError);
    CHECK_THROWS_AS(eisenstein_q_expansion(2, 4, 5), ArgumentError);
}

TEST_CASE("q-expansion records") {
    QExpansion f{"x", 2, {Q(-5, 132), Q(1), Q(0)}};
    CHECK(to_record(f) == R"({"label":"x","precision":2,"coefficients":["-5/132","1","0"]})");
}
