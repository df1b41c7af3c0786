#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qmf/linalg.hpp"

using namespace qmf;

namespace {

IntMat random_unimodular(std::mt19937& rng, std::size_t n) {
    IntMat u = IntMat::identity(n);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1), coef(-2, 2);
    for (int s = 0; s < 12; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int c = coef(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
    }
    return u;
}

// brute force count of +-pairs with x^t g x <= bound in the box [-r, r]^n
std::size_t box_count(const IntMat& g, long bound, long r) {
    std::size_t n = g.rows, total = 0;
    std::vector<long> x(n, -r);
    while (true) {
        long v = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v += x[i] * g(i, j).get_si() * x[j];
        bool zero = true;
        for (long c : x) zero = zero && c == 0;
        if (!zero && v <= bound) ++total;
        std::size_t k = 0;
        while (k < n && x[k] == r) x[k++] = -r;
        if (k == n) break;
        ++x[k];
    }
    return total / 2;
}

}  // namespace

TEST_CASE("hnf of the identity and a small example") {
    auto r = hnf(IntMat::identity(4));
    CHECK(r.h == IntMat::identity(4));
    CHECK(r.transform == IntMat::identity(4));
    IntMat m{{2, 0}, {1, 1}};
    auto h = hnf(m);
    CHECK(h.h == IntMat{{1, 1}, {0, 2}});
    CHECK(h.transform * m == h.h);
}

TEST_CASE("hnf is idempotent and preserves the determinant up to sign") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int t = 0; t < 20; ++t) {
        IntMat m(4, 4);
        for (auto& x : m.a) x = d(rng);
        auto h = hnf(m);
        CHECK(hnf(h.h).h == h.h);
        CHECK(h.transform * m == h.h);
        Q dm = det(to_rat(m)), dh = det(to_rat(h.h));
        CHECK(abs(dm) == abs(dh));
        CHECK(abs(det(to_rat(h.transform))) == 1);
    }
}

TEST_CASE("short vectors of the standard form") {
    GramForm g = make_gram(to_rat(IntMat::identity(4)));
    CHECK(short_vectors(g, 0).vectors.empty());
    auto one = short_vectors(g, 1);
    CHECK(one.vectors.size() == 4);
    CHECK(one.counts.at(Q(1)) == 4);
    auto two = short_vectors(g, 2);
    CHECK(two.vectors.size() == 16);
    CHECK(two.counts.at(Q(2)) == 12);
    // oracle: brute force over [-2,2]^4
    CHECK(two.vectors.size() == box_count(IntMat::identity(4), 2, 2));
    // lexicographically larger representative of each pair, sorted
    for (auto& v : two.vectors) {
        ZVec neg = v;
        for (auto& x : neg) x = -x;
        CHECK(neg < v);
    }
}

TEST_CASE("short vector counts are basis independent") {
    std::mt19937 rng(11);
    IntMat g{{2, 1, 0, 0}, {1, 2, 1, 0}, {0, 1, 2, 1}, {0, 0, 1, 3}};
    std::size_t base = box_count(g, 6, 4);
    CHECK(short_vectors(make_gram(to_rat(g)), 6).vectors.size() == base);
    for (int t = 0; t < 5; ++t) {
        IntMat u = random_unimodular(rng, 4);
        IntMat g2 = u * g * u.transpose();
        CHECK(short_vectors(make_gram(to_rat(g2)), 6).vectors.size() == base);
    }
}

TEST_CASE("definiteness errors") {
    RatMat g{{Q(1), Q(0)}, {Q(0), Q(-1)}};
    CHECK_FALSE(is_positive_definite(g));
    CHECK_THROWS_AS(short_vectors(make_gram(g), 3), DefinitenessError);
}

TEST_CASE("rational Gram forms and exact value counts") {
    RatMat g{{Q(1, 2), Q(0)}, {Q(0), Q(3, 2)}};
    auto s = short_vectors(make_gram(g), 2);
    // x^2/2 + 3y^2/2 <= 2: (1,0),(2,0),(0,1),(1,1),(-1,1) pairs
    CHECK(s.vectors.size() == 5);
    CHECK(s.counts.at(Q(1, 2)) == 1);
    CHECK(s.counts.at(Q(2)) == 3);
    CHECK(represents(RatMat{{Q(2), Q(1)}, {Q(1), Q(2)}}, Q(2)));
    CHECK_FALSE(represents(RatMat{{Q(2), Q(1)}, {Q(1), Q(2)}}, Q(1)));
}

TEST_CASE("kronecker symbol") {
    for (long n = 1; n < 30; ++n) CHECK(kronecker(1, n) == 1);
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(3, 5) == -1);
    for (long p : {3L, 5L, 7L, 11L, 13L, 101L})
        for (long a = -20; a <= 20; ++a) CHECK(kronecker(a, p) == oracle::legendre(a, p));
}

TEST_CASE("hilbert symbols") {
    CHECK(hilbert_symbol(Q(-1), Q(-1), 0L) == -1);
    CHECK(hilbert_symbol(Q(-1), Q(-1), 2L) == -1);
    CHECK(hilbert_symbol(Q(-1), Q(-1), 3L) == 1);
    CHECK_THROWS_AS(hilbert_symbol(Q(2), Q(3), 6L), ArgumentError);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-60, 60);
    for (int t = 0; t < 200; ++t) {
        Q a(d(rng)), b(d(rng));
        if (a == 0 || b == 0) continue;
        if (t % 3 == 0) a /= 7;
        int prod = hilbert_symbol_infinity(a, b);
        Z ab = a.get_num() * a.get_den() * b.get_num() * b.get_den() * 2;
        for (auto& [p, e] : factor(abs(ab))) {
            CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
            prod *= hilbert_symbol(a, b, p);
        }
        CHECK(prod == 1);
    }
}

TEST_CASE("constrained divisor sums") {
    CHECK(divisor_sum_constrained(1, 5, 7) == 1);
    CHECK(divisor_sum_constrained(2, 11, 1) == 3);
    CHECK(divisor_sum_constrained(6, 2, 3) == oracle::constrained_sigma(6, 2, 3));
    for (long n = 1; n <= 60; ++n)
        for (long a : {1L, 2L, 3L, 11L})
            for (long b : {1L, 2L, 5L}) {
                if (oracle::gcd(a, b) != 1) continue;
                CHECK(divisor_sum_constrained(n, a, b) == oracle::constrained_sigma(n, a, b));
            }
    for (long m = 1; m <= 12; ++m)
        for (long n = 1; n <= 12; ++n)
            if (oracle::gcd(m, n) == 1)
                CHECK(divisor_sum_constrained(m * n, 2, 3) ==
                      divisor_sum_constrained(m, 2, 3) * divisor_sum_constrained(n, 2, 3));
}

TEST_CASE("factorization") {
    CHECK(factor(1).empty());
    auto f = factor(121);
    REQUIRE(f.size() == 1);
    CHECK(f[0].first == 11);
    CHECK(f[0].second == 2);
    Z n = Z(1000003) * 7;
    Z back = 1;
    for (auto& [p, e] : factor(n)) {
        CHECK(is_prime(p));
        for (unsigned k = 0; k < e; ++k) back *= p;
    }
    CHECK(back == n);
    Z big = Z("1000000007") * Z("998244353");
    auto g = factor(big);
    REQUIRE(g.size() == 2);
    CHECK(g[0].first * g[1].first == big);
    CHECK_THROWS(factor(0));
}

TEST_CASE("polynomial and matrix helpers") {
    Poly a = poly_from_ints({-1, 0, 1});  // x^2 - 1
    Poly b = poly_from_ints({1, 1});
    auto [q, r] = poly_divmod(a, b);
    CHECK(q == poly_from_ints({-1, 1}));
    CHECK(r.empty());
    CHECK(poly_radical(poly_pow(b, 3)) == b);
    RatMat m{{Q(2), Q(1)}, {Q(1), Q(2)}};
    CHECK(charpoly(m) == poly_from_ints({3, -4, 1}));
    CHECK(mat_poly_eval(charpoly(m), m) == RatMat(2, 2));
    CHECK(inverse(m) * m == RatMat::identity(2));
    IntMat k{{1, 2}, {2, 4}};
    CHECK(kernel_dim_mod_p(k, 5) == 1);
    CHECK(kernel_dim_mod_p(IntMat{{1, 0}, {0, 5}}, 5) == 1);
}
