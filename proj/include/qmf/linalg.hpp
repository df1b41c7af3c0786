#pragma once

#include "qmf/arith.hpp"

namespace qmf {

// Polynomials over Q, coefficients low degree first; zero polynomial is empty.
using Poly = std::vector<Q>;

void poly_trim(Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, unsigned e);
// Returns (quotient, remainder).
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_gcd(const Poly& a, const Poly& b);  // monic
Poly poly_derivative(const Poly& a);
Poly poly_radical(const Poly& a);  // product of distinct irreducible factors, monic
Poly poly_monic(const Poly& a);
int poly_degree(const Poly& a);
Poly poly_compose_neg(const Poly& a);  // p(-x)
bool poly_is_integral(const Poly& a);
std::string poly_to_string(const Poly& p, const char* var = "x");
Poly poly_from_ints(const std::vector<long>& c);

// Exact linear algebra over Q.
RatMat mat_add(const RatMat& a, const RatMat& b);
RatMat mat_scale(const RatMat& a, const Q& s);
RatMat mat_sub(const RatMat& a, const RatMat& b);
RatMat mat_poly_eval(const Poly& p, const RatMat& a);

struct Rref {
    RatMat r;
    std::vector<std::size_t> pivots;
};
Rref rref(const RatMat& m);
std::size_t rank(const RatMat& m);
// Basis of {x : m x = 0} as the columns of the returned matrix (cols = nullity).
RatMat kernel(const RatMat& m);
RatMat inverse(const RatMat& m);
Q det(const RatMat& m);
RatMat hstack(const RatMat& a, const RatMat& b);
RatMat column_block(const RatMat& m, std::size_t c0, std::size_t c1);
// Column space basis (RREF of the transpose, so canonical).
RatMat column_basis(const RatMat& m);
// X with a*s = s*x for s of full column rank; throws if span(s) is not a-stable.
RatMat restrict_to(const RatMat& a, const RatMat& s);
// Characteristic polynomial det(x - m) via Hessenberg reduction.
Poly charpoly(const RatMat& m);

// Integer basis (rows) of span(columns of s) intersected with Z^n.
IntMat saturated_basis(const RatMat& s);
// Dimension of the common kernel mod p of the integer matrices (stacked vertically).
std::size_t kernel_dim_mod_p(const IntMat& m, long p);
std::size_t rank_mod_p(const IntMat& m, long p);
// Basis of the kernel mod p (vectors with entries in [0,p)).
std::vector<std::vector<long>> kernel_mod_p(const IntMat& m, long p);

}  // namespace qmf
