#pragma once

#include "qmf/arith.hpp"
#include "qmf/lattice.hpp"

#include <array>
#include <memory>

namespace qmf {

struct InvalidDiscriminant : Error {
    using Error::Error;
};

// Element x + y i + z j + w k.
using Quat = std::array<Q, 4>;

// Definite algebra (a,b | Q): i^2 = a, j^2 = b, k = ij = -ji.
struct QuatAlgebra {
    Z a, b;
    Z disc;
    std::vector<Z> ramified;  // finite primes, increasing

    Quat mul(const Quat& x, const Quat& y) const;
    Q norm(const Quat& x) const;
    Q trace(const Quat& x) const { return 2 * x[0]; }
    Quat conj(const Quat& x) const { return {x[0], -x[1], -x[2], -x[3]}; }
    // Gram matrix of the norm form in the (1,i,j,k) basis: diag(1, -a, -b, ab).
    RatMat norm_gram() const;
    // Matrix of y -> x*y (columns = images of basis), and y -> y*x.
    RatMat left_mult(const Quat& x) const;
    RatMat right_mult(const Quat& x) const;
    std::string describe() const;
};

using AlgebraPtr = std::shared_ptr<const QuatAlgebra>;

// Primes p with hilbert_symbol(a,b,p) = -1, checked at every p | 2ab.
std::vector<Z> ramified_primes(const Z& a, const Z& b);
AlgebraPtr construct_definite(const Z& D);

Quat to_quat(const QVec& v);
QVec to_vec(const Quat& q);
Quat quat_add(const Quat& x, const Quat& y);
Quat quat_sub(const Quat& x, const Quat& y);
Quat quat_scale(const Quat& x, const Q& s);
Quat quat_one();

// Norm form of the lattice: x^t G x = N(sum x_i b_i).
RatMat norm_gram(const QuatAlgebra& A, const Lattice& L);
// d with d^2 = |det(tr(b_i conj(b_j)))|; throws if not a perfect square.
Z reduced_discriminant(const QuatAlgebra& A, const Lattice& L);
// Products b_i * c_j of the bases.
Lattice lattice_product(const QuatAlgebra& A, const Lattice& I, const Lattice& J);
Lattice lattice_conj(const QuatAlgebra& A, const Lattice& I);
// {x : I x in I} and {x : x I in I}.
Lattice right_order_of(const QuatAlgebra& A, const Lattice& I);
Lattice left_order_of(const QuatAlgebra& A, const Lattice& I);
// 1 in L and L closed under multiplication.
bool is_order(const QuatAlgebra& A, const Lattice& L);
// Positive generator of the Z-module generated by {N(x) : x in L}.
Q lattice_norm(const QuatAlgebra& A, const Lattice& L);

// {x in O : N(x) = 0 mod p} for p | disc(O) with O maximal at p; in general the trace-pairing
// kernel mod p, cut by N = 0 mod 2 when p = 2.
Lattice trace_radical(const QuatAlgebra& A, const Lattice& O, const Z& p);

// A maximal order, certified by reduced discriminant = disc.
Lattice maximal_order(const QuatAlgebra& A);

}  // namespace qmf
