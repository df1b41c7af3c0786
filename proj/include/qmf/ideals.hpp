#pragma once

#include "qmf/order.hpp"

namespace qmf {

struct BudgetError : Error {
    using Error::Error;
};
struct MassMismatch : Error {
    using Error::Error;
};

// Locally principal right ideal of a fixed order; the order is held by the caller.
struct RightIdeal {
    Lattice lattice;
    Q norm = 1;
};

RightIdeal unit_ideal(const Order& O);
Q ideal_norm(const QuatAlgebra& A, const Lattice& I);
Lattice ideal_conj(const QuatAlgebra& A, const Lattice& I);
Lattice ideal_product(const QuatAlgebra& A, const Lattice& I, const Lattice& J);
// conj(I) / N(I); its product with I is the left order of I.
Lattice ideal_inverse(const QuatAlgebra& A, const Lattice& I);
// I * O subset of I.
bool is_right_ideal(const QuatAlgebra& A, const Lattice& I, const Lattice& O);

// The q+1 right ideals J in I with I/J = (Z/q)^2, q prime to the level.
std::vector<RightIdeal> q_neighbors(const Order& O, const RightIdeal& I, const Z& q);

// I and J (same right order) are in the same class.
bool is_equivalent(const QuatAlgebra& A, const RightIdeal& I, const RightIdeal& J);

// Number of units of a definite order, divided by 2.
Z unit_order(const QuatAlgebra& A, const Lattice& O);

Q mass_eichler(const Z& D, const Z& M);

struct ClassSet {
    Order order;
    std::vector<RightIdeal> ideals;  // ideals[0] is the order itself
    std::vector<Lattice> left_orders;
    std::vector<Z> units;            // e_i
    std::vector<Z> primes;           // neighbor primes used
    Q mass;

    std::size_t size() const { return ideals.size(); }
    const QuatAlgebra& algebra() const { return order.algebra(); }
};

struct ClassSetOptions {
    std::size_t max_classes = 5000;
    // Require a first prime for the neighbor walk (0 = smallest prime not dividing the level).
    Z first_prime = 0;
};

// Neighbor walk over as many primes as needed until the unit weights add up to the mass.
ClassSet class_set(const Order& O, const ClassSetOptions& opt = {});

std::string serialize(const ClassSet& cs);

}  // namespace qmf
