#pragma once

#include "qmf/arith.hpp"

#include <string>

namespace qmf {

// Full-rank lattice in Q^n stored as (integer HNF basis) / den, canonical:
// den > 0 and the gcd of den with all basis entries is 1. Rows are basis vectors.
class Lattice {
public:
    Lattice() = default;
    static Lattice from_rows(const std::vector<QVec>& gens);
    static Lattice from_int(const IntMat& rows, const Z& den);
    static Lattice standard(std::size_t n);

    std::size_t dim() const { return basis_.cols; }
    const IntMat& numerators() const { return basis_; }
    const Z& denominator() const { return den_; }
    QVec basis_vector(std::size_t i) const;
    std::vector<QVec> basis() const;
    RatMat basis_matrix() const;

    bool contains(const QVec& v) const;
    bool contains(const Lattice& o) const;
    // Coordinates of v in this basis (rational in general).
    QVec coordinates(const QVec& v) const;
    Q covolume() const;  // |det| of the basis
    // Index [this : sub] for sub contained in this.
    Z index_of(const Lattice& sub) const;

    Lattice dual() const;  // w.r.t. the standard dot product
    Lattice scaled(const Q& s) const;

    bool operator==(const Lattice& o) const { return den_ == o.den_ && basis_ == o.basis_; }
    bool operator!=(const Lattice& o) const { return !(*this == o); }
    bool operator<(const Lattice& o) const;
    std::string serialize() const;

private:
    IntMat basis_;
    Z den_ = 1;
    void canonicalize();
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);
// {x in Q^n : m x in Z^k} for a k x n rational matrix of full column rank.
Lattice integral_preimage(const RatMat& m);
// {x in base : f(coords of x) in modulus * Z^n}, f given on base coordinates as an integer matrix.
Lattice sublattice_mod(const Lattice& base, const IntMat& f, const Z& modulus);

}  // namespace qmf
