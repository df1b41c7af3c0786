#pragma once

#include "qmf/algebra.hpp"

#include <map>
#include <optional>

namespace qmf {

struct ParityError : Error {
    using Error::Error;
};
struct LevelError : Error {
    using Error::Error;
};

enum class EType { Unramified, Ramified };
enum class LocalKind { SplitEichler, RamifiedUnramifiedQuadratic, RamifiedRamifiedQuadratic };

const char* etype_name(EType e);
const char* local_kind_name(LocalKind k);

struct LocalOrderType {
    Z p;
    LocalKind kind = LocalKind::SplitEichler;
    unsigned r = 0;
    std::optional<Quat> omega;  // embedded quadratic generator at ramified primes
    unsigned t = 0;             // t(E/F) for dyadic ramified E when determined, else 0
};

// Per-prime choice of quadratic type at p | D. `variant` picks among ramified E.
struct ETypeChoice {
    EType etype = EType::Unramified;
    unsigned variant = 0;
};
using ETypeChoices = std::map<Z, ETypeChoice>;

struct MaximalData {
    AlgebraPtr algebra;
    Lattice omax;
};
using MaximalPtr = std::shared_ptr<const MaximalData>;
MaximalPtr maximal_data(const Z& D);

struct Order {
    MaximalPtr base;
    Lattice lattice;
    Z level;
    Z n1 = 1, n2 = 1, m = 1;  // level = n1 * n2 * m
    std::vector<LocalOrderType> local;  // one per p | level, increasing p
    ETypeChoices choices;

    const QuatAlgebra& algebra() const { return *base->algebra; }
    Z disc() const { return base->algebra->disc; }
    const LocalOrderType* local_at(const Z& p) const;
    std::string serialize() const;
};

struct TwoSidedIdeal {
    Z p;
    Lattice lattice;
};

TwoSidedIdeal two_sided_prime(const QuatAlgebra& A, const Lattice& omax, const Z& p);
// P^k as a lattice (P^2 = p Omax).
Lattice prime_power(const Lattice& omax, const TwoSidedIdeal& P, unsigned k);

// Generator of the embedded quadratic order used for O_r(E).
Quat find_quadratic_generator(const QuatAlgebra& A, const Lattice& omax, const TwoSidedIdeal& P,
                              EType etype, unsigned variant);
// Z + Z w + P^{r-1}, for any r >= 1 (no parity restriction).
Lattice special_lattice(const QuatAlgebra& A, const Lattice& omax, const TwoSidedIdeal& P,
                        const Quat& omega, unsigned r);
// O_r(E); unramified etype requires odd r.
Lattice special_order(const QuatAlgebra& A, const Lattice& omax, const Z& p, unsigned r, EType etype,
                      unsigned variant = 0);
Lattice eichler_order(const QuatAlgebra& A, const Lattice& omax, const Z& M);
// Local Eichler condition at q^r: {x in omax : (1-e) x e in q^r omax}.
Lattice eichler_local(const QuatAlgebra& A, const Lattice& omax, const Z& q, unsigned r);

// Default choices: unramified where v_p(N) is odd, ramified otherwise.
Order build_order(const Z& D, const Z& N, const ETypeChoices& choices = {});

struct SuperLevel {
    Z level;
    Z multiplicity;
};
std::vector<SuperLevel> superorder_levels(const Order& O);
// The special order of level N' used for the new/old recursion (same E choices).
Order superorder(const Order& O, const Z& level);

// [Omax^x : O^x] product over p | D of local unit indices, times Eichler factor.
Q mass_from_local_indices(const Order& O);

}  // namespace qmf
