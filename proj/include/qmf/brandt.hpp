#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "qmf/ideals.hpp"
#include "qmf/linalg.hpp"

namespace qmf {

struct ConsistencyError : Error {
    using Error::Error;
};

// Linear combination sum c * A_n of Brandt matrices.
using HeckeOp = std::vector<std::pair<Q, long>>;
std::string hecke_op_name(const HeckeOp& t);

// Brandt matrices of one class set. Representation counts are cached and extended on demand.
class BrandtModule {
public:
    explicit BrandtModule(ClassSet cs, unsigned jobs = 1);

    const ClassSet& class_set() const { return cs_; }
    std::size_t size() const { return cs_.size(); }
    const Z& level() const { return cs_.order.level; }

    // A_n; A_0 is diag(1/e_i).
    RatMat matrix(long n) const;
    RatMat op(const HeckeOp& t) const;
    // Number of +-pairs of norm n in I_i conj(I_j), scaled so the minimum possible value is 1.
    Z pair_count(std::size_t i, std::size_t j, long n) const;

    // Vectors mu(N(I_i)) for the admissible quadratic characters mu; first one is all ones.
    const std::vector<QVec>& eisenstein_basis() const;
    // Characters as Kronecker discriminants (1 = trivial), parallel to eisenstein_basis().
    const std::vector<Z>& eisenstein_characters() const;
    // Columns span the orthogonal complement of the Eisenstein space for sum x_i y_i / e_i.
    const RatMat& cusp_space() const;

    Poly cusp_charpoly(const HeckeOp& t) const;
    Poly cusp_charpoly(long n) const { return cusp_charpoly(HeckeOp{{Q(1), n}}); }

private:
    ClassSet cs_;
    unsigned jobs_;
    mutable std::mutex mu_;
    mutable long bound_ = 0;
    mutable std::vector<std::vector<std::vector<std::size_t>>> counts_;  // [i][j][n], i <= j
    mutable std::vector<QVec> eis_;
    mutable std::vector<Z> eis_chars_;
    mutable RatMat cusp_;
    mutable bool eis_done_ = false, cusp_done_ = false;

    void ensure(long n) const;
};

// A_n for n >= 0 directly from a class set.
RatMat brandt_matrix(const ClassSet& cs, long n, unsigned jobs = 1);

// A_n * 1 = C(n, E_{2,D,M}) * 1 for gcd(n, N) = 1.
bool eisenstein_row_check(const BrandtModule& m, long n);
// A_{p^{r+1}} = A_p A_{p^r} - p A_{p^{r-1}} for p prime to the level.
bool hecke_recurrence_check(const BrandtModule& m, long p, unsigned r);
// A_{mn} = A_m A_n for coprime m, n.
bool hecke_multiplicativity_check(const BrandtModule& m, long a, long b);

// Caches Brandt modules of the orders met during the new/old recursion.
class HeckeContext {
public:
    explicit HeckeContext(unsigned jobs = 1) : jobs_(jobs) {}

    const BrandtModule& module(const Order& O);
    // Characteristic polynomial of t on the level-new cuspidal part, from
    // cusp(O) = prod over superorder levels N' of new(N')^{m(N')} by exact division.
    // Operators not prime to the level are restricted to new_subspace instead.
    Poly new_charpoly(const Order& O, const HeckeOp& t);
    Poly new_charpoly(const Order& O, long n) { return new_charpoly(O, HeckeOp{{Q(1), n}}); }
    // Basis (columns) of the level-new cuspidal subspace, cut out by unramified operators only.
    RatMat new_subspace(const Order& O);
    // The operator used to separate new from old in new_subspace.
    HeckeOp separating_op(const Order& O);

private:
    unsigned jobs_;
    std::mutex mu_;
    std::map<std::string, std::unique_ptr<BrandtModule>> modules_;
    std::map<std::pair<std::string, std::string>, Poly> new_cache_;
    std::map<std::string, HeckeOp> sep_cache_;

    static std::string key(const Order& O);
};

Poly new_charpoly(const Z& D, const Z& N, long n, const ETypeChoices& choices = {});

// A_{p^m} vanishes on the level-new cuspidal subspace.
bool ramified_hecke_check(HeckeContext& ctx, const Order& O, const Z& p, unsigned m);

// Old forms whose conductor exponent c at p is >= 3 are killed by A_{p^m} once m >= v_p(N) - c - 1.
// One entry per applicable superorder level. The isotypic piece is cut out by an unramified
// operator; a level whose eigenvalues also occur at another level is skipped, not failed.
struct OldVanishing {
    Z level;
    unsigned c = 0;
    std::size_t dim = 0;
    bool skipped = false;
    bool vanishes = true;
};
std::vector<OldVanishing> ramified_old_vanishing_check(HeckeContext& ctx, const Order& O, const Z& p, unsigned m);

struct HeckeModuleReport {
    Z disc, level;
    std::size_t dim_full = 0, dim_cusp = 0, dim_eis = 0;
    std::map<long, Poly> cusp_charpolys;
    struct NewPart {
        Z level;
        Z multiplicity;
        std::map<long, Poly> charpolys;
    };
    std::vector<NewPart> new_parts;
};

HeckeModuleReport hecke_report(HeckeContext& ctx, const Order& O, const std::vector<long>& ns);

}  // namespace qmf
