#include "qmf/algebra.hpp"

#include <sstream>

#include "qmf/linalg.hpp"

namespace qmf {

Quat QuatAlgebra::mul(const Quat& x, const Quat& y) const {
    const Q qa(a), qb(b), ab(a * b);
    return {x[0] * y[0] + qa * x[1] * y[1] + qb * x[2] * y[2] - ab * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - qb * x[2] * y[3] + qb * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + qa * x[1] * y[3] - qa * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

Q QuatAlgebra::norm(const Quat& x) const {
    return x[0] * x[0] - Q(a) * x[1] * x[1] - Q(b) * x[2] * x[2] + Q(a * b) * x[3] * x[3];
}

RatMat QuatAlgebra::norm_gram() const {
    RatMat g(4, 4);
    g(0, 0) = 1;
    g(1, 1) = Q(-a);
    g(2, 2) = Q(-b);
    g(3, 3) = Q(a * b);
    return g;
}

namespace {

Quat basis_elt(int k) {
    Quat e{Q(0), Q(0), Q(0), Q(0)};
    e[k] = 1;
    return e;
}

Q qgcd(const Q& x, const Q& y) {
    if (sgn(x) == 0) return abs(y);
    if (sgn(y) == 0) return abs(x);
    Z n, d;
    mpz_gcd(n.get_mpz_t(), x.get_num_mpz_t(), y.get_num_mpz_t());
    mpz_lcm(d.get_mpz_t(), x.get_den_mpz_t(), y.get_den_mpz_t());
    Q r(n, d);
    r.canonicalize();
    return r;
}

}  // namespace

RatMat QuatAlgebra::left_mult(const Quat& x) const {
    RatMat m(4, 4);
    for (int k = 0; k < 4; ++k) {
        Quat c = mul(x, basis_elt(k));
        for (int i = 0; i < 4; ++i) m(i, k) = c[i];
    }
    return m;
}

RatMat QuatAlgebra::right_mult(const Quat& x) const {
    RatMat m(4, 4);
    for (int k = 0; k < 4; ++k) {
        Quat c = mul(basis_elt(k), x);
        for (int i = 0; i < 4; ++i) m(i, k) = c[i];
    }
    return m;
}

std::string QuatAlgebra::describe() const {
    std::ostringstream os;
    os << "(" << a.get_str() << "," << b.get_str() << ")";
    return os.str();
}

Quat to_quat(const QVec& v) { return {v[0], v[1], v[2], v[3]}; }
QVec to_vec(const Quat& q) { return QVec(q.begin(), q.end()); }
Quat quat_add(const Quat& x, const Quat& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]}; }
Quat quat_sub(const Quat& x, const Quat& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]}; }
Quat quat_scale(const Quat& x, const Q& s) { return {x[0] * s, x[1] * s, x[2] * s, x[3] * s}; }
Quat quat_one() { return {Q(1), Q(0), Q(0), Q(0)}; }

std::vector<Z> ramified_primes(const Z& a, const Z& b) {
    std::vector<Z> out;
    for (auto& [p, e] : factor(Z(2) * a * b))
        if (hilbert_symbol(Q(a), Q(b), p) == -1) out.push_back(p);
    return out;
}

AlgebraPtr construct_definite(const Z& D) {
    if (D < 1 || !is_squarefree(D)) throw InvalidDiscriminant("discriminant must be squarefree and positive");
    auto fac = factor(D);
    if (fac.size() % 2 == 0) throw InvalidDiscriminant("discriminant must have an odd number of prime factors");
    std::vector<Z> want;
    for (auto& [p, e] : fac) want.push_back(p);

    auto check = [&](const Z& a, const Z& b) {
        return a < 0 && b < 0 && ramified_primes(a, b) == want;
    };
    Z a = 0, b = 0;
    if (fac.size() == 1) {
        const Z& p = want[0];
        Z r8 = p % 8;
        if (p == 2) {
            a = -1, b = -1;
        } else if (p % 4 == 3) {
            a = -1, b = -p;
        } else if (r8 == 5) {
            a = -2, b = -p;
        } else {
            Z q = 3;
            while (!(q % 4 == 3 && kronecker(p, q) == -1)) q = next_prime(q);
            a = -p, b = -q;
        }
        if (!check(a, b)) throw Error("closed-form presentation failed Hilbert symbol check");
    } else {
        bool found = false;
        for (long t = 2; t < 20000 && !found; ++t)
            for (long x = 1; x < t && !found; ++x)
                if (check(Z(-x), Z(-(t - x)))) {
                    a = -x, b = -(t - x);
                    found = true;
                }
        if (!found) throw Error("no presentation found for discriminant " + D.get_str());
    }
    auto A = std::make_shared<QuatAlgebra>();
    A->a = a;
    A->b = b;
    A->disc = D;
    A->ramified = want;
    return A;
}

RatMat norm_gram(const QuatAlgebra& A, const Lattice& L) {
    RatMat b = L.basis_matrix();
    return b * A.norm_gram() * b.transpose();
}

Z reduced_discriminant(const QuatAlgebra& A, const Lattice& L) {
    Q d = abs(det(norm_gram(A, L))) * 16;
    if (d.get_den() != 1) throw Error("reduced discriminant: lattice is not integral");
    Z r;
    if (!mpz_perfect_square_p(d.get_num_mpz_t())) throw Error("reduced discriminant: not a square");
    mpz_sqrt(r.get_mpz_t(), d.get_num_mpz_t());
    return r;
}

Lattice lattice_product(const QuatAlgebra& A, const Lattice& I, const Lattice& J) {
    std::vector<QVec> gens;
    auto bi = I.basis(), bj = J.basis();
    for (auto& x : bi)
        for (auto& y : bj) gens.push_back(to_vec(A.mul(to_quat(x), to_quat(y))));
    return Lattice::from_rows(gens);
}

Lattice lattice_conj(const QuatAlgebra& A, const Lattice& I) {
    std::vector<QVec> gens;
    for (auto& x : I.basis()) gens.push_back(to_vec(A.conj(to_quat(x))));
    return Lattice::from_rows(gens);
}

namespace {

// {x : mult(b) x in I for all basis b}, mult = left or right multiplication by b
Lattice multiplier(const QuatAlgebra& A, const Lattice& I, bool left) {
    RatMat binv_t = inverse(I.basis_matrix()).transpose();  // v -> coordinates
    RatMat stacked(16, 4);
    auto basis = I.basis();
    for (std::size_t k = 0; k < 4; ++k) {
        Quat b = to_quat(basis[k]);
        RatMat m = binv_t * (left ? A.left_mult(b) : A.right_mult(b));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) stacked(4 * k + i, j) = m(i, j);
    }
    return integral_preimage(stacked);
}

}  // namespace

Lattice right_order_of(const QuatAlgebra& A, const Lattice& I) { return multiplier(A, I, true); }
Lattice left_order_of(const QuatAlgebra& A, const Lattice& I) { return multiplier(A, I, false); }

bool is_order(const QuatAlgebra& A, const Lattice& L) {
    if (!L.contains(to_vec(quat_one()))) return false;
    auto b = L.basis();
    for (auto& x : b)
        for (auto& y : b)
            if (!L.contains(to_vec(A.mul(to_quat(x), to_quat(y))))) return false;
    return true;
}

Q lattice_norm(const QuatAlgebra& A, const Lattice& L) {
    RatMat g = norm_gram(A, L);
    Q r = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        r = qgcd(r, g(i, i));
        for (std::size_t j = i + 1; j < 4; ++j) r = qgcd(r, 2 * g(i, j));
    }
    if (sgn(r) == 0) throw ArgumentError("norm of the zero lattice");
    return r;
}

namespace {

IntMat trace_matrix(const QuatAlgebra& A, const Lattice& L) {
    RatMat g = norm_gram(A, L);
    IntMat t(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Q v = 2 * g(i, j);
            if (v.get_den() != 1) throw Error("trace form not integral");
            t(i, j) = v.get_num();
        }
    return t;
}

bool trace_form_integral(const QuatAlgebra& A, const Lattice& L) {
    RatMat g = norm_gram(A, L);
    for (std::size_t i = 0; i < 4; ++i) {
        if (g(i, i).get_den() != 1) return false;
        for (std::size_t j = i + 1; j < 4; ++j)
            if (Q(2 * g(i, j)).get_den() != 1) return false;
    }
    return true;
}

// Ring generated by L and x, or nothing if it is not integral.
bool ring_closure(const QuatAlgebra& A, const Lattice& L, const Quat& x, Lattice& out) {
    std::vector<QVec> g = L.basis();
    g.push_back(to_vec(x));
    Lattice M = Lattice::from_rows(g);
    for (int iter = 0; iter < 64; ++iter) {
        if (!trace_form_integral(A, M)) return false;
        Lattice next = lattice_sum(M, lattice_product(A, M, M));
        if (next == M) {
            out = M;
            return true;
        }
        M = next;
    }
    return false;
}

}  // namespace

Lattice trace_radical(const QuatAlgebra& A, const Lattice& O, const Z& p) {
    Lattice K = sublattice_mod(O, trace_matrix(A, O), p);
    if (p != 2) return K;
    RatMat g = norm_gram(A, K);
    IntMat f(1, 4);
    for (std::size_t i = 0; i < 4; ++i) f(0, i) = g(i, i).get_num();
    return sublattice_mod(K, f, p);
}

namespace {

bool enlarge_at(const QuatAlgebra& A, const Lattice& O, const Z& p, Lattice& out) {
    Lattice J = trace_radical(A, O, p);
    Lattice R = right_order_of(A, J);
    if (R != O && R.contains(O) && is_order(A, R)) {
        out = R;
        return true;
    }
    // hereditary or stuck: search x = y/p with y in O/pO
    long pp = p.get_si();
    auto basis = O.basis();
    std::vector<long> c(4, 0);
    for (long idx = 1; idx < pp * pp * pp * pp; ++idx) {
        long t = idx;
        for (int k = 3; k >= 0; --k) {
            c[k] = t % pp;
            t /= pp;
        }
        Quat x{Q(0), Q(0), Q(0), Q(0)};
        for (int k = 0; k < 4; ++k)
            if (c[k]) x = quat_add(x, quat_scale(to_quat(basis[k]), Q(c[k]) / pp));
        if (A.trace(x).get_den() != 1 || A.norm(x).get_den() != 1) continue;
        if (ring_closure(A, O, x, out)) return true;
    }
    return false;
}

}  // namespace

Lattice maximal_order(const QuatAlgebra& A) {
    Lattice O = Lattice::standard(4);
    Z d = reduced_discriminant(A, O);
    for (auto& [p, e] : factor(d)) {
        unsigned target = (A.disc % p == 0) ? 1 : 0;
        while (valuation(d, p) > target) {
            Lattice bigger;
            if (!enlarge_at(A, O, p, bigger)) throw Error("maximal order: no enlargement found at " + p.get_str());
            O = bigger;
            d = reduced_discriminant(A, O);
        }
    }
    if (d != A.disc) throw Error("maximal order certificate failed");
    return O;
}

}  // namespace qmf
