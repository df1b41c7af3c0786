#include "qmf/order.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "qmf/linalg.hpp"

namespace qmf {

const char* etype_name(EType e) { return e == EType::Unramified ? "unramified" : "ramified"; }

const char* local_kind_name(LocalKind k) {
    switch (k) {
        case LocalKind::SplitEichler: return "split-eichler";
        case LocalKind::RamifiedUnramifiedQuadratic: return "ramified-unramified-quadratic";
        case LocalKind::RamifiedRamifiedQuadratic: return "ramified-ramified-quadratic";
    }
    return "?";
}

MaximalPtr maximal_data(const Z& D) {
    static std::mutex mu;
    static std::map<Z, MaximalPtr> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(D);
        if (it != cache.end()) return it->second;
    }
    auto md = std::make_shared<MaximalData>();
    md->algebra = construct_definite(D);
    md->omax = maximal_order(*md->algebra);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(D, md);
    return it->second;
}

const LocalOrderType* Order::local_at(const Z& p) const {
    for (auto& l : local)
        if (l.p == p) return &l;
    return nullptr;
}

std::string Order::serialize() const {
    std::ostringstream os;
    os << "algebra " << algebra().a.get_str() << " " << algebra().b.get_str() << "\n";
    os << "disc " << disc().get_str() << "\n";
    os << "level " << level.get_str() << "\n";
    os << "basis " << lattice.serialize() << "\n";
    return os.str();
}

namespace {

Quat combo(const std::vector<QVec>& basis, const std::vector<long>& c) {
    Quat x{Q(0), Q(0), Q(0), Q(0)};
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (c[k]) x = quat_add(x, quat_scale(to_quat(basis[k]), Q(c[k])));
    return x;
}

// visits coefficient vectors in [0,s)^4 in lexicographic order, skipping zero
template <class F>
bool scan_box(long s, F&& f) {
    std::vector<long> c(4, 0);
    for (long idx = 1; idx < s * s * s * s; ++idx) {
        long t = idx;
        for (int k = 3; k >= 0; --k) {
            c[k] = t % s;
            t /= s;
        }
        if (f(c)) return true;
    }
    return false;
}

Z as_int(const Q& q) {
    if (q.get_den() != 1) throw Error("expected an integer");
    return q.get_num();
}

// square class key of a nonzero integer at p: (valuation parity, unit class)
std::pair<unsigned, long> square_class(const Z& d, const Z& p) {
    unsigned v = valuation(d, p);
    Z pv;
    mpz_pow_ui(pv.get_mpz_t(), p.get_mpz_t(), v);
    Z u = d / pv;
    if (p == 2) {
        Z r = u % 8;
        if (r < 0) r += 8;
        return {v % 2, r.get_si()};
    }
    return {v % 2, kronecker(u, p)};
}

}  // namespace

TwoSidedIdeal two_sided_prime(const QuatAlgebra& A, const Lattice& omax, const Z& p) {
    if (A.disc % p != 0) throw ArgumentError("two-sided prime requires p | D");
    return TwoSidedIdeal{p, trace_radical(A, omax, p)};
}

Lattice prime_power(const Lattice& omax, const TwoSidedIdeal& P, unsigned k) {
    if (k == 0) return omax;
    Z pk;
    mpz_pow_ui(pk.get_mpz_t(), P.p.get_mpz_t(), k / 2);
    if (k % 2 == 0) return omax.scaled(Q(pk));
    return P.lattice.scaled(Q(pk));
}

Quat find_quadratic_generator(const QuatAlgebra& A, const Lattice& omax, const TwoSidedIdeal& P,
                              EType etype, unsigned variant) {
    const Z& p = P.p;
    Quat found{};
    if (etype == EType::Unramified) {
        auto basis = omax.basis();
        bool ok = scan_box(p.get_si(), [&](const std::vector<long>& c) {
            Quat x = combo(basis, c);
            Z t = as_int(A.trace(x)), n = as_int(A.norm(x));
            bool irreducible;
            if (p == 2)
                irreducible = mpz_odd_p(t.get_mpz_t()) && mpz_odd_p(n.get_mpz_t());
            else
                irreducible = kronecker(t * t - 4 * n, p) == -1;
            if (irreducible) found = x;
            return irreducible;
        });
        if (!ok) throw Error("no unramified quadratic generator found");
        return found;
    }
    auto basis = P.lattice.basis();
    Lattice pO = omax.scaled(Q(p));
    std::vector<std::pair<unsigned, long>> classes;
    long s = std::max<long>(p.get_si(), 4);
    bool ok = scan_box(s, [&](const std::vector<long>& c) {
        Quat x = combo(basis, c);
        if (pO.contains(to_vec(x))) return false;
        Z t = as_int(A.trace(x)), n = as_int(A.norm(x));
        if (valuation(n, p) != 1) return false;
        auto key = square_class(t * t - 4 * n, p);
        std::size_t idx = 0;
        while (idx < classes.size() && classes[idx] != key) ++idx;
        if (idx == classes.size()) classes.push_back(key);
        if (idx == variant) {
            found = x;
            return true;
        }
        return false;
    });
    if (!ok) throw ArgumentError("ramified quadratic variant not available");
    return found;
}

Lattice special_lattice(const QuatAlgebra&, const Lattice& omax, const TwoSidedIdeal& P, const Quat& omega,
                        unsigned r) {
    if (r < 1) throw ArgumentError("special order exponent must be >= 1");
    std::vector<QVec> gens = prime_power(omax, P, r - 1).basis();
    gens.push_back(to_vec(quat_one()));
    gens.push_back(to_vec(omega));
    return Lattice::from_rows(gens);
}

Lattice special_order(const QuatAlgebra& A, const Lattice& omax, const Z& p, unsigned r, EType etype,
                      unsigned variant) {
    if (etype == EType::Unramified && r % 2 == 0)
        throw ParityError("unramified quadratic type requires odd exponent");
    TwoSidedIdeal P = two_sided_prime(A, omax, p);
    Quat w = find_quadratic_generator(A, omax, P, etype, variant);
    return special_lattice(A, omax, P, w, r);
}

Lattice eichler_local(const QuatAlgebra& A, const Lattice& omax, const Z& q, unsigned r) {
    if (r == 0) return omax;
    auto basis = omax.basis();
    Quat e{};
    bool ok = scan_box(q.get_si(), [&](const std::vector<long>& c) {
        Quat x = combo(basis, c);
        Z t = as_int(A.trace(x)), n = as_int(A.norm(x));
        Z t1 = (t - 1) % q, n0 = n % q;
        if (sgn(t1) == 0 && sgn(n0) == 0) {
            e = x;
            return true;
        }
        return false;
    });
    if (!ok) throw Error("no idempotent found mod " + q.get_str());
    Z prec;
    mpz_pow_ui(prec.get_mpz_t(), q.get_mpz_t(), r + 1);
    auto reduce = [&](const Quat& x) {
        QVec c = omax.coordinates(to_vec(x));
        Quat y{Q(0), Q(0), Q(0), Q(0)};
        for (std::size_t k = 0; k < 4; ++k) {
            Z ck = as_int(c[k]) % prec;
            if (ck < 0) ck += prec;
            y = quat_add(y, quat_scale(to_quat(basis[k]), Q(ck)));
        }
        return y;
    };
    auto is_idempotent = [&](const Quat& x) {
        QVec c = omax.coordinates(to_vec(quat_sub(A.mul(x, x), x)));
        for (auto& v : c)
            if (as_int(v) % prec != 0) return false;
        return true;
    };
    for (int iter = 0; iter < 64 && !is_idempotent(e); ++iter) {
        Quat e2 = A.mul(e, e), e3 = A.mul(e2, e);
        e = reduce(quat_sub(quat_scale(e2, Q(3)), quat_scale(e3, Q(2))));
    }
    if (!is_idempotent(e)) throw Error("Hensel lifting of idempotent failed");
    Quat one_minus = quat_sub(quat_one(), e);
    IntMat f(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        Quat img = A.mul(A.mul(one_minus, to_quat(basis[k])), e);
        QVec c = omax.coordinates(to_vec(img));
        for (std::size_t i = 0; i < 4; ++i) f(i, k) = as_int(c[i]);
    }
    Z qr;
    mpz_pow_ui(qr.get_mpz_t(), q.get_mpz_t(), r);
    return sublattice_mod(omax, f, qr);
}

Lattice eichler_order(const QuatAlgebra& A, const Lattice& omax, const Z& M) {
    Z g;
    mpz_gcd(g.get_mpz_t(), M.get_mpz_t(), A.disc.get_mpz_t());
    if (g != 1) throw ArgumentError("Eichler level must be coprime to the discriminant");
    Lattice L = omax;
    for (auto& [q, r] : factor(M)) L = lattice_intersection(L, eichler_local(A, omax, q, r));
    return L;
}

Order build_order(const Z& D, const Z& N, const ETypeChoices& choices) {
    if (N < 1) throw LevelError("level must be positive");
    auto md = maximal_data(D);
    const QuatAlgebra& A = *md->algebra;
    for (auto& p : A.ramified)
        if (N % p != 0) throw LevelError("every prime of the discriminant must divide the level");
    for (auto& [p, c] : choices)
        if (D % p != 0) throw LevelError("quadratic type given at a prime not dividing the discriminant");
    Order O;
    O.base = md;
    O.level = N;
    Lattice L = md->omax;
    for (auto& [p, e] : factor(N)) {
        LocalOrderType lt;
        lt.p = p;
        lt.r = e;
        if (D % p == 0) {
            ETypeChoice ch;
            auto it = choices.find(p);
            if (it != choices.end())
                ch = it->second;
            else
                ch.etype = (e % 2 == 1) ? EType::Unramified : EType::Ramified;
            if (e == 1) ch = ETypeChoice{EType::Unramified, 0};
            if (ch.etype == EType::Unramified && e % 2 == 0)
                throw ParityError("unramified quadratic type requires odd exponent at " + p.get_str());
            O.choices[p] = ch;
            TwoSidedIdeal P = two_sided_prime(A, md->omax, p);
            Quat w = find_quadratic_generator(A, md->omax, P, ch.etype, ch.variant);
            lt.omega = w;
            Z pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
            if (ch.etype == EType::Unramified) {
                lt.kind = LocalKind::RamifiedUnramifiedQuadratic;
                O.n1 *= pe;
            } else {
                lt.kind = LocalKind::RamifiedRamifiedQuadratic;
                O.n2 *= pe;
                if (p == 2) {
                    Z t = as_int(A.trace(w)), n = as_int(A.norm(w));
                    lt.t = valuation(t * t - 4 * n, p) - 1;
                }
            }
            if (e > 1) L = lattice_intersection(L, special_lattice(A, md->omax, P, w, e));
        } else {
            lt.kind = LocalKind::SplitEichler;
            Z pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
            O.m *= pe;
            L = lattice_intersection(L, eichler_local(A, md->omax, p, e));
        }
        O.local.push_back(lt);
    }
    O.lattice = L;
    Z d = reduced_discriminant(A, L);
    if (d != N) throw Error("order construction: reduced discriminant " + d.get_str() + " != level " + N.get_str());
    return O;
}

std::vector<SuperLevel> superorder_levels(const Order& O) {
    std::vector<SuperLevel> out{{Z(1), Z(1)}};
    for (auto& lt : O.local) {
        std::vector<SuperLevel> next;
        for (auto& s : out) {
            for (unsigned rp = 0; rp <= lt.r; ++rp) {
                Z mult = s.multiplicity;
                if (lt.kind == LocalKind::SplitEichler) {
                    mult *= (lt.r - rp + 1);
                } else {
                    if (rp == 0) continue;
                    if (lt.kind == LocalKind::RamifiedUnramifiedQuadratic && rp % 2 == 0) continue;
                }
                Z pr;
                mpz_pow_ui(pr.get_mpz_t(), lt.p.get_mpz_t(), rp);
                next.push_back({s.level * pr, mult});
            }
        }
        out = next;
    }
    std::sort(out.begin(), out.end(), [](const SuperLevel& a, const SuperLevel& b) { return a.level > b.level; });
    return out;
}

Order superorder(const Order& O, const Z& level) {
    if (O.level % level != 0) throw LevelError("superorder level must divide the level");
    ETypeChoices ch;
    for (auto& lt : O.local) {
        if (lt.kind == LocalKind::SplitEichler) continue;
        unsigned rp = valuation(level, lt.p);
        if (rp == 0) throw LevelError("superorder level must be divisible by the discriminant");
        ETypeChoice c = O.choices.at(lt.p);
        if (c.etype == EType::Ramified && rp == 1) c = ETypeChoice{EType::Unramified, 0};
        if (c.etype == EType::Unramified && rp % 2 == 0) throw ParityError("inadmissible superorder level");
        ch[lt.p] = c;
    }
    return build_order(O.disc(), level, ch);
}

Q mass_from_local_indices(const Order& O) {
    Q mass(1, 12);
    for (auto& p : O.algebra().ramified) mass *= Q(p - 1);
    for (auto& lt : O.local) {
        const Z& p = lt.p;
        Z idx = 1;
        if (lt.kind == LocalKind::SplitEichler) {
            mpz_pow_ui(idx.get_mpz_t(), p.get_mpz_t(), lt.r - 1);
            idx *= (p + 1);
        } else if (lt.kind == LocalKind::RamifiedUnramifiedQuadratic) {
            mpz_pow_ui(idx.get_mpz_t(), p.get_mpz_t(), 2 * ((lt.r - 1) / 2));
        } else if (lt.r >= 2) {
            mpz_pow_ui(idx.get_mpz_t(), p.get_mpz_t(), lt.r - 2);
            idx *= (p + 1);
        }
        mass *= Q(idx);
    }
    return mass;
}

}  // namespace qmf
