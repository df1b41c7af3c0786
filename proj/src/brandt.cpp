#include "qmf/brandt.hpp"

#include <sstream>

#include "qmf/parallel.hpp"

namespace qmf {

std::string hecke_op_name(const HeckeOp& t) {
    std::ostringstream os;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) os << " + ";
        if (t[k].first != 1) os << to_string(t[k].first) << "*";
        os << "A" << t[k].second;
    }
    return os.str();
}

namespace {

long mod_long(const Z& x, long m) {
    Z r = x % m;
    if (r < 0) r += m;
    return r.get_si();
}

// Every unit x of O (enumerated modulo `modulus`) has kronecker(d, N(x)) = 1.
bool unit_norms_in_kernel(const QuatAlgebra& A, const Lattice& O, const Z& p, const Z& d) {
    long m = (p == 2) ? 8 : p.get_si();
    RatMat g = norm_gram(A, O);
    long c[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            Q v = (i == j) ? g(i, i) : Q(2 * g(i, j));
            c[i][j] = mod_long(v.get_num(), m);
        }
    long total = m * m * m * m;
    long x[4];
    for (long idx = 0; idx < total; ++idx) {
        long t = idx;
        for (int k = 3; k >= 0; --k) {
            x[k] = t % m;
            t /= m;
        }
        long n = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) n = (n + c[i][j] * (x[i] * x[j] % m)) % m;
        if (n % p.get_si() == 0) continue;
        if (kronecker(d, Z(n)) != 1) return false;
    }
    return true;
}

// Local quadratic characters at p allowed by the order, as fundamental discriminants.
std::vector<Z> admissible_local_characters(const Order& O, const LocalOrderType& lt) {
    std::vector<Z> out;
    if (lt.kind != LocalKind::RamifiedRamifiedQuadratic || lt.r < 2) return out;
    const Z& p = lt.p;
    std::vector<std::pair<Z, unsigned>> cands;  // (discriminant, conductor exponent)
    if (p == 2) {
        cands = {{Z(-4), 2}, {Z(8), 3}, {Z(-8), 3}};
    } else {
        cands = {{(p % 4 == 1) ? p : Z(-p), 1}};
    }
    for (auto& [d, c] : cands) {
        if (2 * c > lt.r) continue;
        bool ok;
        if (p == 2 || p <= 37)
            ok = unit_norms_in_kernel(O.algebra(), O.lattice, p, d);
        else
            ok = true;  // norms of units of O_r(E), r >= 2, E ramified, are squares mod p
        if (ok) out.push_back(d);
    }
    return out;
}

}  // namespace

BrandtModule::BrandtModule(ClassSet cs, unsigned jobs) : cs_(std::move(cs)), jobs_(jobs) {}

void BrandtModule::ensure(long n) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (n <= bound_) return;
    long b = std::max<long>({n, 2 * bound_, 32});
    const std::size_t h = size();
    const QuatAlgebra& A = cs_.algebra();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = i; j < h; ++j) pairs.push_back({i, j});
    std::vector<std::vector<std::vector<std::size_t>>> counts(h, std::vector<std::vector<std::size_t>>(h));
    parallel_for(pairs.size(), jobs_, [&](std::size_t k) {
        auto [i, j] = pairs[k];
        const RightIdeal& I = cs_.ideals[i];
        const RightIdeal& J = cs_.ideals[j];
        Lattice L = lattice_product(A, I.lattice, lattice_conj(A, J.lattice));
        RatMat g = mat_scale(norm_gram(A, L), 1 / (I.norm * J.norm));
        counts[i][j] = count_by_value(g, b);
    });
    counts_ = std::move(counts);
    bound_ = b;
}

Z BrandtModule::pair_count(std::size_t i, std::size_t j, long n) const {
    ensure(n);
    if (i > j) std::swap(i, j);
    return Z(static_cast<unsigned long>(counts_[i][j][n]));
}

RatMat BrandtModule::matrix(long n) const {
    const std::size_t h = size();
    RatMat a(h, h);
    if (n < 0) throw ArgumentError("Brandt matrix index must be nonnegative");
    if (n == 0) {
        for (std::size_t i = 0; i < h; ++i) a(i, i) = Q(1) / Q(cs_.units[i]);
        return a;
    }
    ensure(n);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            std::size_t c = (i <= j) ? counts_[i][j][n] : counts_[j][i][n];
            a(i, j) = Q(static_cast<unsigned long>(c)) / Q(cs_.units[j]);
            a(i, j).canonicalize();
        }
    return a;
}

RatMat BrandtModule::op(const HeckeOp& t) const {
    const std::size_t h = size();
    RatMat r(h, h);
    for (auto& [c, n] : t) r = mat_add(r, mat_scale(matrix(n), c));
    return r;
}

const std::vector<QVec>& BrandtModule::eisenstein_basis() const {
    std::lock_guard<std::mutex> lock(mu_);
    if (eis_done_) return eis_;
    std::vector<Z> chars{Z(1)};
    for (auto& lt : cs_.order.local) {
        auto loc = admissible_local_characters(cs_.order, lt);
        std::vector<Z> next = chars;
        for (auto& d : chars)
            for (auto& dp : loc) next.push_back(d * dp);
        chars = next;
    }
    for (auto& d : chars) {
        QVec v;
        for (auto& I : cs_.ideals) {
            if (I.norm.get_den() != 1) throw Error("class representative with non-integral norm");
            v.push_back(Q(d == 1 ? 1 : kronecker(d, I.norm.get_num())));
        }
        eis_.push_back(v);
    }
    eis_chars_ = chars;
    eis_done_ = true;
    return eis_;
}

const std::vector<Z>& BrandtModule::eisenstein_characters() const {
    eisenstein_basis();
    return eis_chars_;
}

const RatMat& BrandtModule::cusp_space() const {
    const auto& eis = eisenstein_basis();
    std::lock_guard<std::mutex> lock(mu_);
    if (cusp_done_) return cusp_;
    const std::size_t h = size();
    RatMat w(eis.size(), h);
    for (std::size_t k = 0; k < eis.size(); ++k)
        for (std::size_t i = 0; i < h; ++i) w(k, i) = eis[k][i] / Q(cs_.units[i]);
    cusp_ = kernel(w);
    if (cusp_.cols + rank(w) != h) throw ConsistencyError("cusp space dimension mismatch");
    cusp_done_ = true;
    return cusp_;
}

Poly BrandtModule::cusp_charpoly(const HeckeOp& t) const {
    const RatMat& s = cusp_space();
    if (s.cols == 0) return Poly{Q(1)};
    return charpoly(restrict_to(op(t), s));
}

RatMat brandt_matrix(const ClassSet& cs, long n, unsigned jobs) {
    BrandtModule m(cs, jobs);
    return m.matrix(n);
}

bool eisenstein_row_check(const BrandtModule& m, long n) {
    const Order& O = m.class_set().order;
    Z g;
    Z nn(n);
    mpz_gcd(g.get_mpz_t(), nn.get_mpz_t(), O.level.get_mpz_t());
    if (g != 1) throw ArgumentError("row check needs n prime to the level");
    Z dpart = O.level / O.m;
    Q expect(divisor_sum_constrained(nn, dpart, O.m));
    RatMat a = m.matrix(n);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Q s = 0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j);
        if (s != expect) return false;
    }
    return true;
}

bool hecke_recurrence_check(const BrandtModule& m, long p, unsigned r) {
    if (r == 0) return m.matrix(p) == m.matrix(p) * m.matrix(1);
    long pr = 1;
    for (unsigned k = 0; k < r; ++k) pr *= p;
    RatMat lhs = m.matrix(pr * p);
    RatMat rhs = mat_sub(m.matrix(p) * m.matrix(pr), mat_scale(m.matrix(pr / p), Q(p)));
    return lhs == rhs;
}

bool hecke_multiplicativity_check(const BrandtModule& m, long a, long b) {
    return m.matrix(a * b) == m.matrix(a) * m.matrix(b);
}

std::string HeckeContext::key(const Order& O) { return O.level.get_str() + "@" + O.lattice.serialize(); }

const BrandtModule& HeckeContext::module(const Order& O) {
    std::string k = key(O);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = modules_.find(k);
        if (it != modules_.end()) return *it->second;
    }
    auto m = std::make_unique<BrandtModule>(class_set(O), jobs_);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = modules_.emplace(k, std::move(m));
    return *it->second;
}

Poly HeckeContext::new_charpoly(const Order& O, const HeckeOp& t) {
    bool coprime = true;
    for (auto& [c, n] : t) {
        if (n < 1) throw ArgumentError("Hecke index must be positive");
        Z g, nn(n);
        mpz_gcd(g.get_mpz_t(), nn.get_mpz_t(), O.level.get_mpz_t());
        coprime = coprime && g == 1;
    }
    auto ck = std::make_pair(key(O), hecke_op_name(t));
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = new_cache_.find(ck);
        if (it != new_cache_.end()) return it->second;
    }
    if (!coprime) {
        // old forms see a different operator at bad primes, so divide nothing out and
        // restrict to the new subspace instead
        RatMat s = new_subspace(O);
        Poly f = s.cols == 0 ? Poly{Q(1)} : charpoly(restrict_to(module(O).op(t), s));
        std::lock_guard<std::mutex> lock(mu_);
        new_cache_[ck] = f;
        return f;
    }
    Poly f = module(O).cusp_charpoly(t);
    for (auto& sl : superorder_levels(O)) {
        if (sl.level == O.level) continue;
        Order sup = superorder(O, sl.level);
        Poly g = new_charpoly(sup, t);
        for (Z k = 0; k < sl.multiplicity; ++k) {
            auto [q, r] = poly_divmod(f, g);
            if (!r.empty())
                throw ConsistencyError("old part at level " + sl.level.get_str() + " does not divide the " +
                                       "cuspidal char poly at level " + O.level.get_str());
            f = q;
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    new_cache_[ck] = f;
    return f;
}

HeckeOp HeckeContext::separating_op(const Order& O) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = sep_cache_.find(key(O));
        if (it != sep_cache_.end()) return it->second;
    }
    std::vector<long> ells;
    for (Z l = 2; ells.size() < 4; l = next_prime(l))
        if (O.level % l != 0) ells.push_back(l.get_si());
    std::vector<HeckeOp> cands;
    for (long l : ells) cands.push_back(HeckeOp{{Q(1), l}});
    for (std::size_t a = 0; a < ells.size(); ++a)
        for (std::size_t b = a + 1; b < ells.size(); ++b)
            for (long c = 1; c <= 5; ++c) cands.push_back(HeckeOp{{Q(1), ells[a]}, {Q(c), ells[b]}});
    const BrandtModule& m = module(O);
    for (auto& t : cands) {
        Poly nw = new_charpoly(O, t);
        Poly old = poly_divmod(m.cusp_charpoly(t), nw).first;
        if (poly_degree(poly_gcd(poly_radical(nw), old)) <= 0) {
            std::lock_guard<std::mutex> lock(mu_);
            sep_cache_[key(O)] = t;
            return t;
        }
    }
    throw ConsistencyError("no unramified operator separates new from old at level " + O.level.get_str());
}

RatMat HeckeContext::new_subspace(const Order& O) {
    const BrandtModule& m = module(O);
    const RatMat& s = m.cusp_space();
    if (s.cols == 0) return RatMat(m.size(), 0);
    HeckeOp t = separating_op(O);
    Poly nw = new_charpoly(O, t);
    if (poly_degree(nw) <= 0) return RatMat(m.size(), 0);
    RatMat x = restrict_to(m.op(t), s);
    RatMat k = kernel(mat_poly_eval(poly_radical(nw), x));
    if (static_cast<int>(k.cols) != poly_degree(nw))
        throw ConsistencyError("new subspace dimension differs from new char poly degree");
    return s * k;
}

Poly new_charpoly(const Z& D, const Z& N, long n, const ETypeChoices& choices) {
    HeckeContext ctx;
    return ctx.new_charpoly(build_order(D, N, choices), n);
}

bool ramified_hecke_check(HeckeContext& ctx, const Order& O, const Z& p, unsigned m) {
    if (O.level % p != 0) throw ArgumentError("prime does not divide the level");
    RatMat s = ctx.new_subspace(O);
    Z pm;
    mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), m);
    RatMat img = ctx.module(O).matrix(pm.get_si()) * s;
    for (auto& x : img.a)
        if (sgn(x) != 0) return false;
    return true;
}

std::vector<OldVanishing> ramified_old_vanishing_check(HeckeContext& ctx, const Order& O, const Z& p, unsigned m) {
    if (m < 1) throw ArgumentError("exponent must be positive");
    if (O.disc() % p != 0) throw ArgumentError("prime does not divide the discriminant");
    const long n = valuation(O.level, p);
    const BrandtModule& mod = ctx.module(O);
    const RatMat& cusp = mod.cusp_space();
    std::vector<OldVanishing> out;
    if (cusp.cols == 0) return out;
    HeckeOp t = ctx.separating_op(O);
    RatMat tc = restrict_to(mod.op(t), cusp);
    Poly full = charpoly(tc);
    Z pm;
    mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), m);
    RatMat a = mod.matrix(pm.get_si());
    for (auto& sl : superorder_levels(O)) {
        const long c = valuation(sl.level, p);
        if (c < 3 || static_cast<long>(m) < n - c - 1) continue;
        OldVanishing r;
        r.level = sl.level;
        r.c = static_cast<unsigned>(c);
        Poly g = ctx.new_charpoly(sl.level == O.level ? O : superorder(O, sl.level), t);
        if (poly_degree(g) <= 0) {
            out.push_back(r);
            continue;
        }
        // the other levels must not share an eigenvalue of t with this one
        Poly rest = full;
        for (Z k = 0; k < sl.multiplicity; ++k) rest = poly_divmod(rest, g).first;
        Poly h = poly_radical(g);
        if (poly_degree(poly_gcd(h, rest)) > 0) {
            r.skipped = true;
            out.push_back(r);
            continue;
        }
        RatMat v = cusp * kernel(mat_poly_eval(h, tc));
        r.dim = v.cols;
        RatMat img = a * v;
        for (auto& x : img.a) r.vanishes = r.vanishes && sgn(x) == 0;
        out.push_back(r);
    }
    return out;
}

HeckeModuleReport hecke_report(HeckeContext& ctx, const Order& O, const std::vector<long>& ns) {
    HeckeModuleReport r;
    r.disc = O.disc();
    r.level = O.level;
    const BrandtModule& m = ctx.module(O);
    r.dim_full = m.size();
    r.dim_cusp = m.cusp_space().cols;
    r.dim_eis = m.eisenstein_basis().size();
    for (long n : ns) r.cusp_charpolys[n] = m.cusp_charpoly(n);
    for (auto& sl : superorder_levels(O)) {
        HeckeModuleReport::NewPart part{sl.level, sl.multiplicity, {}};
        Order sup = sl.level == O.level ? O : superorder(O, sl.level);
        for (long n : ns) {
            Z g, nn(n);
            mpz_gcd(g.get_mpz_t(), nn.get_mpz_t(), O.level.get_mpz_t());
            if (g == 1) part.charpolys[n] = ctx.new_charpoly(sup, n);
        }
        r.new_parts.push_back(part);
    }
    return r;
}

}  // namespace qmf
