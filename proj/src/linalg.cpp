#include "qmf/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace qmf {

void poly_trim(Poly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int poly_degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Q(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Q(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

Poly poly_pow(const Poly& a, unsigned e) {
    Poly r{Q(1)};
    for (unsigned i = 0; i < e; ++i) r = poly_mul(r, a);
    return r;
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b0) {
    Poly b = b0;
    poly_trim(b);
    if (b.empty()) throw ArgumentError("polynomial division by zero");
    Poly r = a;
    poly_trim(r);
    if (r.size() < b.size()) return {Poly{}, r};
    Poly q(r.size() - b.size() + 1, Q(0));
    while (r.size() >= b.size() && !r.empty()) {
        std::size_t s = r.size() - b.size();
        Q c = r.back() / b.back();
        q[s] = c;
        for (std::size_t i = 0; i < b.size(); ++i) r[s + i] -= c * b[i];
        poly_trim(r);
    }
    poly_trim(q);
    return {q, r};
}

Poly poly_monic(const Poly& a) {
    Poly r = a;
    poly_trim(r);
    if (r.empty()) return r;
    Q lead = r.back();
    for (auto& c : r) c /= lead;
    return r;
}

Poly poly_gcd(const Poly& a0, const Poly& b0) {
    Poly a = a0, b = b0;
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        Poly r = poly_divmod(a, b).second;
        a = b;
        b = r;
    }
    return poly_monic(a);
}

Poly poly_derivative(const Poly& a) {
    if (a.size() <= 1) return {};
    Poly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<unsigned long>(i);
    poly_trim(d);
    return d;
}

Poly poly_radical(const Poly& a) {
    Poly g = poly_gcd(a, poly_derivative(a));
    return poly_monic(poly_divmod(a, g).first);
}

Poly poly_compose_neg(const Poly& a) {
    Poly r = a;
    for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
    return r;
}

bool poly_is_integral(const Poly& a) {
    for (auto& c : a)
        if (c.get_den() != 1) return false;
    return true;
}

std::string poly_to_string(const Poly& p, const char* var) {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = p.size(); k-- > 0;) {
        Q c = p[k];
        if (sgn(c) == 0) continue;
        bool neg = sgn(c) < 0;
        Q m = neg ? Q(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool unit = (m == 1);
        if (k == 0 || !unit) os << to_string(m);
        if (k >= 1) {
            if (!unit) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

Poly poly_from_ints(const std::vector<long>& c) {
    Poly p;
    for (long x : c) p.push_back(Q(x));
    poly_trim(p);
    return p;
}

// ---------------------------------------------------------------- matrices

RatMat mat_add(const RatMat& a, const RatMat& b) {
    RatMat r = a;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
    return r;
}

RatMat mat_sub(const RatMat& a, const RatMat& b) {
    RatMat r = a;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= b.a[i];
    return r;
}

RatMat mat_scale(const RatMat& a, const Q& s) {
    RatMat r = a;
    for (auto& x : r.a) x *= s;
    return r;
}

RatMat mat_poly_eval(const Poly& p, const RatMat& a) {
    std::size_t n = a.rows;
    RatMat r(n, n);
    for (std::size_t k = p.size(); k-- > 0;) {
        r = r * a;
        for (std::size_t i = 0; i < n; ++i) r(i, i) += p[k];
    }
    return r;
}

Rref rref(const RatMat& m) {
    Rref out{m, {}};
    RatMat& r = out.r;
    std::size_t row = 0;
    for (std::size_t c = 0; c < r.cols && row < r.rows; ++c) {
        std::size_t piv = row;
        while (piv < r.rows && sgn(r(piv, c)) == 0) ++piv;
        if (piv == r.rows) continue;
        if (piv != row)
            for (std::size_t j = 0; j < r.cols; ++j) std::swap(r(piv, j), r(row, j));
        Q inv = 1 / r(row, c);
        for (std::size_t j = c; j < r.cols; ++j) r(row, j) *= inv;
        for (std::size_t i = 0; i < r.rows; ++i) {
            if (i == row || sgn(r(i, c)) == 0) continue;
            Q f = r(i, c);
            for (std::size_t j = c; j < r.cols; ++j) r(i, j) -= f * r(row, j);
        }
        out.pivots.push_back(c);
        ++row;
    }
    return out;
}

std::size_t rank(const RatMat& m) { return rref(m).pivots.size(); }

RatMat kernel(const RatMat& m) {
    Rref rr = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (auto c : rr.pivots) is_piv[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < m.cols; ++c)
        if (!is_piv[c]) free.push_back(c);
    RatMat k(m.cols, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = 1;
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) k(rr.pivots[i], f) = -rr.r(i, free[f]);
    }
    return k;
}

RatMat inverse(const RatMat& m) {
    std::size_t n = m.rows;
    if (m.cols != n) throw ArgumentError("inverse of non-square matrix");
    RatMat aug = hstack(m, RatMat::identity(n));
    Rref rr = rref(aug);
    if (rr.pivots.size() < n || rr.pivots[n - 1] != n - 1) throw ArgumentError("singular matrix");
    return column_block(rr.r, n, 2 * n);
}

Q det(const RatMat& m0) {
    RatMat m = m0;
    std::size_t n = m.rows;
    Q d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(m(piv, c)) == 0) ++piv;
        if (piv == n) return Q(0);
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(m(i, c)) == 0) continue;
            Q f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

RatMat hstack(const RatMat& a, const RatMat& b) {
    if (a.rows != b.rows) throw ArgumentError("hstack row mismatch");
    RatMat r(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) r(i, a.cols + j) = b(i, j);
    }
    return r;
}

RatMat column_block(const RatMat& m, std::size_t c0, std::size_t c1) {
    RatMat r(m.rows, c1 - c0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = c0; j < c1; ++j) r(i, j - c0) = m(i, j);
    return r;
}

RatMat column_basis(const RatMat& m) {
    Rref rr = rref(m.transpose());
    std::size_t k = rr.pivots.size();
    RatMat b(m.rows, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m.rows; ++i) b(i, j) = rr.r(j, i);
    return b;
}

RatMat restrict_to(const RatMat& a, const RatMat& s) {
    std::size_t k = s.cols;
    if (k == 0) return RatMat(0, 0);
    // pick k independent rows of s
    Rref rr = rref(s.transpose());
    if (rr.pivots.size() != k) throw ArgumentError("restrict_to: basis not independent");
    RatMat sp(k, k), asp(k, k);
    RatMat as = a * s;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            sp(i, j) = s(rr.pivots[i], j);
            asp(i, j) = as(rr.pivots[i], j);
        }
    RatMat x = inverse(sp) * asp;
    if (!(s * x == as)) throw Error("restrict_to: subspace is not invariant");
    return x;
}

Poly charpoly(const RatMat& m) {
    std::size_t n = m.rows;
    if (n == 0) return Poly{Q(1)};
    RatMat h = m;
    // reduce to upper Hessenberg form by similarity
    for (std::size_t c = 0; c + 2 < n; ++c) {
        std::size_t piv = c + 1;
        while (piv < n && sgn(h(piv, c)) == 0) ++piv;
        if (piv == n) continue;
        if (piv != c + 1) {
            for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(c + 1, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, c + 1));
        }
        Q t = h(c + 1, c);
        for (std::size_t i = c + 2; i < n; ++i) {
            if (sgn(h(i, c)) == 0) continue;
            Q u = h(i, c) / t;
            for (std::size_t j = 0; j < n; ++j) h(i, j) -= u * h(c + 1, j);
            for (std::size_t r = 0; r < n; ++r) h(r, c + 1) += u * h(r, i);
        }
    }
    std::vector<Poly> p(n + 1);
    p[0] = Poly{Q(1)};
    for (std::size_t k = 1; k <= n; ++k) {
        // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{i,k} prod_{j=i+1..k} h_{j,j-1} p_{i-1}   (1-based)
        p[k] = poly_mul(Poly{-h(k - 1, k - 1), Q(1)}, p[k - 1]);
        Q prod = 1;
        for (std::size_t i = k - 1; i >= 1; --i) {
            prod *= h(i, i - 1);
            if (sgn(prod) == 0) break;
            Q coef = h(i - 1, k - 1) * prod;
            Poly term = p[i - 1];
            for (auto& c : term) c *= coef;
            p[k] = poly_add(p[k], Poly(term.size()));
            for (std::size_t j = 0; j < term.size(); ++j) p[k][j] -= term[j];
            poly_trim(p[k]);
        }
    }
    return p[n];
}

IntMat saturated_basis(const RatMat& s) {
    std::size_t n = s.rows;
    if (s.cols == 0) return IntMat(0, n);
    // integer constraints c with c . v = 0 for all v in span(s)
    RatMat perp = kernel(s.transpose());  // columns span the orthogonal complement
    if (perp.cols == 0) return IntMat::identity(n);
    IntMat c(n, perp.cols);  // c^t rows are constraint vectors, stored as columns here
    for (std::size_t j = 0; j < perp.cols; ++j) {
        Z l = 1;
        for (std::size_t i = 0; i < n; ++i)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), perp(i, j).get_den_mpz_t());
        for (std::size_t i = 0; i < n; ++i) c(i, j) = Q(perp(i, j) * l).get_num();
    }
    HnfResult h = hnf(c);
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < n; ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < c.cols && zero; ++j) zero = sgn(h.h(i, j)) == 0;
        if (zero) rows.push_back(h.transform.row(i));
    }
    IntMat b(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = rows[i][j];
    return hnf_basis(b);
}

namespace {

std::vector<std::vector<long>> reduce_mod(const IntMat& m, long p) {
    std::vector<std::vector<long>> r(m.rows, std::vector<long>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            Z v = m(i, j) % p;
            if (v < 0) v += p;
            r[i][j] = v.get_si();
        }
    return r;
}

long inv_mod(long a, long p) {
    Z r, aa(a), pp(p);
    mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), pp.get_mpz_t());
    return r.get_si();
}

std::vector<std::size_t> rref_mod_p(std::vector<std::vector<long>>& r, std::size_t cols, long p) {
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < r.size(); ++c) {
        std::size_t k = row;
        while (k < r.size() && r[k][c] == 0) ++k;
        if (k == r.size()) continue;
        std::swap(r[k], r[row]);
        long inv = inv_mod(r[row][c], p);
        for (auto& x : r[row]) x = (x * inv) % p;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i == row || r[i][c] == 0) continue;
            long f = r[i][c];
            for (std::size_t j = 0; j < cols; ++j) r[i][j] = ((r[i][j] - f * r[row][j]) % p + p) % p;
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

}  // namespace

std::size_t rank_mod_p(const IntMat& m, long p) {
    auto r = reduce_mod(m, p);
    return rref_mod_p(r, m.cols, p).size();
}

std::size_t kernel_dim_mod_p(const IntMat& m, long p) { return m.cols - rank_mod_p(m, p); }

std::vector<std::vector<long>> kernel_mod_p(const IntMat& m, long p) {
    auto r = reduce_mod(m, p);
    auto piv = rref_mod_p(r, m.cols, p);
    std::vector<bool> is_piv(m.cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<long>> out;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<long> v(m.cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = (p - r[i][f]) % p;
        out.push_back(v);
    }
    return out;
}

}  // namespace qmf
