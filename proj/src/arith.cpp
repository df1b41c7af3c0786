#include "qmf/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmf {

RatMat to_rat(const IntMat& m) {
    RatMat r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i];
    return r;
}

namespace {

void row_combine(IntMat& h, std::size_t r, std::size_t i, const Z& s, const Z& t, const Z& u,
                 const Z& v) {
    // (row r, row i) <- (s*r + t*i, u*r + v*i)
    for (std::size_t c = 0; c < h.cols; ++c) {
        Z x = h(r, c), y = h(i, c);
        h(r, c) = s * x + t * y;
        h(i, c) = u * x + v * y;
    }
}

void row_swap(IntMat& h, std::size_t r, std::size_t i) {
    for (std::size_t c = 0; c < h.cols; ++c) std::swap(h(r, c), h(i, c));
}

void row_sub(IntMat& h, std::size_t k, std::size_t r, const Z& q) {
    for (std::size_t c = 0; c < h.cols; ++c) h(k, c) -= q * h(r, c);
}

template <bool Track>
void hnf_core(IntMat& h, IntMat* u) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < h.cols && r < h.rows; ++c) {
        for (std::size_t i = r + 1; i < h.rows; ++i) {
            if (sgn(h(i, c)) == 0) continue;
            if (sgn(h(r, c)) == 0) {
                row_swap(h, r, i);
                if constexpr (Track) row_swap(*u, r, i);
                continue;
            }
            Z a = h(r, c), b = h(i, c), g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            Z ua = -b / g, va = a / g;
            row_combine(h, r, i, s, t, ua, va);
            if constexpr (Track) row_combine(*u, r, i, s, t, ua, va);
        }
        if (sgn(h(r, c)) == 0) continue;
        if (sgn(h(r, c)) < 0) {
            for (std::size_t k = 0; k < h.cols; ++k) h(r, k) = -h(r, k);
            if constexpr (Track)
                for (std::size_t k = 0; k < u->cols; ++k) (*u)(r, k) = -(*u)(r, k);
        }
        for (std::size_t k = 0; k < r; ++k) {
            Z q;
            mpz_fdiv_q(q.get_mpz_t(), h(k, c).get_mpz_t(), h(r, c).get_mpz_t());
            if (sgn(q) == 0) continue;
            row_sub(h, k, r, q);
            if constexpr (Track) row_sub(*u, k, r, q);
        }
        ++r;
    }
}

}  // namespace

HnfResult hnf(const IntMat& m) {
    HnfResult res{m, IntMat::identity(m.rows)};
    hnf_core<true>(res.h, &res.transform);
    return res;
}

IntMat hnf_basis(const IntMat& m) {
    IntMat h = m;
    hnf_core<false>(h, nullptr);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < h.rows; ++i) {
        bool zero = true;
        for (std::size_t c = 0; c < h.cols && zero; ++c) zero = sgn(h(i, c)) == 0;
        if (!zero) rank = i + 1;
    }
    h.rows = rank;
    h.a.resize(rank * h.cols);
    return h;
}

// ---------------------------------------------------------------- LLL

namespace {

Z round_q(const Q& x) {
    Q y = x + Q(1, 2);
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    return r;
}

void gram_schmidt(const RatMat& g, RatMat& mu, QVec& bstar) {
    std::size_t n = g.rows;
    mu = RatMat(n, n);
    bstar.assign(n, Q(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Q s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar[k];
            mu(i, j) = s / bstar[j];
        }
        Q s = g(i, i);
        for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
        bstar[i] = s;
    }
}

// b_k <- b_k - q b_j on Gram matrix g and transform t
void gram_sub(RatMat& g, IntMat& t, std::size_t k, std::size_t j, const Z& q) {
    std::size_t n = g.rows;
    Q qq(q);
    for (std::size_t i = 0; i < n; ++i) t(i, k) -= q * t(i, j);
    Q gkk = g(k, k) - 2 * qq * g(k, j) + qq * qq * g(j, j);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k) continue;
        g(k, i) -= qq * g(j, i);
        g(i, k) = g(k, i);
    }
    g(k, k) = gkk;
}

void gram_swap(RatMat& g, IntMat& t, std::size_t k) {
    std::size_t n = g.rows;
    for (std::size_t i = 0; i < n; ++i) std::swap(t(i, k), t(i, k - 1));
    for (std::size_t i = 0; i < n; ++i) std::swap(g(k, i), g(k - 1, i));
    for (std::size_t i = 0; i < n; ++i) std::swap(g(i, k), g(i, k - 1));
}

}  // namespace

IntMat lll_gram(const RatMat& g0) {
    std::size_t n = g0.rows;
    RatMat g = g0;
    IntMat t = IntMat::identity(n);
    if (n < 2) return t;
    RatMat mu;
    QVec bstar;
    std::size_t k = 1;
    const Q delta(3, 4);
    while (k < n) {
        gram_schmidt(g, mu, bstar);
        for (std::size_t jj = k; jj-- > 0;) {
            Z q = round_q(mu(k, jj));
            if (sgn(q) == 0) continue;
            gram_sub(g, t, k, jj, q);
            gram_schmidt(g, mu, bstar);
        }
        if (bstar[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1]) {
            gram_swap(g, t, k);
            k = std::max<std::size_t>(k - 1, 1);
        } else {
            ++k;
        }
    }
    return t;
}

// ---------------------------------------------------------------- definiteness

bool is_positive_definite(const RatMat& g) {
    if (g.rows != g.cols) return false;
    std::size_t n = g.rows;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (g(i, j) != g(j, i)) return false;
    // Gaussian elimination without pivoting: all pivots > 0 iff all leading minors > 0
    RatMat m = g;
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            Q f = m(i, k) / m(k, k);
            if (sgn(f) == 0) continue;
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return true;
}

GramForm make_gram(const RatMat& g) { return GramForm{g, is_positive_definite(g)}; }

// ---------------------------------------------------------------- enumeration

namespace {

struct Enumerator {
    std::size_t n;
    IntMat a;  // reduced
    IntMat t;  // original = t * reduced
    std::vector<std::vector<long double>> q;
    long double bound_ld;
    Z bound;
    const std::function<bool(const ZVec&, const Z&)>* f;
    std::vector<long> x;
    bool stop = false;

    void leaf() {
        ZVec xr(n);
        for (std::size_t i = 0; i < n; ++i) xr[i] = x[i];
        Z val = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            Z s = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (x[j] != 0) s += a(i, j) * xr[j];
            val += xr[i] * s;
        }
        if (val > bound || sgn(val) == 0) return;
        ZVec y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Z s = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (x[j] != 0) s += t(i, j) * xr[j];
            y[i] = s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (sgn(y[i]) == 0) continue;
            if (sgn(y[i]) < 0)
                for (auto& c : y) c = -c;
            break;
        }
        if (!(*f)(y, val)) stop = true;
    }

    void rec(std::size_t i, long double rem, bool all_zero_above) {
        if (stop) return;
        long double c = 0;
        for (std::size_t j = i + 1; j < n; ++j) c -= q[i][j] * (long double)x[j];
        long double slack = 1e-9L * (1 + bound_ld);
        long double r2 = rem / q[i][i];
        if (r2 < 0) r2 = 0;
        long double r = std::sqrt(r2) + slack;
        long lo = (long)std::ceil(c - r), hi = (long)std::floor(c + r);
        if (all_zero_above && lo < 0) lo = 0;
        for (long v = lo; v <= hi && !stop; ++v) {
            x[i] = v;
            long double d = (long double)v - c;
            long double nrem = rem - q[i][i] * d * d;
            if (nrem < -slack) continue;
            if (i == 0) {
                if (all_zero_above && v == 0) continue;
                leaf();
            } else {
                rec(i - 1, nrem, all_zero_above && v == 0);
            }
        }
        x[i] = 0;
    }
};

}  // namespace

void enumerate_int(const IntMat& a0, const Z& bound,
                   const std::function<bool(const ZVec&, const Z&)>& f) {
    std::size_t n = a0.rows;
    if (n == 0 || sgn(bound) <= 0) return;
    RatMat ar = to_rat(a0);
    if (!is_positive_definite(ar)) throw DefinitenessError("form is not positive definite");
    Enumerator e;
    e.n = n;
    e.t = lll_gram(ar);
    e.a = e.t.transpose() * a0 * e.t;
    // Fincke-Pohst coefficients: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    std::vector<std::vector<long double>> q(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = e.a(i, j).get_d();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    e.q = q;
    e.bound = bound;
    e.bound_ld = bound.get_d();
    e.f = &f;
    e.x.assign(n, 0);
    e.rec(n - 1, e.bound_ld, true);
}

namespace {

Z denominator_lcm(const RatMat& g) {
    Z d = 1;
    for (auto& x : g.a) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
    return d;
}

IntMat scaled(const RatMat& g, const Z& d) {
    IntMat a(g.rows, g.cols);
    for (std::size_t i = 0; i < g.a.size(); ++i) {
        Q v = g.a[i] * d;
        a.a[i] = v.get_num();
    }
    return a;
}

}  // namespace

ShortVectors short_vectors(const GramForm& g, const Q& bound) {
    if (!g.definite || !is_positive_definite(g.g))
        throw DefinitenessError("short_vectors requires a positive definite form");
    ShortVectors out;
    if (sgn(bound) <= 0) return out;
    Z d = denominator_lcm(g.g);
    IntMat a = scaled(g.g, d);
    Q sb = bound * d;
    Z b;
    mpz_fdiv_q(b.get_mpz_t(), sb.get_num_mpz_t(), sb.get_den_mpz_t());
    enumerate_int(a, b, [&](const ZVec& y, const Z& v) {
        out.vectors.push_back(y);
        Q key(v, d);
        key.canonicalize();
        out.counts[key]++;
        return true;
    });
    std::sort(out.vectors.begin(), out.vectors.end());
    return out;
}

std::vector<std::size_t> count_by_value(const RatMat& g, long bound) {
    Z d = denominator_lcm(g);
    IntMat a = scaled(g, d);
    std::vector<std::size_t> counts(bound + 1, 0);
    enumerate_int(a, Z(bound) * d, [&](const ZVec&, const Z& v) {
        Z q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
        if (sgn(r) != 0) throw ArgumentError("count_by_value: form is not integral-valued");
        counts[q.get_si()]++;
        return true;
    });
    return counts;
}

bool represents(const RatMat& g, const Q& target) {
    Z d = denominator_lcm(g);
    IntMat a = scaled(g, d);
    Q t = target * d;
    if (t.get_den() != 1) return false;
    bool found = false;
    enumerate_int(a, t.get_num(), [&](const ZVec&, const Z& v) {
        if (v == t.get_num()) found = true;
        return !found;
    });
    return found;
}

// ---------------------------------------------------------------- number theory

int kronecker(const Z& a, const Z& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

bool is_prime(const Z& n) { return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

unsigned valuation(Z n, const Z& p) {
    if (sgn(n) == 0) throw ArgumentError("valuation of zero");
    unsigned v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

Z next_prime(const Z& n) {
    Z r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

namespace {

Z square_class_int(const Q& a) {
    if (sgn(a) == 0) throw ArgumentError("hilbert symbol of zero");
    return a.get_num() * a.get_den();
}

Z pollard_rho(const Z& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Z x = 2, y = 2, d = 1;
        auto step = [&](Z& v) {
            v = v * v + c;
            v %= n;
        };
        while (d == 1) {
            step(x);
            step(y);
            step(y);
            Z diff = abs(x - y);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != n) return d;
    }
}

void factor_rec(const Z& n, std::map<Z, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    Z d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

int hilbert_symbol_infinity(const Q& a, const Q& b) {
    if (sgn(a) == 0 || sgn(b) == 0) throw ArgumentError("hilbert symbol of zero");
    return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
}

int hilbert_symbol(const Q& a, const Q& b, const Z& p) {
    if (!is_prime(p)) throw ArgumentError("hilbert symbol place must be a prime or infinity");
    Z x = square_class_int(a), y = square_class_int(b);
    unsigned alpha = valuation(x, p), beta = valuation(y, p);
    Z pa, pb;
    mpz_pow_ui(pa.get_mpz_t(), p.get_mpz_t(), alpha);
    mpz_pow_ui(pb.get_mpz_t(), p.get_mpz_t(), beta);
    Z u = x / pa, v = y / pb;
    if (p == 2) {
        auto eps = [](const Z& w) -> unsigned {
            Z r = w % 4;
            if (r < 0) r += 4;
            return r == 3 ? 1 : 0;
        };
        auto omega = [](const Z& w) -> unsigned {
            Z r = w % 8;
            if (r < 0) r += 8;
            return (r == 3 || r == 5) ? 1 : 0;
        };
        unsigned e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return (e % 2) ? -1 : 1;
    }
    int s = 1;
    Z half = (p - 1) / 2;
    if ((alpha % 2) && (beta % 2) && mpz_odd_p(half.get_mpz_t())) s = -s;
    if (beta % 2) s *= kronecker(u, p);
    if (alpha % 2) s *= kronecker(v, p);
    return s;
}

int hilbert_symbol(const Q& a, const Q& b, long place) {
    if (place == 0) return hilbert_symbol_infinity(a, b);
    if (place < 0) throw ArgumentError("hilbert symbol place must be a prime or infinity");
    return hilbert_symbol(a, b, Z(place));
}

std::vector<std::pair<Z, unsigned>> factor(const Z& n0) {
    if (sgn(n0) == 0) throw ArgumentError("factor(0)");
    Z n = abs(n0);
    std::map<Z, unsigned> out;
    for (unsigned long p = 2; p < 10000 && n > 1; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            out[Z(p)]++;
        }
        if (Z(p) * p > n) break;
    }
    if (n > 1) factor_rec(n, out);
    return {out.begin(), out.end()};
}

std::vector<Z> divisors(const Z& n) {
    std::vector<Z> ds{1};
    for (auto& [p, e] : factor(n)) {
        std::size_t m = ds.size();
        Z pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < m; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

bool is_squarefree(const Z& n) {
    for (auto& [p, e] : factor(n))
        if (e > 1) return false;
    return true;
}

Z divisor_sum_constrained(const Z& n, const Z& a, const Z& b) {
    if (n < 1) throw ArgumentError("divisor_sum_constrained requires n >= 1");
    Z s = 0;
    for (auto& d : divisors(n)) {
        Z g1, g2, m = n / d;
        mpz_gcd(g1.get_mpz_t(), d.get_mpz_t(), a.get_mpz_t());
        mpz_gcd(g2.get_mpz_t(), m.get_mpz_t(), b.get_mpz_t());
        if (g1 == 1 && g2 == 1) s += d;
    }
    return s;
}

std::string to_string(const Q& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace qmf
