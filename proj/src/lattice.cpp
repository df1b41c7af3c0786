#include "qmf/lattice.hpp"

#include <sstream>

namespace qmf {

Lattice Lattice::from_int(const IntMat& rows, const Z& den) {
    Lattice l;
    l.basis_ = hnf_basis(rows);
    if (l.basis_.rows != rows.cols) throw ArgumentError("lattice generators do not have full rank");
    l.den_ = den;
    l.canonicalize();
    return l;
}

Lattice Lattice::from_rows(const std::vector<QVec>& gens) {
    if (gens.empty()) throw ArgumentError("empty lattice");
    std::size_t n = gens[0].size();
    Z den = 1;
    for (auto& g : gens)
        for (auto& x : g) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    IntMat m(gens.size(), n);
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Q(gens[i][j] * den).get_num();
    return from_int(m, den);
}

Lattice Lattice::standard(std::size_t n) { return from_int(IntMat::identity(n), 1); }

void Lattice::canonicalize() {
    Z g = den_;
    for (auto& x : basis_.a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g != 1) {
        for (auto& x : basis_.a) x /= g;
        den_ /= g;
    }
}

QVec Lattice::basis_vector(std::size_t i) const {
    QVec v(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        v[j] = Q(basis_(i, j), den_);
        v[j].canonicalize();
    }
    return v;
}

std::vector<QVec> Lattice::basis() const {
    std::vector<QVec> b;
    for (std::size_t i = 0; i < basis_.rows; ++i) b.push_back(basis_vector(i));
    return b;
}

RatMat Lattice::basis_matrix() const {
    RatMat m(basis_.rows, basis_.cols);
    for (std::size_t i = 0; i < basis_.rows; ++i)
        for (std::size_t j = 0; j < basis_.cols; ++j) {
            m(i, j) = Q(basis_(i, j), den_);
            m(i, j).canonicalize();
        }
    return m;
}

QVec Lattice::coordinates(const QVec& v) const {
    std::size_t n = dim();
    QVec w(n), c(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = v[j] * den_;
    for (std::size_t j = 0; j < n; ++j) {
        Q s = w[j];
        for (std::size_t i = 0; i < j; ++i) s -= c[i] * basis_(i, j);
        c[j] = s / basis_(j, j);
    }
    return c;
}

bool Lattice::contains(const QVec& v) const {
    for (auto& c : coordinates(v))
        if (c.get_den() != 1) return false;
    return true;
}

bool Lattice::contains(const Lattice& o) const {
    for (std::size_t i = 0; i < o.basis_.rows; ++i)
        if (!contains(o.basis_vector(i))) return false;
    return true;
}

Q Lattice::covolume() const {
    Z p = 1;
    for (std::size_t i = 0; i < dim(); ++i) p *= basis_(i, i);
    Z d;
    mpz_pow_ui(d.get_mpz_t(), den_.get_mpz_t(), dim());
    Q r(p, d);
    r.canonicalize();
    return r;
}

Z Lattice::index_of(const Lattice& sub) const {
    Q r = sub.covolume() / covolume();
    if (r.get_den() != 1) throw ArgumentError("index_of: not a sublattice");
    return r.get_num();
}

Lattice Lattice::dual() const {
    std::size_t n = dim();
    // inverse of the upper triangular integer basis, then transpose and scale by den
    RatMat inv(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        // solve B x = e_col (B upper triangular), back substitution
        for (std::size_t ii = n; ii-- > 0;) {
            Q s = (ii == col) ? Q(1) : Q(0);
            for (std::size_t k = ii + 1; k < n; ++k) s -= Q(basis_(ii, k)) * inv(k, col);
            inv(ii, col) = s / basis_(ii, ii);
        }
    }
    std::vector<QVec> rows(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = inv(j, i) * den_;
    return from_rows(rows);
}

Lattice Lattice::scaled(const Q& s) const {
    if (sgn(s) == 0) throw ArgumentError("scaling lattice by zero");
    std::vector<QVec> rows = basis();
    for (auto& r : rows)
        for (auto& x : r) x *= s;
    return from_rows(rows);
}

bool Lattice::operator<(const Lattice& o) const {
    if (den_ != o.den_) return den_ < o.den_;
    return basis_.a < o.basis_.a;
}

std::string Lattice::serialize() const {
    std::ostringstream os;
    os << den_.get_str();
    for (std::size_t i = 0; i < basis_.rows; ++i) {
        os << (i == 0 ? " | " : " ; ");
        for (std::size_t j = 0; j < basis_.cols; ++j) os << (j ? " " : "") << basis_(i, j).get_str();
    }
    return os.str();
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
    std::vector<QVec> g = a.basis();
    for (auto& v : b.basis()) g.push_back(v);
    return Lattice::from_rows(g);
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
    return lattice_sum(a.dual(), b.dual()).dual();
}

Lattice integral_preimage(const RatMat& m) {
    std::vector<QVec> rows;
    for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
    return Lattice::from_rows(rows).dual();
}

Lattice sublattice_mod(const Lattice& base, const IntMat& f, const Z& modulus) {
    std::size_t n = base.dim();
    std::vector<QVec> gens;
    for (std::size_t i = 0; i < n; ++i) {
        QVec e(n, Q(0));
        e[i] = 1;
        gens.push_back(e);
    }
    for (std::size_t i = 0; i < f.rows; ++i) {
        QVec r(n);
        for (std::size_t j = 0; j < n; ++j) {
            r[j] = Q(f(i, j), modulus);
            r[j].canonicalize();
        }
        gens.push_back(r);
    }
    Lattice coords = Lattice::from_rows(gens).dual();
    RatMat b = base.basis_matrix();
    std::vector<QVec> out;
    for (auto& c : coords.basis()) {
        QVec v(n, Q(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v[j] += c[i] * b(i, j);
        out.push_back(v);
    }
    return Lattice::from_rows(out);
}

}  // namespace qmf
