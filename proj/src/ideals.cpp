#include "qmf/ideals.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "qmf/linalg.hpp"

namespace qmf {

namespace {

long mod_long(const Z& x, long m) {
    Z r = x % m;
    if (r < 0) r += m;
    return r.get_si();
}

long inv_mod(long a, long p) {
    long r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

// Reduced row echelon form over F_p; zero rows dropped.
std::vector<std::vector<long>> rref_mod(std::vector<std::vector<long>> m, long p) {
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        long inv = inv_mod(m[r][c], p);
        for (auto& x : m[r]) x = x * inv % p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            long f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
        }
        ++r;
    }
    m.resize(r);
    return m;
}

// Integer coefficients of N(sum c_i b_i): diagonal and doubled off-diagonal parts.
IntMat integral_norm_coeffs(const QuatAlgebra& A, const Lattice& L) {
    RatMat g = norm_gram(A, L);
    IntMat c(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) {
            Q v = (i == j) ? g(i, i) : Q(2 * g(i, j));
            if (v.get_den() != 1) throw Error("norm form not integral on an order");
            c(i, j) = v.get_num();
        }
    return c;
}

RatMat normalized_gram(const QuatAlgebra& A, const Lattice& L, const Q& scale) {
    return mat_scale(norm_gram(A, L), 1 / scale);
}

// Counts of N(x)/N(I) = 1..k on I; equal for equivalent ideals.
std::vector<std::size_t> class_invariant(const QuatAlgebra& A, const RightIdeal& I) {
    return count_by_value(normalized_gram(A, I.lattice, I.norm), 4);
}

}  // namespace

RightIdeal unit_ideal(const Order& O) { return RightIdeal{O.lattice, Q(1)}; }

Q ideal_norm(const QuatAlgebra& A, const Lattice& I) { return lattice_norm(A, I); }

Lattice ideal_conj(const QuatAlgebra& A, const Lattice& I) { return lattice_conj(A, I); }

Lattice ideal_product(const QuatAlgebra& A, const Lattice& I, const Lattice& J) {
    return lattice_product(A, I, J);
}

Lattice ideal_inverse(const QuatAlgebra& A, const Lattice& I) {
    return lattice_conj(A, I).scaled(1 / ideal_norm(A, I));
}

bool is_right_ideal(const QuatAlgebra& A, const Lattice& I, const Lattice& O) {
    return I.contains(lattice_product(A, I, O));
}

std::vector<RightIdeal> q_neighbors(const Order& O, const RightIdeal& I, const Z& q) {
    if (O.level % q == 0) throw ArgumentError("neighbor prime divides the level");
    if (!is_prime(q) || !q.fits_slong_p() || q > 1000) throw ArgumentError("neighbor prime out of range");
    const QuatAlgebra& A = O.algebra();
    const long p = q.get_si();
    Lattice L = left_order_of(A, I.lattice);
    std::vector<QVec> lb = L.basis();
    IntMat nc = integral_norm_coeffs(A, L);
    long ncm[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ncm[i][j] = mod_long(nc(i, j), p);
    // left multiplication table: coordinates of l_a * l_b in L
    std::vector<std::vector<std::vector<long>>> table(4, std::vector<std::vector<long>>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            QVec c = L.coordinates(to_vec(A.mul(to_quat(lb[a]), to_quat(lb[b]))));
            for (auto& x : c) table[a][b].push_back(mod_long(x.get_num(), p));
        }

    std::set<std::vector<std::vector<long>>> seen;
    std::vector<RightIdeal> out;
    Lattice qI = I.lattice.scaled(Q(q));
    std::vector<long> c(4, 0);
    const long total = p * p * p * p;
    for (long idx = 1; idx < total && out.size() < static_cast<std::size_t>(p + 1); ++idx) {
        long t = idx;
        for (int k = 3; k >= 0; --k) {
            c[k] = t % p;
            t /= p;
        }
        long n = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) n = (n + ncm[i][j] * (c[i] * c[j] % p)) % p;
        if (n != 0) continue;
        // rows: coordinates of z * l_b
        std::vector<std::vector<long>> img(4, std::vector<long>(4, 0));
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a)
                if (c[a])
                    for (int k = 0; k < 4; ++k) img[b][k] = (img[b][k] + c[a] * table[a][b][k]) % p;
        auto key = rref_mod(img, p);
        if (key.size() != 2) continue;
        if (!seen.insert(key).second) continue;
        Quat z{Q(0), Q(0), Q(0), Q(0)};
        for (int a = 0; a < 4; ++a) z = quat_add(z, quat_scale(to_quat(lb[a]), Q(c[a])));
        std::vector<QVec> gens = qI.basis();
        for (auto& b : I.lattice.basis()) gens.push_back(to_vec(A.mul(z, to_quat(b))));
        out.push_back(RightIdeal{Lattice::from_rows(gens), I.norm * q});
    }
    if (out.size() != static_cast<std::size_t>(p + 1)) throw Error("neighbor enumeration incomplete");
    return out;
}

bool is_equivalent(const QuatAlgebra& A, const RightIdeal& I, const RightIdeal& J) {
    Lattice L = lattice_product(A, I.lattice, lattice_conj(A, J.lattice));
    return represents(normalized_gram(A, L, I.norm * J.norm), Q(1));
}

Z unit_order(const QuatAlgebra& A, const Lattice& O) {
    auto c = count_by_value(norm_gram(A, O), 1);
    return Z(static_cast<unsigned long>(c[1]));
}

Q mass_eichler(const Z& D, const Z& M) {
    Q m(1, 12);
    for (auto& [p, e] : factor(D)) m *= Q(p - 1);
    for (auto& [p, e] : factor(M)) {
        Z pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e - 1);
        m *= Q(pe * (p + 1));
    }
    return m;
}

ClassSet class_set(const Order& O, const ClassSetOptions& opt) {
    const QuatAlgebra& A = O.algebra();
    ClassSet cs;
    cs.order = O;
    cs.mass = mass_from_local_indices(O);

    struct Node {
        RightIdeal ideal;
        std::vector<std::size_t> invariant;
        std::size_t expanded = 0;  // number of primes already walked from here
    };
    std::vector<Node> nodes;
    Q weight = 0;
    auto add = [&](const RightIdeal& I) {
        Lattice L = left_order_of(A, I.lattice);
        Z e = unit_order(A, L);
        nodes.push_back(Node{I, class_invariant(A, I), 0});
        cs.left_orders.push_back(L);
        cs.units.push_back(e);
        cs.ideals.push_back(I);
        weight += Q(1) / Q(e);
    };
    add(unit_ideal(O));

    Z q = opt.first_prime == 0 ? Z(2) : opt.first_prime;
    while (O.level % q == 0) q = next_prime(q);
    const std::size_t max_primes = 12;
    while (true) {
        cs.primes.push_back(q);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                while (nodes[i].expanded < cs.primes.size()) {
                    Z p = cs.primes[nodes[i].expanded++];
                    for (auto& J : q_neighbors(O, nodes[i].ideal, p)) {
                        auto inv = class_invariant(A, J);
                        bool found = false;
                        for (auto& n : nodes) {
                            if (n.invariant != inv) continue;
                            if (is_equivalent(A, n.ideal, J)) {
                                found = true;
                                break;
                            }
                        }
                        if (found) continue;
                        if (nodes.size() >= opt.max_classes)
                            throw BudgetError("class set exceeds the configured budget of " +
                                              std::to_string(opt.max_classes) + " classes");
                        add(J);
                        progress = true;
                        if (weight > cs.mass)
                            throw MassMismatch("class weights " + to_string(weight) + " exceed mass " +
                                               to_string(cs.mass));
                    }
                }
            }
        }
        if (weight == cs.mass) break;
        if (cs.primes.size() >= max_primes)
            throw BudgetError("neighbor walk closed with weight " + to_string(weight) + " below mass " +
                              to_string(cs.mass));
        q = next_prime(q);
        while (O.level % q == 0) q = next_prime(q);
    }

    // canonical order: the order itself first, then by (norm, lattice)
    std::vector<std::size_t> idx(cs.ideals.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin() + 1, idx.end(), [&](std::size_t a, std::size_t b) {
        if (cs.ideals[a].norm != cs.ideals[b].norm) return cs.ideals[a].norm < cs.ideals[b].norm;
        return cs.ideals[a].lattice < cs.ideals[b].lattice;
    });
    ClassSet sorted = cs;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        sorted.ideals[k] = cs.ideals[idx[k]];
        sorted.left_orders[k] = cs.left_orders[idx[k]];
        sorted.units[k] = cs.units[idx[k]];
    }
    return sorted;
}

std::string serialize(const ClassSet& cs) {
    std::ostringstream os;
    os << cs.order.serialize();
    os << "classes " << cs.size() << "\n";
    os << "mass " << to_string(cs.mass) << "\n";
    for (std::size_t i = 0; i < cs.size(); ++i)
        os << "ideal " << i + 1 << " norm " << to_string(cs.ideals[i].norm) << " units "
           << cs.units[i].get_str() << " basis " << cs.ideals[i].lattice.serialize() << "\n";
    return os.str();
}

}  // namespace qmf
