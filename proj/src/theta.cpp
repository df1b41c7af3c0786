#include "qmf/theta.hpp"

#include "json.hpp"

namespace qmf {

std::string to_record(const QExpansion& f) {
    nlohmann::ordered_json j;
    j["label"] = f.label;
    j["precision"] = f.precision;
    auto arr = nlohmann::json::array();
    for (auto& c : f.coeffs) arr.push_back(to_string(c));
    j["coefficients"] = arr;
    return j.dump();
}

QExpansion theta_entry(const BrandtModule& m, std::size_t i, std::size_t j, long prec) {
    if (i >= m.size() || j >= m.size()) throw ArgumentError("class index out of range");
    if (prec < 1) throw ArgumentError("precision must be positive");
    QExpansion f;
    f.label = "theta-" + std::to_string(i + 1) + "-" + std::to_string(j + 1);
    f.precision = prec;
    const auto& e = m.class_set().units;
    f.coeffs.push_back(i == j ? Q(1) / Q(e[i]) : Q(0));
    for (long n = 1; n <= prec; ++n) {
        Q c(m.pair_count(i, j, n));
        f.coeffs.push_back(c / Q(e[j]));
    }
    for (auto& c : f.coeffs) c.canonicalize();
    return f;
}

long sturm_bound(const Z& N) {
    Z idx = N;
    for (auto& [p, e] : factor(N)) idx = idx / p * (p + 1);
    Z b = idx / 6;
    if (b * 6 < idx) b += 1;
    return b.get_si();
}

std::vector<QExpansion> theta_new_span(HeckeContext& ctx, const Order& O, long prec) {
    if (prec < 1) throw ArgumentError("precision must be positive");
    const BrandtModule& m = ctx.module(O);
    RatMat s = ctx.new_subspace(O);
    const std::size_t h = m.size(), d = s.cols;
    if (d == 0) return {};
    // weighted transpose: rows of s^t diag(1/e)
    RatMat st(d, h);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t i = 0; i < h; ++i) st(a, i) = s(i, a) / Q(m.class_set().units[i]);
    const std::size_t pairs = d * (d + 1) / 2;
    RatMat coeffs(pairs, prec);
    for (long n = 1; n <= prec; ++n) {
        RatMat g = st * (m.matrix(n) * s);
        std::size_t row = 0;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) coeffs(row++, n - 1) = g(a, b);
    }
    Rref rr = rref(coeffs);
    std::vector<QExpansion> out;
    for (std::size_t k = 0; k < rr.pivots.size(); ++k) {
        QExpansion f;
        f.label = "theta-new-" + O.level.get_str() + "-" + std::to_string(k + 1);
        f.precision = prec;
        f.coeffs.push_back(Q(0));
        for (long n = 0; n < prec; ++n) f.coeffs.push_back(rr.r(k, n));
        out.push_back(f);
    }
    return out;
}

ThetaKernel theta_kernel_dimension(HeckeContext& ctx, const Order& O, long prec) {
    if (prec == 0) prec = sturm_bound(O.level) + 10;
    ThetaKernel t;
    t.dim_new = ctx.new_subspace(O).cols;
    t.dim_theta = theta_new_span(ctx, O, prec).size();
    t.kernel = t.dim_new - t.dim_theta;
    return t;
}

QExpansion eisenstein_q_expansion(const Z& a, const Z& b, long prec) {
    Z g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (a < 1 || b < 1 || g != 1) throw ArgumentError("Eisenstein parameters must be coprime positive integers");
    if (a == 1 && b == 1) throw ArgumentError("E_{2,1,1} is not a modular form");
    QExpansion f;
    f.label = "E2-" + a.get_str() + "-" + b.get_str();
    f.precision = prec;
    Q c0(-1, 24);
    for (auto& [p, e] : factor(a * b)) c0 *= Q(p - 1, p);
    c0.canonicalize();
    f.coeffs.push_back(c0);
    for (long n = 1; n <= prec; ++n) f.coeffs.push_back(Q(divisor_sum_constrained(Z(n), a, b)));
    return f;
}

}  // namespace qmf
