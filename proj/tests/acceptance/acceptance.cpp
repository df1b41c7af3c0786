// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "../unit/oracles.hpp"
#include "qmf/jl.hpp"
#include "qmf/theta.hpp"

using namespace qmf;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool c, const std::string& what) {
        if (!c) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const FixtureDB& fixtures() {
    static FixtureDB db = load_fixtures(QMF_FIXTURES);
    return db;
}

struct Case {
    long D, M;
};
const std::vector<Case> kMassCases{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}, {13, 1}, {2, 3}, {3, 5}, {11, 2}};

Outcome mass_formula() {
    Outcome o;
    for (auto c : kMassCases) {
        auto t0 = Clock::now();
        auto cs = class_set(build_order(c.D, c.D * c.M));
        Q s = 0;
        for (auto& e : cs.units) s += Q(1) / Q(e);
        auto f = oracle::eichler_mass(c.D, c.M);
        std::string tag = "(" + std::to_string(c.D) + "," + std::to_string(c.M) + ")";
        o.require(s == Q(f.num, f.den), tag + " mass " + to_string(s));
        o.require(seconds_since(t0) < 10, tag + " slower than 10 s");
    }
    return o;
}

Outcome brandt_suite() {
    Outcome o;
    for (auto c : kMassCases) {
        long N = c.D * c.M;
        std::string tag = "N=" + std::to_string(N);
        BrandtModule m(class_set(build_order(c.D, N)), 4);
        const auto& e = m.class_set().units;
        const std::size_t h = m.size();
        o.require(m.matrix(1) == RatMat::identity(h), tag + " A1");
        std::vector<RatMat> a(31);
        for (long n = 1; n <= 30; ++n) {
            a[n] = m.matrix(n);
            for (auto& x : a[n].a) o.require(x.get_den() == 1 && x >= 0, tag + " entry of A" + std::to_string(n));
            if (oracle::gcd(n, N) != 1) continue;
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < h; ++j)
                    o.require(Q(e[j]) * a[n](i, j) == Q(e[i]) * a[n](j, i), tag + " symmetry A" + std::to_string(n));
            // A_n 1 = C(n, E) 1
            Z expected = divisor_sum_constrained(Z(n), Z(c.M), Z(c.D));
            for (std::size_t i = 0; i < h; ++i) {
                Q row = 0;
                for (std::size_t j = 0; j < h; ++j) row += a[n](i, j);
                o.require(row == Q(expected), tag + " row sum A" + std::to_string(n));
            }
        }
        for (long x = 1; x <= 30; ++x)
            for (long y = x + 1; y <= 30; ++y)
                o.require(a[x] * a[y] == a[y] * a[x], tag + " commutativity");
        for (long p : {2L, 3L, 5L}) {
            if (N % p == 0) continue;
            long pr = p, prev = 1;
            while (pr * p <= 30) {
                RatMat rhs = mat_sub(a[p] * a[pr], mat_scale(a[prev], Q(p)));
                o.require(a[pr * p] == rhs, tag + " recurrence at " + std::to_string(pr * p));
                prev = pr;
                pr *= p;
            }
        }
    }
    return o;
}

Outcome level11_basis() {
    Outcome o;
    HeckeContext ctx;
    auto span = theta_new_span(ctx, build_order(11, 11), 50);
    o.require(span.size() == 1, "span dimension " + std::to_string(span.size()));
    if (span.size() != 1) return o;
    auto eta = oracle::eta_11(50);
    for (int n = 1; n <= 50; ++n) o.require(span[0].coeffs[n] == eta[n], "coefficient " + std::to_string(n));
    return o;
}

Outcome oldform_multiplicity() {
    Outcome o;
    HeckeContext ctx;
    Order o22 = build_order(11, 22);
    const BrandtModule& m22 = ctx.module(o22);
    o.require(m22.cusp_space().cols == 2, "cusp dim at 22");
    o.require(m22.cusp_charpoly(3) == poly_from_ints({1, 2, 1}), "charpoly A3 at 22");
    o.require(ctx.new_charpoly(o22, 3) == Poly{Q(1)}, "new part at 22");
    // level 33: the level 11 form twice, plus the 33-new forms, read off the fixtures
    Order o33 = build_order(11, 33);
    const BrandtModule& m33 = ctx.module(o33);
    Poly predicted{Q(1)};
    std::size_t dim = 0;
    for (long L : {11L, 33L})
        for (auto* f : fixtures().at_level(L)) {
            unsigned mult = L == 11 ? 2 : 1;
            for (unsigned k = 0; k < mult; ++k) predicted = poly_mul(predicted, f->ap_polys.at(2));
            dim += mult * f->dim;
        }
    o.require(m33.cusp_space().cols == dim, "cusp dim at 33");
    o.require(m33.cusp_charpoly(2) == predicted, "charpoly A2 at 33");
    Poly new33{Q(1)};
    for (auto* f : fixtures().at_level(33)) new33 = poly_mul(new33, f->ap_polys.at(2));
    o.require(ctx.new_charpoly(o33, 2) == new33, "new part at 33");
    return o;
}

Outcome level_p2() {
    Outcome o;
    auto t0 = Clock::now();
    HeckeContext ctx(4);
    Order O = build_order(11, 121);
    const BrandtModule& m = ctx.module(O);
    std::size_t expected = fixtures().dim_at_level(11);
    Poly predicted{Q(1)};
    for (auto* f : fixtures().at_level(11)) predicted = poly_mul(predicted, f->ap_polys.at(2));
    for (auto* f : fixtures().at_level(121)) {
        const auto& d = f->bad.at(11);
        unsigned mult = 0;
        if (d.kind == RepKind::SpecialTwist) mult = 1;
        if (d.kind == RepKind::Supercuspidal && d.minimal) mult = 2;
        expected += mult * f->dim;
        for (unsigned k = 0; k < mult; ++k) predicted = poly_mul(predicted, f->ap_polys.at(2));
    }
    o.require(m.cusp_space().cols == expected, "cusp dim " + std::to_string(m.cusp_space().cols) + " vs " +
                                                   std::to_string(expected));
    o.require(m.cusp_charpoly(2) == predicted, "charpoly A2 differs from the fixture product");
    // principal series forms must not occur: the computed polynomial leaves no room for them
    for (auto* f : fixtures().at_level(121)) {
        if (f->bad.at(11).kind != RepKind::PrincipalSeries) continue;
        Poly q = m.cusp_charpoly(2), fac = f->ap_polys.at(2);
        unsigned in_pred = 0, in_comp = 0;
        for (Poly t = predicted; poly_divmod(t, fac).second.empty(); t = poly_divmod(t, fac).first) ++in_pred;
        for (Poly t = q; poly_divmod(t, fac).second.empty(); t = poly_divmod(t, fac).first) ++in_comp;
        o.require(in_comp == in_pred, "principal series factor " + f->label + " appears");
    }
    o.require(seconds_since(t0) < 60, "slower than 60 s");
    return o;
}

Outcome ramified_vanishing() {
    Outcome o;
    HeckeContext ctx;
    o.require(ramified_hecke_check(ctx, build_order(11, 121), 11, 1), "A11 on the 121-new part");
    const BrandtModule& m = ctx.module(build_order(11, 11));
    Z a11 = 0;
    for (auto* f : fixtures().at_level(11)) a11 = f->ap.at(11);
    o.require(m.cusp_charpoly(11) == poly_from_ints({-a11.get_si(), 1}), "A11 on the level 11 cusp line");
    return o;
}

Outcome eisenstein_congruence() {
    Outcome o;
    HeckeContext ctx(4);
    for (auto [p, ells] : std::vector<std::pair<long, std::vector<long>>>{{5, {2, 3, 7, 11, 13}},
                                                                           {7, {2, 3, 5, 11, 13}}}) {
        auto t0 = Clock::now();
        auto r = congruence_check(ctx, p, ells);
        o.require(r.holds, "p=" + std::to_string(p));
        o.require(seconds_since(t0) < 300, "p=" + std::to_string(p) + " slower than 5 min");
    }
    return o;
}

Outcome special_orders() {
    Outcome o;
    for (long p : {3L, 5L, 7L, 11L}) {
        std::string tag = "p=" + std::to_string(p);
        auto md = maximal_data(p);
        const auto& A = *md->algebra;
        auto P = two_sided_prime(A, md->omax, p);
        Quat wu = find_quadratic_generator(A, md->omax, P, EType::Unramified, 0);
        for (unsigned k = 1; k <= 2; ++k)
            o.require(special_lattice(A, md->omax, P, wu, 2 * k - 1) == special_lattice(A, md->omax, P, wu, 2 * k),
                      tag + " O_" + std::to_string(2 * k - 1) + " != O_" + std::to_string(2 * k));
        o.require(special_order(A, md->omax, p, 1, EType::Unramified) == md->omax, tag + " O_1 unramified");
        o.require(special_order(A, md->omax, p, 1, EType::Ramified) == md->omax, tag + " O_1 ramified");
        std::vector<Lattice> chain;
        for (unsigned r = 1; r <= 5; ++r) chain.push_back(special_order(A, md->omax, p, r, EType::Ramified));
        for (std::size_t i = 0; i < chain.size(); ++i)
            for (std::size_t j = i + 1; j < chain.size(); ++j) o.require(chain[i] != chain[j], tag + " chain");
        o.require(special_order(A, md->omax, p, 2, EType::Ramified, 0) ==
                      special_order(A, md->omax, p, 2, EType::Ramified, 1),
                  tag + " O_2 depends on E");
        // the independence above is not vacuous
        o.require(special_order(A, md->omax, p, 3, EType::Ramified, 0) !=
                      special_order(A, md->omax, p, 3, EType::Ramified, 1),
                  tag + " O_3 variants coincide");
    }
    return o;
}

Outcome multiplicity_table() {
    Outcome o;
    using K = RepKind;
    const auto U = EType::Unramified, R = EType::Ramified;
    auto rep = [](K k, unsigned c, bool minimal, std::optional<unsigned> mc = {}) {
        LocalRepDescriptor d;
        d.kind = k;
        d.c = c;
        d.minimal = minimal;
        d.minimal_conductor = mc;
        return d;
    };
    struct Row {
        const char* name;
        LocalRepDescriptor rep;
        OrderLocalType ord;
        Mult want;
    };
    const std::vector<Row> rows{
        {"conductor above r", rep(K::Supercuspidal, 4, true), {3, U, 3, 0}, Mult::Zero},
        {"conductor above r, ramified", rep(K::Supercuspidal, 4, true), {3, R, 2, 0}, Mult::Zero},
        {"steinberg, unramified", rep(K::Steinberg, 1, true), {5, U, 3, 0}, Mult::One},
        {"minimal odd, unramified", rep(K::Supercuspidal, 3, true), {5, U, 3, 0}, Mult::One},
        {"minimal even, unramified", rep(K::Supercuspidal, 2, true), {5, U, 3, 0}, Mult::Zero},
        {"non-minimal, unramified", rep(K::Supercuspidal, 2, false), {5, U, 3, 0}, Mult::Zero},
        {"steinberg, ramified", rep(K::Steinberg, 1, true), {5, R, 2, 0}, Mult::One},
        {"special twist, ramified", rep(K::SpecialTwist, 2, true), {5, R, 2, 0}, Mult::One},
        {"minimal even, ramified", rep(K::Supercuspidal, 2, true), {5, R, 2, 0}, Mult::Two},
        {"minimal odd below r, ramified", rep(K::Supercuspidal, 3, true), {5, R, 4, 0}, Mult::ConjecturalOne},
        {"dyadic c=3 below r", rep(K::Supercuspidal, 3, true), {2, R, 4, 1}, Mult::One},
        {"non-minimal, ramified odd p", rep(K::Supercuspidal, 4, false), {5, R, 4, 0}, Mult::Zero},
        {"dyadic non-minimal, far from minimal", rep(K::Supercuspidal, 6, false, 2), {2, R, 6, 1}, Mult::Zero},
        {"dyadic non-minimal, otherwise", rep(K::Supercuspidal, 6, false, 5), {2, R, 6, 1}, Mult::Unknown},
        {"principal series", rep(K::PrincipalSeries, 2, true), {5, R, 2, 0}, Mult::Zero},
    };
    for (auto& r : rows) o.require(local_multiplicity(r.rep, r.ord) == r.want, r.name);
    // structural bound by e(E/F): local_multiplicity throws when it is exceeded
    for (K k : {K::Steinberg, K::SpecialTwist, K::PrincipalSeries, K::Supercuspidal, K::Unknown})
        for (unsigned c = 1; c <= 6; ++c)
            for (unsigned r = 1; r <= 6; ++r)
                for (long p : {2L, 3L})
                    for (EType e : {U, R})
                        for (bool minimal : {true, false}) {
                            try {
                                local_multiplicity(rep(k, c, minimal), OrderLocalType{Z(p), e, r, 1});
                            } catch (const Error&) {
                                o.require(false, "bound exceeded");
                            }
                        }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"mass formula", mass_formula},
        {"Brandt structural suite, n <= 30", brandt_suite},
        {"level 11 theta span against the eta product", level11_basis},
        {"oldform multiplicity at levels 22 and 33", oldform_multiplicity},
        {"level 121 decomposition", level_p2},
        {"ramified Hecke vanishing", ramified_vanishing},
        {"Eisenstein congruences at 125 and 343", eisenstein_congruence},
        {"special order identities", special_orders},
        {"local multiplicity table", multiplicity_table},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %zu: %s  %s (%.2f s)%s%s\n", k + 1, o.ok ? "PASS" : "FAIL", criteria[k].first,
                    seconds_since(t0), o.ok ? "" : "  ", o.detail.c_str());
        std::fflush(stdout);
        failures += !o.ok;
    }
    return failures ? 1 : 0;
}
