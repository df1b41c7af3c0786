#include <sstream>

#include "doctest.h"
#include "qmf/jl.hpp"
#include "qmf/theta.hpp"

using namespace qmf;

namespace {

const std::string kGood11 =
    R"({"level": 11, "label": "11a", "dim": 1, "ap": {"2": -2, "3": -1}, )"
    R"("bad": {"11": {"c": 1, "kind": "steinberg", "minimal": true}}})";

std::size_t failing_line(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_fixtures(in);
    } catch (const FixtureError& e) {
        return e.line;
    }
    return 0;
}

const FixtureDB& db() {
    static FixtureDB d = load_fixtures(QMF_FIXTURES);
    return d;
}

LocalRepDescriptor rep(RepKind k, unsigned c, bool minimal = true) {
    LocalRepDescriptor d;
    d.kind = k;
    d.c = c;
    d.minimal = minimal;
    return d;
}

OrderLocalType ord(long p, EType e, unsigned r, unsigned t = 0) { return OrderLocalType{Z(p), e, r, t}; }

}  // namespace

TEST_CASE("fixture parsing") {
    std::istringstream in(kGood11 + "\n");
    auto d = parse_fixtures(in);
    REQUIRE(d.records.size() == 1);
    CHECK(d.records[0].ap.at(2) == -2);
    CHECK(d.records[0].bad.at(11).kind == RepKind::Steinberg);

    // Hasse bound: 3^2 > 4 * 2
    std::string hasse = R"({"level": 11, "label": "x", "dim": 1, "ap": {"2": 3}, )"
                        R"("bad": {"11": {"c": 1, "kind": "steinberg", "minimal": true}}})";
    CHECK(failing_line(kGood11 + "\n" + hasse + "\n") == 2);
    std::string st121 = R"({"level": 121, "label": "y", "dim": 1, "ap": {"2": 0}, )"
                        R"("bad": {"11": {"c": 2, "kind": "steinberg", "minimal": true}}})";
    CHECK(failing_line(st121 + "\n") == 1);
    CHECK(failing_line(kGood11 + "\n" + kGood11 + "\n") == 2);
    CHECK(failing_line(kGood11 + "\n\n") == 2);
    CHECK(failing_line("{\"level\": 11,\n") == 1);
    std::string extra = R"({"level": 11, "label": "z", "dim": 1, "ap": {}, "x": 1, )"
                        R"("bad": {"11": {"c": 1, "kind": "steinberg", "minimal": true}}})";
    CHECK(failing_line(extra + "\n") == 1);
    std::string wrong_bad = R"({"level": 22, "label": "w", "dim": 1, "ap": {}, )"
                            R"("bad": {"11": {"c": 1, "kind": "steinberg", "minimal": true}}})";
    CHECK(failing_line(wrong_bad + "\n") == 1);
    std::string sq = R"({"level": 121, "label": "v", "dim": 1, "ap": {"11": 1}, )"
                     R"("bad": {"11": {"c": 2, "kind": "supercuspidal", "minimal": true}}})";
    CHECK(failing_line(sq + "\n") == 1);
}

TEST_CASE("bundled fixtures cover the needed levels") {
    CHECK(db().records.size() > 100);
    for (long N : {11L, 22L, 33L, 121L, 125L, 343L, 49L, 75L})
        CHECK(Z(db().dim_at_level(N)) == dim_new_cusp(N));
}

TEST_CASE("cusp form dimensions") {
    CHECK(dim_cusp(11) == 1);
    CHECK(dim_cusp(22) == 2);
    CHECK(dim_cusp(1) == 0);
    CHECK(dim_cusp(121) == 6);
    CHECK(dim_new_cusp(11) == 1);
    CHECK(dim_new_cusp(1) == 0);
    CHECK(dim_new_cusp(22) == 0);
    CHECK(dim_new_cusp(121) == 4);
    CHECK(dim_new_cusp(37) == 2);
}

TEST_CASE("local multiplicity table") {
    using K = RepKind;
    const auto U = EType::Unramified, R = EType::Ramified;
    // conductor above the level exponent
    CHECK(local_multiplicity(rep(K::Supercuspidal, 4), ord(3, U, 3)) == Mult::Zero);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 4), ord(3, R, 2)) == Mult::Zero);
    CHECK(local_multiplicity(rep(K::SpecialTwist, 2), ord(5, R, 1)) == Mult::Zero);
    // unramified quadratic type
    CHECK(local_multiplicity(rep(K::Steinberg, 1), ord(11, U, 1)) == Mult::One);
    CHECK(local_multiplicity(rep(K::Steinberg, 1), ord(11, U, 3)) == Mult::One);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 3), ord(5, U, 3)) == Mult::One);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 2), ord(5, U, 3)) == Mult::Zero);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 2, false), ord(5, U, 3)) == Mult::Zero);
    CHECK(local_multiplicity(rep(K::SpecialTwist, 2), ord(5, U, 3)) == Mult::Zero);
    // ramified quadratic type
    CHECK(local_multiplicity(rep(K::Steinberg, 1), ord(11, R, 2)) == Mult::One);
    CHECK(local_multiplicity(rep(K::SpecialTwist, 2), ord(11, R, 2)) == Mult::One);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 2), ord(11, R, 2)) == Mult::Two);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 4), ord(11, R, 4)) == Mult::Two);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 3), ord(11, R, 4)) == Mult::ConjecturalOne);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 4, false), ord(11, R, 4)) == Mult::Zero);
    // ramified type at odd exponent is outside the known cases
    CHECK(local_multiplicity(rep(K::Supercuspidal, 3), ord(3, R, 3)) == Mult::Unknown);
    CHECK(local_multiplicity(rep(K::Steinberg, 1), ord(3, R, 3)) == Mult::One);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 3), ord(2, R, 4)) == Mult::One);
    CHECK(local_multiplicity(rep(K::SpecialTwist, 2), ord(2, R, 4)) == Mult::Unknown);
    CHECK(local_multiplicity(rep(K::Supercuspidal, 4, false), ord(2, R, 4, 1)) == Mult::Unknown);
    auto nonmin = rep(K::Supercuspidal, 6, false);
    nonmin.minimal_conductor = 2;
    CHECK(local_multiplicity(nonmin, ord(2, R, 6, 1)) == Mult::Zero);
    nonmin.minimal_conductor = 5;
    CHECK(local_multiplicity(nonmin, ord(2, R, 6, 1)) == Mult::Unknown);
    // only discrete series transfer
    CHECK(local_multiplicity(rep(K::PrincipalSeries, 2), ord(11, R, 2)) == Mult::Zero);
    CHECK(local_multiplicity(rep(K::Unknown, 5), ord(2, R, 6)) == Mult::Unknown);
}

TEST_CASE("local multiplicity never exceeds e(E/F)") {
    using K = RepKind;
    for (K k : {K::Unramified, K::Steinberg, K::SpecialTwist, K::PrincipalSeries, K::Supercuspidal, K::Unknown})
        for (unsigned c = 0; c <= 7; ++c)
            for (bool minimal : {true, false})
                for (long p : {2L, 3L, 11L})
                    for (unsigned r = 1; r <= 7; ++r)
                        for (EType e : {EType::Unramified, EType::Ramified}) {
                            auto o = ord(p, e, r, p == 2 ? 1 : 0);
                            Mult m = Mult::Unknown;
                            CHECK_NOTHROW(m = local_multiplicity(rep(k, c, minimal), o));
                            unsigned v = m == Mult::Two ? 2 : (m == Mult::One || m == Mult::ConjecturalOne) ? 1 : 0;
                            CHECK(v <= ramification_index(o));
                        }
    CHECK(ramification_index(ord(3, EType::Unramified, 3)) == 1);
    CHECK(ramification_index(ord(3, EType::Ramified, 2)) == 2);
}

TEST_CASE("decomposition predictions") {
    auto p11 = predict_decomposition(build_order(11, 11), db());
    REQUIRE(p11.terms.size() == 1);
    CHECK(p11.terms[0].level == 11);
    CHECK(p11.terms[0].multiplicity == 1);
    CHECK(p11.confidence == Confidence::Proven);

    auto p22 = predict_decomposition(build_order(11, 22), db());
    REQUIRE(p22.terms.size() == 1);
    CHECK(p22.terms[0].level == 11);
    CHECK(p22.terms[0].multiplicity == 2);
    CHECK(p22.predicted_cusp_dim == 2);

    auto p121 = predict_decomposition(build_order(11, 121), db());
    CHECK(p121.predicted_cusp_dim == 8);
    unsigned twos = 0, ones = 0;
    for (auto& t : p121.terms) {
        CHECK(t.form->bad.at(11).kind != RepKind::PrincipalSeries);
        (t.multiplicity == 2 ? twos : ones) += t.dim;
    }
    CHECK(ones == 2);
    CHECK(twos == 3);

    FixtureDB empty;
    CHECK_THROWS_AS(predict_decomposition(build_order(11, 11), empty), CoverageError);
}

TEST_CASE("decomposition verification") {
    HeckeContext ctx;
    for (auto [D, N] : std::vector<std::pair<long, long>>{{11, 11}, {11, 22}, {11, 33}, {11, 121}, {5, 125}, {3, 15}}) {
        CAPTURE(N);
        Order O = build_order(D, N);
        auto rep = verify_decomposition(predict_decomposition(O, db()), ctx, O, {2, 3, 5, 7});
        CHECK(rep.dim_match);
        CHECK(rep.verdict == Verdict::Verified);
    }
    Order o32 = build_order(2, 32);
    auto rep = verify_decomposition(predict_decomposition(o32, db()), ctx, o32, {3, 5});
    CHECK(rep.verdict == Verdict::Unknown);
}

TEST_CASE("expected theta kernel") {
    HeckeContext ctx;
    Order O = build_order(11, 121);
    auto k = expected_theta_kernel(O, db());
    REQUIRE(k.has_value());
    CHECK(*k == theta_kernel_dimension(ctx, O).kernel);
    CHECK(expected_theta_kernel(build_order(11, 11), db()) == std::optional<std::size_t>(0));
}

TEST_CASE("Eisenstein congruence at level 125") {
    HeckeContext ctx;
    auto r = congruence_check(ctx, 5, {2, 3, 7, 11, 13});
    CHECK(r.holds);
    CHECK(r.kernel_dim >= 1);
    CHECK(fixture_congruence(db(), 5, {2, 3, 7, 11, 13}) == std::optional<bool>(true));
    CHECK_THROWS(congruence_check(ctx, 2, {3}));
}
