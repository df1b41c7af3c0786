#include "qmf/jl.hpp"

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qmf {

const char* rep_kind_name(RepKind k) {
    switch (k) {
        case RepKind::Unramified: return "unramified";
        case RepKind::Steinberg: return "steinberg";
        case RepKind::SpecialTwist: return "special-twist";
        case RepKind::PrincipalSeries: return "principal-series";
        case RepKind::Supercuspidal: return "supercuspidal";
        case RepKind::Unknown: return "unknown";
    }
    return "?";
}

const char* mult_name(Mult m) {
    switch (m) {
        case Mult::Zero: return "0";
        case Mult::One: return "1";
        case Mult::Two: return "2";
        case Mult::ConjecturalOne: return "1?";
        case Mult::Unknown: return "unknown";
    }
    return "?";
}

const char* confidence_name(Confidence c) {
    switch (c) {
        case Confidence::Proven: return "proven";
        case Confidence::Conjectural: return "conjectural";
        case Confidence::Unknown: return "unknown";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Verified: return "verified";
        case Verdict::Falsified: return "falsified";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

// ---------------------------------------------------------------- fixtures

std::vector<const NewformRecord*> FixtureDB::at_level(const Z& N) const {
    std::vector<const NewformRecord*> out;
    for (auto& r : records)
        if (r.level == N) out.push_back(&r);
    return out;
}

unsigned FixtureDB::dim_at_level(const Z& N) const {
    unsigned d = 0;
    for (auto* r : at_level(N)) d += r->dim;
    return d;
}

namespace {

using nlohmann::json;

long parse_prime_key(const std::string& s, std::size_t line) {
    if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos || s[0] == '0')
        throw FixtureError(line, "bad prime key '" + s + "'");
    long p = std::stol(s);
    if (!is_prime(Z(p))) throw FixtureError(line, "key '" + s + "' is not a prime");
    return p;
}

void require_keys(const json& o, const std::set<std::string>& required, const std::set<std::string>& optional,
                  const std::string& what, std::size_t line) {
    if (!o.is_object()) throw FixtureError(line, what + " must be an object");
    for (auto& k : required)
        if (!o.contains(k)) throw FixtureError(line, what + " is missing key '" + k + "'");
    for (auto it = o.begin(); it != o.end(); ++it)
        if (!required.count(it.key()) && !optional.count(it.key()))
            throw FixtureError(line, what + " has unexpected key '" + it.key() + "'");
}

long as_long(const json& v, const std::string& what, std::size_t line) {
    if (!v.is_number_integer()) throw FixtureError(line, what + " must be an integer");
    return v.get<long>();
}

LocalRepDescriptor parse_local(const json& o, std::size_t line) {
    if (!o.is_object() || !o.contains("kind") || !o["kind"].is_string())
        throw FixtureError(line, "local type needs a string 'kind'");
    std::string kind = o["kind"].get<std::string>();
    LocalRepDescriptor d;
    if (kind == "unknown") {
        require_keys(o, {"kind"}, {"c", "minimal"}, "local type", line);
        d.kind = RepKind::Unknown;
        if (o.contains("c")) d.c = static_cast<unsigned>(as_long(o["c"], "c", line));
        return d;
    }
    require_keys(o, {"c", "kind", "minimal"}, {"minimal_c"}, "local type", line);
    static const std::map<std::string, RepKind> kinds{{"unramified", RepKind::Unramified},
                                                      {"steinberg", RepKind::Steinberg},
                                                      {"special-twist", RepKind::SpecialTwist},
                                                      {"principal-series", RepKind::PrincipalSeries},
                                                      {"supercuspidal", RepKind::Supercuspidal}};
    auto it = kinds.find(kind);
    if (it == kinds.end()) throw FixtureError(line, "unknown local kind '" + kind + "'");
    d.kind = it->second;
    long c = as_long(o["c"], "c", line);
    if (c < 0) throw FixtureError(line, "negative conductor exponent");
    d.c = static_cast<unsigned>(c);
    if (!o["minimal"].is_boolean()) throw FixtureError(line, "'minimal' must be a boolean");
    d.minimal = o["minimal"].get<bool>();
    if (o.contains("minimal_c")) d.minimal_conductor = static_cast<unsigned>(as_long(o["minimal_c"], "minimal_c", line));
    if (d.kind == RepKind::Steinberg && d.c != 1) throw FixtureError(line, "steinberg needs c = 1");
    return d;
}

NewformRecord parse_record(const std::string& text, std::size_t line) {
    json o;
    try {
        o = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FixtureError(line, std::string("parse error: ") + e.what());
    }
    require_keys(o, {"level", "label", "dim", "ap", "bad"}, {"ap_polys"}, "record", line);
    NewformRecord r;
    r.line = line;
    long level = as_long(o["level"], "level", line);
    if (level < 1) throw FixtureError(line, "level must be positive");
    r.level = level;
    if (!o["label"].is_string()) throw FixtureError(line, "label must be a string");
    r.label = o["label"].get<std::string>();
    long dim = as_long(o["dim"], "dim", line);
    if (dim < 1) throw FixtureError(line, "dim must be positive");
    r.dim = static_cast<unsigned>(dim);
    if (!o["ap"].is_object()) throw FixtureError(line, "ap must be an object");
    for (auto it = o["ap"].begin(); it != o["ap"].end(); ++it)
        r.ap[parse_prime_key(it.key(), line)] = Z(as_long(it.value(), "ap value", line));
    if (!o["bad"].is_object()) throw FixtureError(line, "bad must be an object");
    for (auto it = o["bad"].begin(); it != o["bad"].end(); ++it)
        r.bad[Z(parse_prime_key(it.key(), line))] = parse_local(it.value(), line);
    if (o.contains("ap_polys")) {
        if (!o["ap_polys"].is_object()) throw FixtureError(line, "ap_polys must be an object");
        for (auto it = o["ap_polys"].begin(); it != o["ap_polys"].end(); ++it) {
            long p = parse_prime_key(it.key(), line);
            if (!it.value().is_array()) throw FixtureError(line, "ap_polys entries must be arrays");
            std::vector<long> c;
            for (auto& x : it.value()) c.push_back(as_long(x, "ap_polys coefficient", line));
            Poly f = poly_from_ints(c);
            if (poly_degree(f) != static_cast<int>(r.dim) || f.back() != 1)
                throw FixtureError(line, "ap_polys entry for " + it.key() + " is not monic of degree dim");
            r.ap_polys[p] = f;
        }
    }
    return r;
}

void validate(const NewformRecord& r) {
    std::set<Z> primes;
    for (auto& [p, e] : factor(r.level)) primes.insert(p);
    std::set<Z> keys;
    for (auto& [p, d] : r.bad) keys.insert(p);
    if (keys != primes) throw FixtureError(r.line, "bad primes do not match the level");
    for (auto& [p, d] : r.bad) {
        unsigned v = valuation(r.level, p);
        if (d.kind == RepKind::Unknown) continue;
        if (d.kind == RepKind::Steinberg && v != 1) throw FixtureError(r.line, "steinberg at a prime dividing the level twice");
        if (d.c != v) throw FixtureError(r.line, "conductor exponent differs from the valuation of the level");
        if (d.kind == RepKind::Unramified) throw FixtureError(r.line, "unramified type at a bad prime");
    }
    for (auto& [p, a] : r.ap) {
        Z pz(p);
        Z D(r.dim);
        if (r.level % pz != 0) {
            // |a| <= dim * 2 sqrt(p)
            if (a * a > 4 * pz * D * D) throw FixtureError(r.line, "trace of a_" + std::to_string(p) + " violates the Hasse bound");
        } else {
            const auto& d = r.bad.at(pz);
            if (d.kind == RepKind::Steinberg) {
                if (abs(a) > D || (a - D) % 2 != 0) throw FixtureError(r.line, "steinberg trace of a_p inconsistent");
            } else if (valuation(r.level, pz) >= 2 && a != 0) {
                throw FixtureError(r.line, "a_p must vanish when p^2 divides the level");
            }
        }
    }
    for (auto& [p, f] : r.ap_polys) {
        auto it = r.ap.find(p);
        if (it != r.ap.end() && Q(-f[r.dim - 1]) != Q(it->second))
            throw FixtureError(r.line, "ap_polys trace differs from ap at " + std::to_string(p));
    }
}

}  // namespace

FixtureDB parse_fixtures(std::istream& in) {
    FixtureDB db;
    std::string text;
    std::size_t line = 0;
    std::set<std::string> labels;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) throw FixtureError(line, "empty line");
        NewformRecord r = parse_record(text, line);
        validate(r);
        if (!labels.insert(r.label).second) throw FixtureError(line, "duplicate label " + r.label);
        db.records.push_back(std::move(r));
    }
    return db;
}

FixtureDB load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureError(0, "cannot open " + path);
    return parse_fixtures(in);
}

// ---------------------------------------------------------------- dimensions

Z dim_cusp(const Z& N) {
    if (N < 1) throw ArgumentError("level must be positive");
    auto f = factor(N);
    Q mu(N);
    for (auto& [p, e] : f) mu *= Q(p + 1, p);
    Z nu2 = 1, nu3 = 1;
    if (N % 4 == 0) nu2 = 0;
    if (N % 9 == 0) nu3 = 0;
    for (auto& [p, e] : f) {
        nu2 *= 1 + kronecker(Z(-4), p);
        nu3 *= 1 + kronecker(Z(-3), p);
    }
    Z cusps = 0;
    for (auto& d : divisors(N)) {
        Z g;
        Z nd = N / d;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), nd.get_mpz_t());
        Z phi = g;
        for (auto& [p, e] : factor(g)) phi = phi / p * (p - 1);
        cusps += phi;
    }
    Q g = 1 + mu / 12 - Q(nu2) / 4 - Q(nu3) / 3 - Q(cusps) / 2;
    if (g.get_den() != 1) throw Error("genus formula produced a non-integer");
    return g.get_num();
}

Z dim_new_cusp(const Z& N) {
    static std::mutex mu;
    static std::map<Z, Z> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(N);
        if (it != memo.end()) return it->second;
    }
    Z d = dim_cusp(N);
    for (auto& M : divisors(N)) {
        if (M == N) continue;
        d -= Z(static_cast<unsigned long>(divisors(N / M).size())) * dim_new_cusp(M);
    }
    std::lock_guard<std::mutex> lock(mu);
    memo[N] = d;
    return d;
}

// ---------------------------------------------------------------- local multiplicities

OrderLocalType order_local_type(const Order& O, const Z& p) {
    const LocalOrderType* lt = O.local_at(p);
    if (!lt || lt->kind == LocalKind::SplitEichler) throw ArgumentError("prime must divide the discriminant");
    OrderLocalType o;
    o.p = p;
    o.etype = lt->kind == LocalKind::RamifiedUnramifiedQuadratic ? EType::Unramified : EType::Ramified;
    o.r = lt->r;
    o.t = lt->t;
    return o;
}

unsigned ramification_index(const OrderLocalType& ord) { return ord.etype == EType::Ramified ? 2 : 1; }

namespace {

Mult local_multiplicity_raw(const LocalRepDescriptor& rep, const OrderLocalType& ord) {
    if (rep.kind == RepKind::Unknown) return Mult::Unknown;
    // only discrete series transfer
    if (rep.kind == RepKind::Unramified || rep.kind == RepKind::PrincipalSeries) return Mult::Zero;
    if (rep.c > ord.r) return Mult::Zero;
    const bool dyadic = ord.p == 2;
    if (ord.etype == EType::Unramified) {
        if (rep.kind == RepKind::Steinberg) return Mult::One;
        // mu o N trivial on norms of unramified units forces mu unramified
        if (rep.kind == RepKind::SpecialTwist) return Mult::Zero;
        if (rep.minimal) return rep.c % 2 == 1 ? Mult::One : Mult::Zero;
        return Mult::Zero;
    }
    if (rep.kind == RepKind::Steinberg) return Mult::One;
    if (rep.kind == RepKind::SpecialTwist) return dyadic ? Mult::Unknown : Mult::One;
    // nothing is known for ramified type at odd exponent
    if (ord.r % 2 == 1) return Mult::Unknown;
    if (rep.minimal) {
        if (rep.c % 2 == 0) return Mult::Two;
        if (!dyadic) return Mult::ConjecturalOne;
        return rep.c == 3 ? Mult::One : Mult::Unknown;
    }
    if (!dyadic) return Mult::Zero;
    if (ord.t > 0 && rep.minimal_conductor) {
        unsigned t = ord.t;
        if (rep.c >= 2 * t + 4 && rep.c > *rep.minimal_conductor + t) return Mult::Zero;
    }
    return Mult::Unknown;
}

unsigned mult_value(Mult m) {
    switch (m) {
        case Mult::Zero: return 0;
        case Mult::One: return 1;
        case Mult::Two: return 2;
        case Mult::ConjecturalOne: return 1;
        case Mult::Unknown: return 0;
    }
    return 0;
}

Confidence worse(Confidence a, Confidence b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

}  // namespace

Mult local_multiplicity(const LocalRepDescriptor& rep, const OrderLocalType& ord) {
    Mult m = local_multiplicity_raw(rep, ord);
    if (m != Mult::Unknown && mult_value(m) > ramification_index(ord))
        throw ConsistencyError("local multiplicity exceeds e(E/F)");
    return m;
}

// ---------------------------------------------------------------- global prediction

DecompositionPrediction predict_decomposition(const Order& O, const FixtureDB& db) {
    DecompositionPrediction pred;
    pred.disc = O.disc();
    pred.level = O.level;
    std::vector<Z> levels;
    for (auto& L : divisors(O.level)) {
        bool ok = true;
        for (auto& p : O.algebra().ramified) ok = ok && (L % p == 0);
        if (ok) levels.push_back(L);
    }
    std::string missing;
    for (auto& L : levels)
        if (Z(db.dim_at_level(L)) != dim_new_cusp(L)) missing += (missing.empty() ? "" : ", ") + L.get_str();
    if (!missing.empty()) throw CoverageError("fixture data incomplete at levels " + missing);

    for (auto& L : levels) {
        for (auto* f : db.at_level(L)) {
            unsigned mult = 1;
            Confidence conf = Confidence::Proven;
            bool zero = false;
            for (auto& lt : O.local) {
                if (lt.kind == LocalKind::SplitEichler) {
                    unsigned c = valuation(L, lt.p);
                    if (c > lt.r) zero = true;
                    else mult *= lt.r - c + 1;
                    continue;
                }
                Mult m = local_multiplicity(f->bad.at(lt.p), order_local_type(O, lt.p));
                if (m == Mult::Zero) zero = true;
                else if (m == Mult::Unknown) conf = Confidence::Unknown;
                else {
                    if (m == Mult::ConjecturalOne) conf = worse(conf, Confidence::Conjectural);
                    mult *= mult_value(m);
                }
            }
            if (zero) continue;
            if (conf == Confidence::Unknown) mult = 0;
            pred.terms.push_back(PredictedTerm{L, f->label, f->dim, mult, conf, f});
            pred.predicted_cusp_dim += mult * f->dim;
            pred.confidence = worse(pred.confidence, conf);
        }
    }
    return pred;
}

DecompositionReport verify_decomposition(const DecompositionPrediction& pred, HeckeContext& ctx, const Order& O,
                                         const std::vector<long>& primes) {
    DecompositionReport rep;
    rep.prediction = pred;
    const BrandtModule& m = ctx.module(O);
    rep.computed_cusp_dim = m.cusp_space().cols;
    rep.eisenstein_dim = m.eisenstein_basis().size();
    rep.dim_match = rep.computed_cusp_dim == pred.predicted_cusp_dim;
    bool all_match = rep.dim_match;
    for (long ell : primes) {
        PrimeCheck pc;
        pc.ell = ell;
        if (O.level % ell == 0) {
            pc.skipped = true;
            rep.checks.push_back(pc);
            continue;
        }
        pc.computed = m.cusp_charpoly(ell);
        int deg = poly_degree(pc.computed);
        pc.computed_trace = deg > 0 ? Z(-pc.computed[deg - 1]) : Z(0);
        bool polys = true;
        Poly predicted{Q(1)};
        Z trace = 0;
        for (auto& t : pred.terms) {
            auto it = t.form->ap.find(ell);
            if (it == t.form->ap.end())
                throw CoverageError("fixture " + t.label + " has no a_" + std::to_string(ell));
            trace += it->second * t.multiplicity;
            auto pit = t.form->ap_polys.find(ell);
            if (pit == t.form->ap_polys.end()) polys = false;
            else predicted = poly_mul(predicted, poly_pow(pit->second, t.multiplicity));
        }
        pc.predicted_trace = trace;
        pc.used_polys = polys;
        if (polys) {
            pc.predicted = predicted;
            pc.match = predicted == pc.computed;
        } else {
            pc.match = rep.dim_match && trace == pc.computed_trace;
        }
        all_match = all_match && pc.match;
        rep.checks.push_back(pc);
    }
    if (pred.confidence == Confidence::Unknown)
        rep.verdict = Verdict::Unknown;
    else
        rep.verdict = all_match ? Verdict::Verified : Verdict::Falsified;
    return rep;
}

std::optional<std::size_t> expected_theta_kernel(const Order& O, const FixtureDB& db) {
    DecompositionPrediction pred = predict_decomposition(O, db);
    if (pred.confidence == Confidence::Unknown) return std::nullopt;
    std::size_t k = 0;
    for (auto& t : pred.terms)
        if (t.level == O.level && t.multiplicity > 0) k += t.dim * (t.multiplicity - 1);
    return k;
}

// ---------------------------------------------------------------- congruences

CongruenceResult congruence_check(HeckeContext& ctx, const Z& p, const std::vector<long>& ells) {
    if (p == 2 || !is_prime(p)) throw ArgumentError("congruence check needs an odd prime");
    CongruenceResult res;
    res.p = p;
    res.ells = ells;
    Z N = p * p * p;
    Order O = build_order(p, N, {{p, ETypeChoice{EType::Unramified, 0}}});
    RatMat s = ctx.new_subspace(O);
    res.new_dim = s.cols;
    if (s.cols == 0) return res;
    IntMat b = saturated_basis(s);  // rows
    RatMat bc = to_rat(b).transpose();
    const BrandtModule& m = ctx.module(O);
    IntMat stacked(0, b.rows);
    for (long ell : ells) {
        if (N % ell == 0) throw ArgumentError("congruence primes must not divide the level");
        RatMat x = restrict_to(m.matrix(ell), bc);
        IntMat xi(x.rows, x.cols);
        for (std::size_t i = 0; i < x.a.size(); ++i) {
            if (x.a[i].get_den() != 1) throw ConsistencyError("Hecke action not integral on the new lattice");
            xi.a[i] = x.a[i].get_num();
        }
        for (std::size_t i = 0; i < xi.rows; ++i) xi(i, i) -= 1 + ell;
        IntMat next(stacked.rows + xi.rows, xi.cols);
        std::copy(stacked.a.begin(), stacked.a.end(), next.a.begin());
        std::copy(xi.a.begin(), xi.a.end(), next.a.begin() + stacked.a.size());
        stacked = next;
    }
    res.kernel_dim = kernel_dim_mod_p(stacked, p.get_si());
    res.holds = res.kernel_dim > 0;
    return res;
}

std::optional<bool> fixture_congruence(const FixtureDB& db, const Z& p, const std::vector<long>& ells) {
    auto forms = db.at_level(p * p * p);
    if (forms.empty()) return std::nullopt;
    for (auto* f : forms) {
        bool ok = true;
        for (long ell : ells) {
            auto it = f->ap_polys.find(ell);
            if (it == f->ap_polys.end()) return std::nullopt;
            Q v = 0;
            Q x(1 + ell);
            for (std::size_t k = it->second.size(); k-- > 0;) v = v * x + it->second[k];
            if (v.get_num() % p != 0) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace qmf
