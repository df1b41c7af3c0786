// qmf: command line front end for the quaternionic modular forms library.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "qmf/jl.hpp"
#include "qmf/theta.hpp"

using namespace qmf;
using nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, Falsified = 1, Usage = 2, Undecided = 3 };

struct Common {
    std::string format = "text";
    unsigned jobs = 1;
    bool json() const { return format == "json"; }
};

Z parse_z(const std::string& s, const char* what) {
    Z z;
    if (s.empty() || z.set_str(s, 10) != 0) throw ArgumentError(std::string("bad ") + what + ": " + s);
    return z;
}

ETypeChoices parse_etypes(const std::vector<std::string>& specs) {
    ETypeChoices ch;
    for (auto& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ArgumentError("etype must look like P=unramified or P=ramified[:VARIANT]");
        Z p = parse_z(s.substr(0, eq), "prime");
        std::string rest = s.substr(eq + 1);
        unsigned variant = 0;
        auto colon = rest.find(':');
        if (colon != std::string::npos) {
            variant = static_cast<unsigned>(std::stoul(rest.substr(colon + 1)));
            rest = rest.substr(0, colon);
        }
        if (rest == "unramified") ch[p] = ETypeChoice{EType::Unramified, variant};
        else if (rest == "ramified") ch[p] = ETypeChoice{EType::Ramified, variant};
        else throw ArgumentError("unknown etype '" + rest + "'");
    }
    return ch;
}

std::string matrix_text(const RatMat& a) {
    std::ostringstream os;
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) os << (j ? " " : "") << to_string(a(i, j));
        os << "\n";
    }
    return os.str();
}

ordered_json matrix_json(const RatMat& a) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < a.rows; ++i) {
        ordered_json r = ordered_json::array();
        for (std::size_t j = 0; j < a.cols; ++j) r.push_back(to_string(a(i, j)));
        rows.push_back(r);
    }
    return rows;
}

ordered_json poly_json(const Poly& p) {
    ordered_json c = ordered_json::array();
    for (auto& x : p) c.push_back(to_string(x));
    return c;
}

std::vector<long> parse_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        long v = std::stol(item, &pos);
        if (pos != item.size() || v < 0) throw ArgumentError("bad list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ArgumentError("empty list");
    return out;
}

int cmd_algebra(const Common& c, const std::string& disc) {
    MaximalPtr md = maximal_data(parse_z(disc, "discriminant"));
    const QuatAlgebra& A = *md->algebra;
    Z d = reduced_discriminant(A, md->omax);
    if (c.json()) {
        ordered_json j;
        j["a"] = A.a.get_str();
        j["b"] = A.b.get_str();
        j["disc"] = A.disc.get_str();
        ordered_json ram = ordered_json::array();
        for (auto& p : A.ramified) ram.push_back(p.get_str());
        j["ramified"] = ram;
        j["maximal_order"] = md->omax.serialize();
        j["reduced_discriminant"] = d.get_str();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << A.describe() << "\n";
        std::cout << "maximal order " << md->omax.serialize() << "\n";
        std::cout << "reduced discriminant " << d.get_str() << "\n";
    }
    return Ok;
}

int cmd_order(const Common& c, const std::string& disc, const std::string& level, const std::vector<std::string>& et) {
    Order O = build_order(parse_z(disc, "discriminant"), parse_z(level, "level"), parse_etypes(et));
    auto sup = superorder_levels(O);
    if (c.json()) {
        ordered_json j;
        j["disc"] = O.disc().get_str();
        j["level"] = O.level.get_str();
        j["n1"] = O.n1.get_str();
        j["n2"] = O.n2.get_str();
        j["m"] = O.m.get_str();
        j["basis"] = O.lattice.serialize();
        ordered_json loc = ordered_json::array();
        for (auto& lt : O.local) {
            ordered_json l;
            l["p"] = lt.p.get_str();
            l["kind"] = local_kind_name(lt.kind);
            l["r"] = lt.r;
            loc.push_back(l);
        }
        j["local"] = loc;
        j["mass"] = to_string(mass_from_local_indices(O));
        ordered_json s = ordered_json::array();
        for (auto& x : sup) s.push_back({x.level.get_str(), x.multiplicity.get_str()});
        j["superorder_levels"] = s;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << O.serialize();
        std::cout << "partition n1=" << O.n1 << " n2=" << O.n2 << " m=" << O.m << "\n";
        for (auto& lt : O.local) std::cout << "local " << lt.p << " " << local_kind_name(lt.kind) << " r=" << lt.r << "\n";
        std::cout << "mass " << to_string(mass_from_local_indices(O)) << "\n";
        std::cout << "superorder levels";
        for (auto& x : sup) std::cout << " " << x.level << "x" << x.multiplicity;
        std::cout << "\n";
    }
    return Ok;
}

int cmd_classset(const Common& c, const std::string& disc, const std::string& level,
                 const std::vector<std::string>& et) {
    Order O = build_order(parse_z(disc, "discriminant"), parse_z(level, "level"), parse_etypes(et));
    ClassSet cs = class_set(O);
    if (c.json()) {
        ordered_json j;
        j["disc"] = O.disc().get_str();
        j["level"] = O.level.get_str();
        j["h"] = cs.size();
        ordered_json e = ordered_json::array(), ideals = ordered_json::array(), primes = ordered_json::array();
        for (auto& u : cs.units) e.push_back(u.get_str());
        for (auto& I : cs.ideals) ideals.push_back({{"norm", to_string(I.norm)}, {"basis", I.lattice.serialize()}});
        for (auto& q : cs.primes) primes.push_back(q.get_str());
        j["e"] = e;
        j["mass"] = to_string(cs.mass);
        j["neighbor_primes"] = primes;
        j["ideals"] = ideals;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "h=" << cs.size() << "\n";
        std::cout << "e=[";
        for (std::size_t i = 0; i < cs.size(); ++i) std::cout << (i ? "," : "") << cs.units[i];
        std::cout << "]\n";
        std::cout << "mass " << to_string(cs.mass) << "\n";
        std::cout << serialize(cs);
    }
    return Ok;
}

int cmd_brandt(const Common& c, const std::string& disc, const std::string& level, const std::string& ns,
               const std::vector<std::string>& et) {
    Order O = build_order(parse_z(disc, "discriminant"), parse_z(level, "level"), parse_etypes(et));
    BrandtModule m(class_set(O), c.jobs);
    for (long n : parse_list(ns)) {
        RatMat a = m.matrix(n);
        if (c.json()) {
            ordered_json j;
            j["disc"] = O.disc().get_str();
            j["level"] = O.level.get_str();
            j["n"] = n;
            j["matrix"] = matrix_json(a);
            std::cout << j.dump() << "\n";
        } else {
            std::cout << "A_" << n << "\n" << matrix_text(a);
        }
    }
    return Ok;
}

int cmd_theta(const Common& c, const std::string& disc, const std::string& level, long prec, bool is_new,
              const std::vector<std::string>& et) {
    Order O = build_order(parse_z(disc, "discriminant"), parse_z(level, "level"), parse_etypes(et));
    HeckeContext ctx(c.jobs);
    std::vector<QExpansion> out;
    if (is_new) {
        out = theta_new_span(ctx, O, prec);
    } else {
        const BrandtModule& m = ctx.module(O);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) out.push_back(theta_entry(m, i, j, prec));
    }
    for (auto& f : out) {
        if (c.json()) {
            std::cout << to_record(f) << "\n";
        } else {
            std::cout << f.label << ":";
            for (auto& x : f.coeffs) std::cout << " " << to_string(x);
            std::cout << "\n";
        }
    }
    if (!c.json() && is_new) std::cout << "dimension " << out.size() << "\n";
    return Ok;
}

int cmd_eisenstein(const Common& c, const std::string& a, const std::string& b, long prec) {
    QExpansion f = eisenstein_q_expansion(parse_z(a, "a"), parse_z(b, "b"), prec);
    if (c.json()) {
        std::cout << to_record(f) << "\n";
    } else {
        std::cout << f.label << ":";
        for (auto& x : f.coeffs) std::cout << " " << to_string(x);
        std::cout << "\n";
    }
    return Ok;
}

int cmd_decompose(const Common& c, const std::string& disc, const std::string& level, const std::string& fixtures,
                  const std::string& primes, const std::vector<std::string>& et) {
    FixtureDB db = load_fixtures(fixtures);
    Order O = build_order(parse_z(disc, "discriminant"), parse_z(level, "level"), parse_etypes(et));
    HeckeContext ctx(c.jobs);
    DecompositionPrediction pred = predict_decomposition(O, db);
    DecompositionReport rep = verify_decomposition(pred, ctx, O, parse_list(primes));
    if (c.json()) {
        ordered_json j;
        j["disc"] = O.disc().get_str();
        j["level"] = O.level.get_str();
        ordered_json terms = ordered_json::array();
        for (auto& t : pred.terms)
            terms.push_back({{"level", t.level.get_str()},
                             {"label", t.label},
                             {"dim", t.dim},
                             {"multiplicity", t.multiplicity},
                             {"confidence", confidence_name(t.confidence)}});
        j["terms"] = terms;
        j["predicted_cusp_dim"] = pred.predicted_cusp_dim;
        j["computed_cusp_dim"] = rep.computed_cusp_dim;
        j["eisenstein_dim"] = rep.eisenstein_dim;
        ordered_json checks = ordered_json::array();
        for (auto& pc : rep.checks) {
            ordered_json k;
            k["ell"] = pc.ell;
            if (pc.skipped) {
                k["status"] = "skipped";
            } else {
                k["status"] = pc.match ? "match" : "mismatch";
                k["computed"] = poly_json(pc.computed);
                if (pc.used_polys) k["predicted"] = poly_json(pc.predicted);
                k["computed_trace"] = pc.computed_trace.get_str();
                k["predicted_trace"] = pc.predicted_trace.get_str();
            }
            checks.push_back(k);
        }
        j["checks"] = checks;
        j["verdict"] = verdict_name(rep.verdict);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "order D=" << O.disc() << " N=" << O.level << "\n";
        for (auto& t : pred.terms)
            std::cout << "term " << t.label << " level " << t.level << " dim " << t.dim << " x" << t.multiplicity << " ("
                      << confidence_name(t.confidence) << ")\n";
        std::cout << "eisenstein dim " << rep.eisenstein_dim << "\n";
        std::cout << "cusp dim predicted " << pred.predicted_cusp_dim << " computed " << rep.computed_cusp_dim << "\n";
        for (auto& pc : rep.checks) {
            if (pc.skipped) {
                std::cout << "l=" << pc.ell << " skipped (divides level)\n";
                continue;
            }
            std::cout << "l=" << pc.ell << " " << (pc.match ? "match" : "MISMATCH") << " computed "
                      << poly_to_string(pc.computed);
            if (pc.used_polys) std::cout << " predicted " << poly_to_string(pc.predicted);
            else std::cout << " (traces " << pc.computed_trace << " vs " << pc.predicted_trace << ")";
            std::cout << "\n";
        }
        std::cout << "verdict " << verdict_name(rep.verdict) << "\n";
    }
    switch (rep.verdict) {
        case Verdict::Verified: return Ok;
        case Verdict::Falsified: return Falsified;
        case Verdict::Unknown: return Undecided;
    }
    return Undecided;
}

int cmd_congruence(const Common& c, const std::string& p, const std::string& fixtures, const std::string& ells_s) {
    Z pz = parse_z(p, "prime");
    std::vector<long> ells;
    if (ells_s.empty()) {
        for (Z l = 2; ells.size() < 5; l = next_prime(l))
            if (l != pz) ells.push_back(l.get_si());
    } else {
        ells = parse_list(ells_s);
    }
    HeckeContext ctx(c.jobs);
    CongruenceResult r = congruence_check(ctx, pz, ells);
    std::optional<bool> fix;
    if (!fixtures.empty()) fix = fixture_congruence(load_fixtures(fixtures), pz, ells);
    if (c.json()) {
        ordered_json j;
        j["p"] = pz.get_str();
        j["ells"] = ells;
        j["new_dim"] = r.new_dim;
        j["kernel_dim"] = r.kernel_dim;
        j["holds"] = r.holds;
        if (fix) j["fixture_congruence"] = *fix;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "level " << pz * pz * pz << " new dim " << r.new_dim << "\n";
        std::cout << "common kernel mod " << pz << " of A_l - (1+l): dim " << r.kernel_dim << "\n";
        if (fix) std::cout << "fixture newform congruent: " << (*fix ? "yes" : "no") << "\n";
        std::cout << (r.holds ? "congruence holds" : "congruence FAILS") << "\n";
    }
    return r.holds ? Ok : Falsified;
}

int cmd_fixtures_validate(const Common& c, const std::string& path) {
    FixtureDB db = load_fixtures(path);
    std::map<Z, unsigned> dims;
    for (auto& r : db.records) dims[r.level] += r.dim;
    std::vector<std::string> problems;
    for (auto& [N, d] : dims)
        if (Z(d) != dim_new_cusp(N))
            problems.push_back("level " + N.get_str() + ": fixture dims " + std::to_string(d) + " but dim S2new = " +
                               dim_new_cusp(N).get_str());
    if (c.json()) {
        ordered_json j;
        j["records"] = db.records.size();
        j["levels"] = dims.size();
        j["problems"] = problems;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << db.records.size() << " records over " << dims.size() << " levels\n";
        for (auto& p : problems) std::cout << p << "\n";
    }
    return problems.empty() ? Ok : Usage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternionic modular forms via Brandt matrices"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

    std::string disc, level, ns, a, b, fixtures, primes, p, ells, path;
    long prec = 20;
    bool is_new = false;
    std::vector<std::string> etypes;
    auto add_order_opts = [&](CLI::App* s) {
        s->add_option("--disc", disc, "Discriminant of the algebra")->required();
        s->add_option("--level", level, "Level of the order")->required();
        s->add_option("--etype", etypes, "Quadratic type at p | D: P=unramified or P=ramified[:VARIANT]");
    };

    auto* s_alg = app.add_subcommand("algebra", "Definite algebra and maximal order");
    s_alg->add_option("--disc", disc, "Discriminant")->required();
    auto* s_ord = app.add_subcommand("order", "Special order of given level");
    add_order_opts(s_ord);
    auto* s_cls = app.add_subcommand("classset", "Right ideal classes");
    add_order_opts(s_cls);
    auto* s_br = app.add_subcommand("brandt", "Brandt matrices");
    add_order_opts(s_br);
    s_br->add_option("--n", ns, "Comma separated indices")->required();
    auto* s_th = app.add_subcommand("theta", "Theta series");
    add_order_opts(s_th);
    s_th->add_option("--prec", prec, "Precision")->check(CLI::Range(1L, 100000L));
    s_th->add_flag("--new", is_new, "Span of the level-new theta series");
    auto* s_eis = app.add_subcommand("eisenstein", "Eisenstein series E_{2,a,b}");
    s_eis->add_option("--a", a)->required();
    s_eis->add_option("--b", b)->required();
    s_eis->add_option("--prec", prec)->check(CLI::Range(1L, 100000L));
    auto* s_dec = app.add_subcommand("decompose", "Predict and verify the Hecke decomposition");
    add_order_opts(s_dec);
    s_dec->add_option("--fixtures", fixtures)->required();
    s_dec->add_option("--primes", primes)->required();
    auto* s_con = app.add_subcommand("verify-congruence", "Eisenstein congruence at level p^3");
    s_con->add_option("--p", p)->required();
    s_con->add_option("--fixtures", fixtures);
    s_con->add_option("--ells", ells, "Comma separated primes");
    auto* s_fix = app.add_subcommand("fixtures", "Fixture utilities");
    s_fix->require_subcommand(1);
    auto* s_val = s_fix->add_subcommand("validate", "Validate a fixture file");
    s_val->add_option("path", path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : Usage;
    }

    try {
        if (s_alg->parsed()) return cmd_algebra(common, disc);
        if (s_ord->parsed()) return cmd_order(common, disc, level, etypes);
        if (s_cls->parsed()) return cmd_classset(common, disc, level, etypes);
        if (s_br->parsed()) return cmd_brandt(common, disc, level, ns, etypes);
        if (s_th->parsed()) return cmd_theta(common, disc, level, prec, is_new, etypes);
        if (s_eis->parsed()) return cmd_eisenstein(common, a, b, prec);
        if (s_dec->parsed()) return cmd_decompose(common, disc, level, fixtures, primes, etypes);
        if (s_con->parsed()) return cmd_congruence(common, p, fixtures, ells);
        if (s_val->parsed()) return cmd_fixtures_validate(common, path);
    } catch (const FixtureError& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return Usage;
    } catch (const CoverageError& e) {
        std::cerr << "cannot conclude: " << e.what() << "\n";
        return Undecided;
    } catch (const BudgetError& e) {
        std::cerr << "cannot conclude: " << e.what() << "\n";
        return Undecided;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return Falsified;
    } catch (const MassMismatch& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return Falsified;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const InvalidDiscriminant& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const ParityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const LevelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const Error& e) {
        std::cerr << "internal failure: " << e.what() << "\n";
        return Falsified;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number\n";
        return Usage;
    }
    return Usage;
}
