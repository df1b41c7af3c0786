#pragma once

#include <optional>

#include "qmf/brandt.hpp"

namespace qmf {

struct FixtureError : Error {
    FixtureError(std::size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};
struct CoverageError : Error {
    using Error::Error;
};

enum class RepKind { Unramified, Steinberg, SpecialTwist, PrincipalSeries, Supercuspidal, Unknown };
const char* rep_kind_name(RepKind k);

struct LocalRepDescriptor {
    RepKind kind = RepKind::Unknown;
    unsigned c = 0;
    bool minimal = false;
    // conductor exponent of a minimal twist, when known (dyadic non-minimal cases)
    std::optional<unsigned> minimal_conductor;
    bool one_dimensional() const { return kind == RepKind::Steinberg || kind == RepKind::SpecialTwist; }
};

struct NewformRecord {
    Z level;
    std::string label;
    unsigned dim = 0;
    std::map<long, Z> ap;                    // traces
    std::map<Z, LocalRepDescriptor> bad;     // one per p | level
    std::map<long, Poly> ap_polys;           // optional: char poly of a_p over Q
    std::size_t line = 0;
};

struct FixtureDB {
    std::vector<NewformRecord> records;
    std::vector<const NewformRecord*> at_level(const Z& N) const;
    unsigned dim_at_level(const Z& N) const;
};

FixtureDB parse_fixtures(std::istream& in);
FixtureDB load_fixtures(const std::string& path);

// Genus of X_0(N), i.e. dim S_2(Gamma_0(N)).
Z dim_cusp(const Z& N);
Z dim_new_cusp(const Z& N);

enum class Mult { Zero, One, Two, ConjecturalOne, Unknown };
const char* mult_name(Mult m);

struct OrderLocalType {
    Z p;
    EType etype = EType::Unramified;
    unsigned r = 1;
    unsigned t = 0;  // t(E/F) for dyadic ramified E when known, else 0
};
OrderLocalType order_local_type(const Order& O, const Z& p);

Mult local_multiplicity(const LocalRepDescriptor& rep, const OrderLocalType& ord);
// e(E/F): bound on local_multiplicity.
unsigned ramification_index(const OrderLocalType& ord);

enum class Confidence { Proven, Conjectural, Unknown };
const char* confidence_name(Confidence c);

struct PredictedTerm {
    Z level;
    std::string label;  // selects the Hecke orbit of this fixture form
    unsigned dim = 0;
    unsigned multiplicity = 0;
    Confidence confidence = Confidence::Proven;
    const NewformRecord* form = nullptr;
};

struct DecompositionPrediction {
    Z disc, level;
    std::vector<PredictedTerm> terms;  // only terms with multiplicity > 0 or Unknown confidence
    unsigned predicted_cusp_dim = 0;   // counting ConjecturalOne as 1, Unknown as 0
    Confidence confidence = Confidence::Proven;
};

DecompositionPrediction predict_decomposition(const Order& O, const FixtureDB& db);

enum class Verdict { Verified, Falsified, Unknown };
const char* verdict_name(Verdict v);

struct PrimeCheck {
    long ell = 0;
    bool skipped = false;  // ell divides the level
    bool used_polys = false;
    bool match = false;
    Poly computed, predicted;
    Z computed_trace, predicted_trace;
};

struct DecompositionReport {
    DecompositionPrediction prediction;
    std::size_t computed_cusp_dim = 0;
    std::size_t eisenstein_dim = 0;
    bool dim_match = false;
    std::vector<PrimeCheck> checks;
    Verdict verdict = Verdict::Unknown;
};

DecompositionReport verify_decomposition(const DecompositionPrediction& pred, HeckeContext& ctx, const Order& O,
                                         const std::vector<long>& primes);

// Sum over level-N terms of dim * (multiplicity - 1).
std::optional<std::size_t> expected_theta_kernel(const Order& O, const FixtureDB& db);

struct CongruenceResult {
    Z p;
    std::vector<long> ells;
    std::size_t new_dim = 0;
    std::size_t kernel_dim = 0;  // common kernel mod p of A_l - (1 + l) on the new lattice
    bool holds = false;
};

// Level p^3 order of unramified type: the new cuspidal Brandt module has an eigensystem
// congruent to the Eisenstein one, A_l = 1 + l mod p, for every l in ells.
CongruenceResult congruence_check(HeckeContext& ctx, const Z& p, const std::vector<long>& ells);

// Fixture side: some level p^3 form has a_l = 1 + l as a root mod p of its a_l polynomial.
std::optional<bool> fixture_congruence(const FixtureDB& db, const Z& p, const std::vector<long>& ells);

}  // namespace qmf
