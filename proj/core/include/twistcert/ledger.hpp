#pragma once

// Dimension bookkeeping for twist certificates.
//
//   sel_K_lower  = 2 * #{A-members}                    (lower bound, dim Sel_2(E^d/K))
//   drift_upper  = sum over T of alpha_dim(E, v)       (upper bound, |Sel_2 drift| over Q)
//   sha_K_lower  = max(0, sel_K_lower - rank_K - dim E(K)[2])
//   sha_gap_lower = sha_K_lower - (sel2_E_over_Q_upper + drift_upper)
//
// rank_K and the Selmer bound over Q are external inputs; the certificate
// records them as such and never fills a derived field without them.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistcert/local.hpp"

namespace twistcert {

struct AChecks {
    bool odd = false;
    bool additive_for_twist = false;
    bool full_local_torsion = false;
    bool inert_in_k = false;

    friend bool operator==(const AChecks&, const AChecks&) = default;
};

struct AMembership {
    std::uint64_t prime = 0;
    AChecks checks;

    bool member() const noexcept {
        return checks.odd && checks.additive_for_twist && checks.full_local_torsion && checks.inert_in_k;
    }
    friend bool operator==(const AMembership&, const AMembership&) = default;
};

/// One entry per odd prime q | d, with every check evaluated on E^d.
/// Throws NotSquarefree, EvenD.
std::vector<AMembership> a_set_for_twist(const CurveQ& e, const BigInt& d, const QuadField& k);

std::int64_t selmer_k_lower_bound(const std::vector<AMembership>& a_set);

/// Whether the local conditions of E and E^d may differ at v: d is not a
/// local square, v is 2, infinity, a bad prime or has odd valuation in d,
/// and alpha_v(1) is non-zero (when it is zero both conditions are zero).
/// Depends on d only through its square class at v.
bool place_in_drift_set(const CurveQ& e, const BigInt& d, Place v);

/// The places satisfying place_in_drift_set among infinity, 2, the bad
/// primes of E and the prime divisors of d.  Finite places ascending, then
/// infinity.
std::vector<Place> drift_places(const CurveQ& e, const BigInt& d);

std::int64_t drift_upper_bound(const CurveQ& e, const BigInt& d);

/// rk E^d(K) = rk E^d(Q) + rk E^{dD}(Q); inputs are external.
std::int64_t rank_k_decompose(std::int64_t rank_d_q, std::int64_t rank_dd_q);

/// 0 when the 2-division cubic is irreducible (a cubic root cannot live in a
/// quadratic field); HypothesisFailed otherwise.
int torsion2_dim_over_k(const CurveQ& e, const QuadField& k);

struct DriftEntry {
    Place place;
    int alpha_dim = 0;
    friend bool operator==(const DriftEntry&, const DriftEntry&) = default;
};

struct ExternalInputs {
    std::optional<std::int64_t> sel2_e_over_q_upper;
    std::optional<std::int64_t> rank_d_q;
    std::optional<std::int64_t> rank_dd_q;
    friend bool operator==(const ExternalInputs&, const ExternalInputs&) = default;
};

struct DerivedBounds {
    std::optional<std::int64_t> rank_k;
    std::optional<std::int64_t> sha_k_lower;
    std::optional<std::int64_t> sha_gap_lower;
    /// sha_k_lower - sel2_e_over_q_upper, valid only under the recorded
    /// assumption that twisting did not enlarge Sel_2 over Q.
    std::optional<std::int64_t> sha_gap_lower_assuming_selmer_preserved;
    friend bool operator==(const DerivedBounds&, const DerivedBounds&) = default;
};

/// Echo of the twist plan the certificate was produced from.
struct PlanRecord {
    std::int64_t target_r = 0;
    std::vector<std::uint64_t> core_primes;
    std::vector<std::uint64_t> pad_primes;
    std::vector<Congruence> congruence_targets;
    std::uint64_t search_bound = 0;
    bool assume_selmer_preserved = false;
    friend bool operator==(const PlanRecord&, const PlanRecord&) = default;
};

struct Certificate {
    std::string schema_version = "1";
    CurveQ curve;
    QuadField field;
    BigInt d;
    PlanRecord plan;
    std::vector<AMembership> a_set;
    std::int64_t sel_k_lower = 0;
    std::vector<DriftEntry> drift_t;
    std::int64_t drift_upper = 0;
    ExternalInputs external_inputs;
    DerivedBounds derived;
    std::vector<std::pair<std::string, bool>> hypothesis_checklist;
    std::string command_line;
};

/// Fills the derived fields from the external inputs.  Needs both ranks
/// (MissingExternalInput otherwise); the gap needs the Selmer bound over Q.
Certificate sha_ledger(Certificate cert);

/// Certificate JSON, schema version "1": integers as decimal strings, keys in
/// a fixed order, two-space indentation, trailing newline.
std::string certificate_to_json(const Certificate& cert);

/// Throws InvalidInput on malformed or unsupported documents.
Certificate certificate_from_json(std::string_view text);

}  // namespace twistcert
