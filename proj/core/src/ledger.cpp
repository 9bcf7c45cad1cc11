#include "twistcert/ledger.hpp"

#include <algorithm>

#include "twistcert/reduction.hpp"

namespace twistcert {

namespace {

std::vector<PrimePower> checked_factor_of_d(const BigInt& d) {
    if (d == 0) throw Error(Errc::NotSquarefree, "d = 0");
    auto fac = factor(d);
    for (const auto& pp : fac)
        if (pp.exponent > 1) throw Error(Errc::NotSquarefree, "d = " + d.str());
    return fac;
}

bool is_square_in_q2(const BigInt& d) {
    const unsigned v = valuation(d, 2);
    if (v % 2 == 1) return false;
    return mod_u64(d >> v, 8) == 1;
}

bool in_drift_set(const CurveQ& e, const BigInt& d, Place v, bool bad_at_v) {
    if (v.is_infinite()) return d < 0 && alpha_dim(e, v) > 0;
    if (v.prime() == 2) return !is_square_in_q2(d) && alpha_dim(e, v) > 0;
    const SquareClass c = SquareClass::of(d, PrimeQ(v.prime()));
    if (c.is_trivial()) return false;
    // An unramified unit twist at a good prime keeps the unramified condition.
    if (!bad_at_v && !c.uni_bit) return false;
    return alpha_dim(e, v) > 0;
}

}  // namespace

std::vector<AMembership> a_set_for_twist(const CurveQ& e, const BigInt& d, const QuadField& k) {
    const auto fac = checked_factor_of_d(d);
    if (d % 2 == 0) throw Error(Errc::EvenD, "d = " + d.str());
    const CurveQ twisted = detail::twist_model(e, d);
    std::vector<AMembership> out;
    for (const auto& pp : fac) {
        const PrimeQ q(pp.prime);
        AMembership m;
        m.prime = pp.prime;
        m.checks.odd = q.is_odd();
        m.checks.additive_for_twist = tate_reduction(twisted, q).kind == ReductionKind::Additive;
        m.checks.full_local_torsion = local_two_torsion_dim(twisted, q) == 2;
        m.checks.inert_in_k = splitting_in_quadratic(k, q) == Splitting::Inert;
        out.push_back(m);
    }
    return out;
}

std::int64_t selmer_k_lower_bound(const std::vector<AMembership>& a_set) {
    return 2 * static_cast<std::int64_t>(
                   std::count_if(a_set.begin(), a_set.end(), [](const AMembership& m) { return m.member(); }));
}

bool place_in_drift_set(const CurveQ& e, const BigInt& d, Place v) {
    if (d == 0) throw Error(Errc::InvalidInput, "d = 0");
    const bool bad = !v.is_infinite() && !is_good_at(e, PrimeQ(v.prime()));
    return in_drift_set(e, d, v, bad);
}

std::vector<Place> drift_places(const CurveQ& e, const BigInt& d) {
    if (d == 0) throw Error(Errc::InvalidInput, "d = 0");
    const auto bad = bad_primes(e);
    std::vector<std::uint64_t> candidates = bad;
    candidates.push_back(2);
    for (const auto& pp : factor(d)) candidates.push_back(pp.prime);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<Place> out;
    for (std::uint64_t p : candidates) {
        const bool is_bad = std::binary_search(bad.begin(), bad.end(), p);
        if (in_drift_set(e, d, Place::finite(p), is_bad)) out.push_back(Place::finite(p));
    }
    if (in_drift_set(e, d, Place::infinity(), false)) out.push_back(Place::infinity());
    return out;
}

std::int64_t drift_upper_bound(const CurveQ& e, const BigInt& d) {
    std::int64_t total = 0;
    for (const Place& v : drift_places(e, d)) total += alpha_dim(e, v);
    return total;
}

std::int64_t rank_k_decompose(std::int64_t rank_d_q, std::int64_t rank_dd_q) {
    if (rank_d_q < 0 || rank_dd_q < 0) throw Error(Errc::InvalidInput, "ranks are non-negative");
    return rank_d_q + rank_dd_q;
}

int torsion2_dim_over_k(const CurveQ& e, const QuadField&) {
    if (has_rational_two_torsion(e)) {
        throw Error(Errc::HypothesisFailed, "2-division cubic is reducible; supply E(K)[2] externally");
    }
    return 0;
}

Certificate sha_ledger(Certificate cert) {
    const auto& ext = cert.external_inputs;
    if (!ext.rank_d_q || !ext.rank_dd_q) {
        throw Error(Errc::MissingExternalInput, "rank_d_Q and rank_dD_Q are both required");
    }
    DerivedBounds out;
    out.rank_k = rank_k_decompose(*ext.rank_d_q, *ext.rank_dd_q);
    const std::int64_t torsion = torsion2_dim_over_k(cert.curve, cert.field);
    out.sha_k_lower = std::max<std::int64_t>(0, cert.sel_k_lower - *out.rank_k - torsion);
    if (ext.sel2_e_over_q_upper) {
        out.sha_gap_lower = *out.sha_k_lower - (*ext.sel2_e_over_q_upper + cert.drift_upper);
        if (cert.plan.assume_selmer_preserved) {
            out.sha_gap_lower_assuming_selmer_preserved = *out.sha_k_lower - *ext.sel2_e_over_q_upper;
        }
    }
    cert.derived = out;
    return cert;
}

}  // namespace twistcert
