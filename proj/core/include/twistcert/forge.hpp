#pragma once

// Construction of a twist d = (inert P_{E,2} primes) x (P_{E,0} pads) and its
// from-scratch verification into a Certificate.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twistcert/ledger.hpp"

namespace twistcert {

struct TwistPlan {
    CurveQ curve;
    QuadField field;
    std::int64_t target_r = 0;
    std::vector<std::uint64_t> core_primes;
    std::vector<std::uint64_t> pad_primes;
    BigInt d = 1;
    std::vector<Congruence> congruence_targets;
    std::uint64_t search_bound = 0;
    /// sel2_e_over_q_upper is the optional c; ranks feed sha_ledger.
    ExternalInputs external;
    bool assume_selmer_preserved = false;
};

/// Number of core primes planned for target r and optional c:
/// max(1, floor((r + c) / 2) + 1), so that 2s > r + c.
std::size_t core_count(std::int64_t r, std::optional<std::int64_t> c);

/// d = 1 mod 8, and d = 1 mod l for every odd l that is bad for E or divides D.
std::vector<Congruence> default_congruence_targets(const CurveQ& e, const QuadField& k);

/// A plan over the given core primes with no pads yet; d is their product.
TwistPlan core_plan(const CurveQ& e, const QuadField& k, std::int64_t r, std::vector<std::uint64_t> core_primes,
                    std::optional<std::int64_t> c, std::uint64_t bound);

/// Picks core_count(r, c) usable primes, then pads.  Throws HypothesisFailed,
/// SearchExhausted, InvalidInput (negative r or c, zero bound).  `warn` is
/// handed to find_usable_primes.
TwistPlan plan_twist(const CurveQ& e, const QuadField& k, std::int64_t r, std::optional<std::int64_t> c,
                     std::uint64_t bound, unsigned threads = 1,
                     const std::function<void(const std::string&)>& warn = {});

bool meets_congruence_targets(const TwistPlan& plan);

/// Appends at most one P_{E,0} prime p <= bound, coprime to 2 D disc(E) d, so
/// that d meets every target.  Unchanged when the targets already hold.
/// SearchExhausted when a target modulus shares a factor with d or no
/// suitable prime exists below the bound.
TwistPlan pad_for_congruences(TwistPlan plan, std::uint64_t bound);

/// Recomputes everything from the curve, the field and the prime lists.
/// Throws VerificationFailed naming the first failing check.
Certificate verify_plan(const TwistPlan& plan);

/// The plan a certificate claims to describe.
TwistPlan plan_from_certificate(const Certificate& cert);

/// verify_plan on plan_from_certificate, carrying the command line over.
/// The caller compares the result with the stored certificate.
Certificate reverify(const Certificate& cert);

}  // namespace twistcert
