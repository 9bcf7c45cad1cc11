#include "twistcert/forge.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "twistcert/classify.hpp"
#include "twistcert/reduction.hpp"

namespace twistcert {

namespace {

BigInt product(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    BigInt d = 1;
    for (auto p : a) d *= p;
    for (auto p : b) d *= p;
    return d;
}

BigInt mod_pos(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = mod_pos(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        const BigInt qt = r0 / r1;
        r0 = std::exchange(r1, r0 - qt * r1);
        s0 = std::exchange(s1, s0 - qt * s1);
    }
    if (r0 != 1) throw Error(Errc::InvalidInput, "not invertible");
    return mod_pos(s0, m);
}

void require(bool ok, const char* check, std::optional<std::uint64_t> prime = std::nullopt) {
    if (!ok) throw VerificationFailed(check, prime);
}

}  // namespace

std::size_t core_count(std::int64_t r, std::optional<std::int64_t> c) {
    const std::int64_t total = r + c.value_or(0);
    return static_cast<std::size_t>(std::max<std::int64_t>(1, total / 2 + 1));
}

std::vector<Congruence> default_congruence_targets(const CurveQ& e, const QuadField& k) {
    std::set<std::uint64_t> ells;
    for (auto p : bad_primes(e))
        if (p != 2) ells.insert(p);
    for (const auto& pp : factor(BigInt(k.d())))
        if (pp.prime != 2) ells.insert(pp.prime);
    std::vector<Congruence> out{{1, 8}};
    for (auto l : ells) out.push_back({1, BigInt(l)});
    return out;
}

TwistPlan core_plan(const CurveQ& e, const QuadField& k, std::int64_t r, std::vector<std::uint64_t> core_primes,
                    std::optional<std::int64_t> c, std::uint64_t bound) {
    TwistPlan plan{.curve = e, .field = k};
    plan.target_r = r;
    plan.core_primes = std::move(core_primes);
    plan.d = product(plan.core_primes, {});
    plan.congruence_targets = default_congruence_targets(e, k);
    plan.search_bound = bound;
    plan.external.sel2_e_over_q_upper = c;
    return plan;
}

TwistPlan plan_twist(const CurveQ& e, const QuadField& k, std::int64_t r, std::optional<std::int64_t> c,
                     std::uint64_t bound, unsigned threads, const std::function<void(const std::string&)>& warn) {
    if (r < 0) throw Error(Errc::InvalidInput, "r must be non-negative");
    if (c && *c < 0) throw Error(Errc::InvalidInput, "c must be non-negative");
    if (bound == 0) throw Error(Errc::InvalidInput, "bound must be positive");
    if (has_rational_two_torsion(e)) throw Error(Errc::HypothesisFailed, "E has a rational 2-torsion point");
    if (!check_K_not_sqrt_disc(e, k)) throw Error(Errc::HypothesisFailed, "K = Q(sqrt(disc E))");

    const auto found = find_usable_primes(e, k, core_count(r, c), bound, threads, warn);
    std::vector<std::uint64_t> core;
    for (const auto& q : found) core.push_back(q.value());
    return pad_for_congruences(core_plan(e, k, r, std::move(core), c, bound), bound);
}

bool meets_congruence_targets(const TwistPlan& plan) {
    return std::all_of(plan.congruence_targets.begin(), plan.congruence_targets.end(), [&](const Congruence& t) {
        return mod_pos(plan.d, t.modulus) == mod_pos(t.residue, t.modulus);
    });
}

TwistPlan pad_for_congruences(TwistPlan plan, std::uint64_t bound) {
    if (meets_congruence_targets(plan)) return plan;
    for (const auto& t : plan.congruence_targets) {
        if (gcd(plan.d, t.modulus) != 1) {
            throw Error(Errc::SearchExhausted,
                        "no pad can fix d mod " + t.modulus.str() + ": the modulus shares a factor with d");
        }
    }
    const Congruence target = crt_solve(plan.congruence_targets);
    const BigInt& m = target.modulus;
    const BigInt want = mod_pos(target.residue * inverse_mod(plan.d, m), m);

    const BigInt avoid = 2 * BigInt(plan.field.d()) * plan.curve.discriminant() * plan.d;
    for (BigInt p = want; p <= bound; p += m) {
        if (p < 3) continue;
        const auto pv = p.convert_to<std::uint64_t>();
        if (!is_prime(pv) || avoid % pv == 0) continue;
        const PrimeQ q(pv);
        if (classify_prime(plan.curve, q).torsion_dim != 0) continue;
        plan.pad_primes.push_back(pv);
        plan.d *= pv;
        return plan;
    }
    throw Error(Errc::SearchExhausted, "no P_{E,0} prime = " + want.str() + " mod " + m.str() + " below " +
                                           std::to_string(bound));
}

Certificate verify_plan(const TwistPlan& plan) {
    const CurveQ& e = plan.curve;
    const QuadField& k = plan.field;
    const BigInt& d = plan.d;

    require(d != 0 && is_squarefree(d), "d_squarefree");
    require(d % 2 != 0, "d_odd");
    require(!has_rational_two_torsion(e), "no_rational_2_torsion");
    require(check_K_not_sqrt_disc(e, k), "K_ne_sqrt_disc");

    std::vector<std::uint64_t> all = plan.core_primes;
    all.insert(all.end(), plan.pad_primes.begin(), plan.pad_primes.end());
    std::sort(all.begin(), all.end());
    require(std::adjacent_find(all.begin(), all.end()) == all.end(), "d_is_plan_product");
    for (auto p : all) require(p < kPrimeCap && is_prime(p), "d_is_plan_product", p);
    require(product(plan.core_primes, plan.pad_primes) == d, "d_is_plan_product");

    const BigInt dk(k.d());
    const CurveQ twisted = detail::twist_model(e, d);
    for (auto p : plan.core_primes) {
        const PrimeQ q(p);
        require(dk % p != 0, "coprime_to_D", p);
        require(is_good_at(e, q), "good_for_E", p);
        require(tate_reduction(twisted, q).kind == ReductionKind::Additive, "additive_for_twist", p);
        require(local_two_torsion_dim(twisted, q) == 2, "full_local_torsion", p);
        require(splitting_in_quadratic(k, q) == Splitting::Inert, "inert_in_K", p);
    }
    for (auto p : plan.pad_primes) {
        const PrimeQ q(p);
        require(dk % p != 0, "coprime_to_D", p);
        require(is_good_at(e, q), "good_for_E", p);
        require(classify_prime(e, q).torsion_dim == 0, "pad_in_P_E0", p);
    }
    require(meets_congruence_targets(plan), "congruence_targets");

    Certificate cert{.curve = e, .field = k, .d = d};
    cert.plan = {plan.target_r,  plan.core_primes,  plan.pad_primes,
                 plan.congruence_targets, plan.search_bound, plan.assume_selmer_preserved};
    cert.a_set = a_set_for_twist(e, d, k);
    cert.sel_k_lower = selmer_k_lower_bound(cert.a_set);
    for (const auto& v : drift_places(e, d)) cert.drift_t.push_back({v, alpha_dim(e, v)});
    cert.drift_upper = drift_upper_bound(e, d);
    cert.external_inputs = plan.external;

    auto& h = cert.hypothesis_checklist;
    h = {{"d_squarefree", true},      {"d_odd", true},          {"no_rational_2_torsion", true},
         {"K_ne_sqrt_disc", true},    {"d_is_plan_product", true}};
    for (const auto& m : cert.a_set) {
        if (std::find(plan.core_primes.begin(), plan.core_primes.end(), m.prime) == plan.core_primes.end()) continue;
        require(m.member(), "a_member", m.prime);
        h.emplace_back("a_member_" + std::to_string(m.prime), true);
    }
    h.emplace_back("pads_in_P_E0", true);
    h.emplace_back("congruence_targets", true);

    if (plan.external.rank_d_q && plan.external.rank_dd_q) cert = sha_ledger(std::move(cert));
    return cert;
}

TwistPlan plan_from_certificate(const Certificate& cert) {
    TwistPlan plan{.curve = cert.curve, .field = cert.field};
    plan.target_r = cert.plan.target_r;
    plan.core_primes = cert.plan.core_primes;
    plan.pad_primes = cert.plan.pad_primes;
    plan.d = cert.d;
    plan.congruence_targets = cert.plan.congruence_targets;
    plan.search_bound = cert.plan.search_bound;
    plan.external = cert.external_inputs;
    plan.assume_selmer_preserved = cert.plan.assume_selmer_preserved;
    return plan;
}

Certificate reverify(const Certificate& cert) {
    Certificate out = verify_plan(plan_from_certificate(cert));
    out.command_line = cert.command_line;
    return out;
}

}  // namespace twistcert
