#include <nlohmann/json.hpp>

#include "twistcert/ledger.hpp"

namespace twistcert {

using Json = nlohmann::ordered_json;

namespace {

std::string num(const BigInt& v) { return v.str(); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

Json opt(const std::optional<std::int64_t>& v) { return v ? Json(num(*v)) : Json(nullptr); }

Json assumptions_json(const Certificate& c) {
    Json out = Json::array();
    out.push_back({{"name", "selmer_lower_bound_from_a_set"},
                   {"status", "CITED"},
                   {"statement", "dim Sel_2(E^d/K) >= 2 * #A-members; the local inputs are recomputed, "
                                 "the local-to-global inequality is not"}});
    if (c.external_inputs.rank_d_q || c.external_inputs.rank_dd_q) {
        out.push_back({{"name", "ranks"},
                       {"status", "EXTERNAL"},
                       {"statement", "rank_d_Q and rank_dD_Q are taken as given"}});
    }
    if (c.external_inputs.sel2_e_over_q_upper) {
        out.push_back({{"name", "sel2_E_over_Q_upper"},
                       {"status", "EXTERNAL"},
                       {"statement", "dim Sel_2(E/Q) <= sel2_E_over_Q_upper is taken as given"}});
    }
    if (c.plan.assume_selmer_preserved) {
        out.push_back({{"name", "selmer_not_enlarged_by_twist"},
                       {"status", "UNVERIFIED"},
                       {"statement", "dim Sel_2(E^d/Q) <= dim Sel_2(E/Q); used only by "
                                     "sha_gap_lower_assuming_selmer_preserved"}});
    }
    return out;
}

// --- parsing helpers -------------------------------------------------------

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidInput, "certificate: " + what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

BigInt big_of(const Json& j) {
    if (!j.is_string()) bad("integers must be decimal strings");
    return parse_bigint(j.get<std::string>());
}

std::int64_t i64_of(const Json& j) {
    const BigInt v = big_of(j);
    if (v > INT64_MAX || v < INT64_MIN) bad("integer out of range");
    return v.convert_to<std::int64_t>();
}

std::uint64_t u64_of(const Json& j) {
    const BigInt v = big_of(j);
    if (v < 0 || v > UINT64_MAX) bad("integer out of range");
    return v.convert_to<std::uint64_t>();
}

std::optional<std::int64_t> opt_of(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return i64_of(j.at(key));
}

bool bool_of(const Json& j) {
    if (!j.is_boolean()) bad("expected a boolean");
    return j.get<bool>();
}

Place place_of(const Json& j) {
    if (!j.is_string()) bad("place must be a string");
    const auto s = j.get<std::string>();
    if (s == "inf") return Place::infinity();
    return Place::finite(u64_of(j));
}

}  // namespace

std::string certificate_to_json(const Certificate& c) {
    Json j;
    j["schema_version"] = c.schema_version;
    j["curve"] = {{"A", num(c.curve.a())}, {"B", num(c.curve.b())}};
    j["K"] = {{"D", num(c.field.d())}};
    j["d"] = num(c.d);

    Json plan;
    plan["target_r"] = num(c.plan.target_r);
    plan["core_primes"] = Json::array();
    for (auto p : c.plan.core_primes) plan["core_primes"].push_back(num(p));
    plan["pad_primes"] = Json::array();
    for (auto p : c.plan.pad_primes) plan["pad_primes"].push_back(num(p));
    plan["congruence_targets"] = Json::array();
    for (const auto& t : c.plan.congruence_targets)
        plan["congruence_targets"].push_back({{"residue", num(t.residue)}, {"modulus", num(t.modulus)}});
    plan["search_bound"] = num(c.plan.search_bound);
    plan["assume_selmer_preserved"] = c.plan.assume_selmer_preserved;
    j["plan"] = plan;

    j["a_set"] = Json::array();
    for (const auto& m : c.a_set) {
        j["a_set"].push_back({{"prime", num(m.prime)},
                              {"checks",
                               {{"odd", m.checks.odd},
                                {"additive_for_twist", m.checks.additive_for_twist},
                                {"full_local_torsion", m.checks.full_local_torsion},
                                {"inert_in_K", m.checks.inert_in_k}}},
                              {"member", m.member()}});
    }
    j["sel_K_lower"] = num(c.sel_k_lower);
    j["drift_T"] = Json::array();
    for (const auto& t : c.drift_t)
        j["drift_T"].push_back({{"place", t.place.to_string()}, {"alpha_dim", num(std::int64_t{t.alpha_dim})}});
    j["drift_upper"] = num(c.drift_upper);

    j["external_inputs"] = {{"sel2_E_over_Q_upper", opt(c.external_inputs.sel2_e_over_q_upper)},
                            {"rank_d_Q", opt(c.external_inputs.rank_d_q)},
                            {"rank_dD_Q", opt(c.external_inputs.rank_dd_q)}};
    Json derived = Json::object();
    if (c.derived.rank_k) derived["rank_K"] = num(*c.derived.rank_k);
    if (c.derived.sha_k_lower) derived["sha_K_lower"] = num(*c.derived.sha_k_lower);
    if (c.derived.sha_gap_lower) derived["sha_gap_lower"] = num(*c.derived.sha_gap_lower);
    if (c.derived.sha_gap_lower_assuming_selmer_preserved)
        derived["sha_gap_lower_assuming_selmer_preserved"] = num(*c.derived.sha_gap_lower_assuming_selmer_preserved);
    j["derived"] = derived;

    Json checklist = Json::object();
    for (const auto& [name, ok] : c.hypothesis_checklist) checklist[name] = ok;
    j["hypothesis_checklist"] = checklist;
    j["assumptions"] = assumptions_json(c);
    j["integer_caps"] = {{"prime_max", num(kPrimeCap)}, {"intermediate_bits", num(std::uint64_t{kIntermediateBits})}};
    j["command_line"] = c.command_line;
    return j.dump(2) + "\n";
}

Certificate certificate_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& ex) {
        bad(std::string("parse error: ") + ex.what());
    }
    if (!j.is_object()) bad("top level must be an object");
    if (field(j, "schema_version") != "1") bad("unsupported schema_version");

    try {
        const auto& curve = field(j, "curve");
        const auto& k = field(j, "K");
        Certificate c{.curve = make_curve(big_of(field(curve, "A")), big_of(field(curve, "B"))),
                      .field = QuadField(i64_of(field(k, "D"))),
                      .d = big_of(field(j, "d"))};

        const auto& plan = field(j, "plan");
        c.plan.target_r = i64_of(field(plan, "target_r"));
        for (const auto& p : field(plan, "core_primes")) c.plan.core_primes.push_back(u64_of(p));
        for (const auto& p : field(plan, "pad_primes")) c.plan.pad_primes.push_back(u64_of(p));
        for (const auto& t : field(plan, "congruence_targets"))
            c.plan.congruence_targets.push_back({big_of(field(t, "residue")), big_of(field(t, "modulus"))});
        c.plan.search_bound = u64_of(field(plan, "search_bound"));
        c.plan.assume_selmer_preserved = bool_of(field(plan, "assume_selmer_preserved"));

        for (const auto& m : field(j, "a_set")) {
            const auto& ch = field(m, "checks");
            c.a_set.push_back({u64_of(field(m, "prime")),
                               {bool_of(field(ch, "odd")), bool_of(field(ch, "additive_for_twist")),
                                bool_of(field(ch, "full_local_torsion")), bool_of(field(ch, "inert_in_K"))}});
        }
        c.sel_k_lower = i64_of(field(j, "sel_K_lower"));
        for (const auto& t : field(j, "drift_T"))
            c.drift_t.push_back({place_of(field(t, "place")), static_cast<int>(i64_of(field(t, "alpha_dim")))});
        c.drift_upper = i64_of(field(j, "drift_upper"));

        const auto& ext = field(j, "external_inputs");
        c.external_inputs = {opt_of(ext, "sel2_E_over_Q_upper"), opt_of(ext, "rank_d_Q"), opt_of(ext, "rank_dD_Q")};
        const auto& der = field(j, "derived");
        c.derived = {opt_of(der, "rank_K"), opt_of(der, "sha_K_lower"), opt_of(der, "sha_gap_lower"),
                     opt_of(der, "sha_gap_lower_assuming_selmer_preserved")};

        const auto& checklist = field(j, "hypothesis_checklist");
        if (!checklist.is_object()) bad("hypothesis_checklist must be an object");
        for (const auto& [name, ok] : checklist.items()) c.hypothesis_checklist.emplace_back(name, bool_of(ok));
        if (j.contains("command_line")) {
            if (!j["command_line"].is_string()) bad("command_line must be a string");
            c.command_line = j["command_line"].get<std::string>();
        }
        return c;
    } catch (const Json::exception& ex) {
        bad(std::string("malformed: ") + ex.what());
    } catch (const Error& ex) {
        if (ex.code() == Errc::InvalidInput) throw;
        bad(ex.what());
    }
}

}  // namespace twistcert
