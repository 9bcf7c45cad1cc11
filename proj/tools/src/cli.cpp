#include "twistcert_cli/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twistcert/forge.hpp"
#include "twistcert/reduction.hpp"

namespace twistcert::cli {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { Json, Text };

struct Options {
    std::string curve;
    std::string d_field;
    std::int64_t r = 0;
    std::uint64_t bound = 0;
    std::optional<std::int64_t> c;
    std::optional<std::int64_t> rank_d;
    std::optional<std::int64_t> rank_dd;
    std::string out_path;
    Format format = Format::Json;
    unsigned threads = 1;
    std::uint64_t q = 0;
    std::string twist_class;
    std::string cert_path;
    bool assume_selmer_preserved = false;
};

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::SearchExhausted:
        case Errc::SamplingExhausted:
        case Errc::VerificationFailed:
            return kFailure;
        default:
            return kInvalidInput;
    }
}

// D is reduced to its squarefree part; a warning says so.
QuadField field_from_flag(const std::string& text, std::ostream& err) {
    const BigInt raw = parse_bigint(text);
    if (raw == 0) throw Error(Errc::InvalidInput, "D = 0");
    const BigInt d = squarefree_part(raw);
    if (d != raw) err << "warning: D = " << raw << " replaced by its squarefree part " << d << "\n";
    if (d > INT64_MAX || d < INT64_MIN) throw Error(Errc::InvalidInput, "D out of range");
    return QuadField(d.convert_to<std::int64_t>());
}

std::string joined_command_line(const std::vector<std::string>& args) {
    std::string out = "twistcert";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) continue;
        out += ' ';
        out += args[i];
    }
    return out;
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error(Errc::InvalidInput, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

// --- classify ----------------------------------------------------------------

std::string class_label(const PrimeClass& row) {
    if (!row.torsion_dim) return "-";
    return "P" + std::to_string(*row.torsion_dim);
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
    const CurveQ e = parse_curve(o.curve);
    std::optional<QuadField> k;
    if (!o.d_field.empty()) k = field_from_flag(o.d_field, err);

    std::vector<std::string> warnings;
    if (has_rational_two_torsion(e)) warnings.push_back("no_rational_2_torsion=false");
    if (k && !check_K_not_sqrt_disc(e, *k)) warnings.push_back("K_ne_sqrt_disc=false");
    for (const auto& w : warnings) err << "warning: " << w << "\n";

    const auto rows = classify_range(e, k, o.bound, o.threads);
    std::map<std::string, std::uint64_t> counts{{"P0", 0}, {"P1", 0}, {"P2", 0}};
    std::uint64_t good_odd = 0, inert = 0;
    for (const auto& row : rows) {
        if (!row.torsion_dim) continue;
        ++good_odd;
        ++counts[class_label(row)];
        if (row.splitting_in_k == Splitting::Inert) ++inert;
    }

    Sink sink(o.out_path, out);
    auto& os = sink.stream();
    if (o.format == Format::Json) {
        Json j;
        j["curve"] = {{"A", e.a().str()}, {"B", e.b().str()}};
        j["D"] = k ? Json(std::to_string(k->d())) : Json(nullptr);
        j["bound"] = std::to_string(o.bound);
        j["warnings"] = warnings;
        j["rows"] = Json::array();
        for (const auto& row : rows) {
            Json r{{"prime", std::to_string(row.prime)}, {"good", row.good_for_e}, {"class", class_label(row)}};
            r["splitting"] = row.splitting_in_k ? Json(std::string(to_string(*row.splitting_in_k))) : Json(nullptr);
            j["rows"].push_back(r);
        }
        j["summary"] = {{"good_odd", std::to_string(good_odd)},
                        {"P0", std::to_string(counts["P0"])},
                        {"P1", std::to_string(counts["P1"])},
                        {"P2", std::to_string(counts["P2"])}};
        if (k) j["summary"]["inert"] = std::to_string(inert);
        os << j.dump(2) << "\n";
        return kOk;
    }
    os << "curve y^2 = x^3 + " << e.a() << "x + " << e.b();
    if (k) os << ", K = Q(sqrt(" << k->d() << "))";
    os << ", primes <= " << o.bound << "\n";
    os << std::left << std::setw(10) << "prime" << std::setw(6) << "good" << std::setw(7) << "class"
       << "splitting\n";
    for (const auto& row : rows) {
        os << std::setw(10) << row.prime << std::setw(6) << (row.good_for_e ? "yes" : "no") << std::setw(7)
           << class_label(row) << (row.splitting_in_k ? to_string(*row.splitting_in_k) : "-") << "\n";
    }
    auto frac = [&](std::uint64_t n) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << (good_odd ? static_cast<double>(n) / good_odd : 0.0);
        return s.str();
    };
    os << "good odd primes: " << good_odd << "\n";
    for (const auto& [name, n] : counts) os << name << ": " << n << " (" << frac(n) << ")\n";
    if (k) os << "inert: " << inert << " (" << frac(inert) << ")\n";
    return kOk;
}

// --- forge / verify ------------------------------------------------------------

void print_certificate_text(const Certificate& c, std::ostream& os) {
    auto list = [](const std::vector<std::uint64_t>& v) {
        std::string s;
        for (auto p : v) s += (s.empty() ? "" : " ") + std::to_string(p);
        return s.empty() ? std::string("-") : s;
    };
    os << "d = " << c.d << "\n";
    os << "core primes: " << list(c.plan.core_primes) << "\n";
    os << "pad primes: " << list(c.plan.pad_primes) << "\n";
    std::int64_t members = 0;
    for (const auto& m : c.a_set) members += m.member();
    os << "A-members: " << members << "\n";
    os << "sel_K_lower: " << c.sel_k_lower << "\n";
    os << "drift_T:";
    if (c.drift_t.empty()) os << " -";
    for (const auto& t : c.drift_t) os << " " << t.place.to_string() << "(" << t.alpha_dim << ")";
    os << "\ndrift_upper: " << c.drift_upper << "\n";
    if (c.derived.rank_k) os << "rank_K: " << *c.derived.rank_k << "\n";
    if (c.derived.sha_k_lower) os << "sha_K_lower: " << *c.derived.sha_k_lower << "\n";
    if (c.derived.sha_gap_lower) os << "sha_gap_lower: " << *c.derived.sha_gap_lower << "\n";
    if (c.derived.sha_gap_lower_assuming_selmer_preserved)
        os << "sha_gap_lower_assuming_selmer_preserved: " << *c.derived.sha_gap_lower_assuming_selmer_preserved
           << " (UNVERIFIED assumption)\n";
    for (const auto& [name, ok] : c.hypothesis_checklist) os << "  " << name << ": " << (ok ? "true" : "false") << "\n";
}

int cmd_forge(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const CurveQ e = parse_curve(o.curve);
    const QuadField k = field_from_flag(o.d_field, err);
    if (o.rank_d.value_or(0) < 0 || o.rank_dd.value_or(0) < 0)
        throw Error(Errc::InvalidInput, "ranks must be non-negative");
    if (o.assume_selmer_preserved && !o.c)
        throw Error(Errc::InvalidInput, "--assume-selmer-preserved needs --c");

    TwistPlan plan = plan_twist(e, k, o.r, o.c, o.bound, o.threads,
                                [&](const std::string& m) { err << "warning: " << m << "\n"; });
    plan.external.rank_d_q = o.rank_d;
    plan.external.rank_dd_q = o.rank_dd;
    plan.assume_selmer_preserved = o.assume_selmer_preserved;
    if (o.rank_d.has_value() != o.rank_dd.has_value())
        err << "warning: both --rank-d and --rank-dD are needed for the derived fields\n";

    Certificate cert = verify_plan(plan);
    cert.command_line = joined_command_line(args);

    Sink sink(o.out_path, out);
    if (o.format == Format::Json)
        sink.stream() << certificate_to_json(cert);
    else
        print_certificate_text(cert, sink.stream());
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    std::ifstream in(o.cert_path, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << o.cert_path << "\n";
        return kInvalidInput;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const Certificate stored = certificate_from_json(text);
    const Certificate fresh = reverify(stored);

    const Json a = Json::parse(text);
    const Json b = Json::parse(certificate_to_json(fresh));
    std::vector<std::string> differing;
    for (const auto& [key, value] : b.items())
        if (!a.contains(key) || a.at(key) != value) differing.push_back(key);
    for (const auto& [key, value] : a.items())
        if (!b.contains(key)) differing.push_back(key);

    if (!differing.empty()) {
        err << "mismatch:";
        for (const auto& key : differing) err << " " << key;
        err << "\n";
        return kFailure;
    }
    Sink sink(o.out_path, out);
    if (o.format == Format::Json)
        sink.stream() << Json{{"status", "ok"}, {"d", fresh.d.str()}, {"sel_K_lower", std::to_string(fresh.sel_k_lower)},
                              {"drift_upper", std::to_string(fresh.drift_upper)}}
                             .dump(2)
                      << "\n";
    else
        sink.stream() << "ok: d = " << fresh.d << ", sel_K_lower = " << fresh.sel_k_lower
                      << ", drift_upper = " << fresh.drift_upper << "\n";
    return kOk;
}

// --- local ---------------------------------------------------------------------

SquareClass twist_class_from_flag(const std::string& name, PrimeQ q) {
    const SquareClass one = SquareClass::trivial(q);
    if (name == "trivial") return one;
    if (name == "unramified") return {q.value(), true, false};
    if (name == "ramified") return {q.value(), false, true};
    if (name == "ramified-u") return {q.value(), true, true};
    throw Error(Errc::InvalidInput, "unknown twist class " + name);
}

Json basis_json(const H1Subspace& s) {
    Json out = Json::array();
    for (H1Vec v : s.basis()) out.push_back(format_h1_vector(v));
    return out;
}

std::string basis_text(const H1Subspace& s) {
    if (s.basis().empty()) return "{0}";
    std::string out;
    for (H1Vec v : s.basis()) out += (out.empty() ? "" : ", ") + format_h1_vector(v);
    return "span{" + out + "}";
}

int cmd_local(const Options& o, std::ostream& out, std::ostream& err) {
    const CurveQ e = parse_curve(o.curve);
    if (o.q < 3 || !is_prime(o.q)) throw Error(Errc::InvalidInput, "--q must be an odd prime");
    const PrimeQ q(o.q);
    std::optional<QuadField> k;
    if (!o.d_field.empty()) k = field_from_flag(o.d_field, err);

    const LocalH1 h1 = build_local_h1(e, q);
    const H1Subspace alpha1 = kummer_image(e, q, SquareClass::trivial(q));
    std::optional<SquareClass> dclass;
    std::optional<H1Subspace> alphad, meet;
    if (!o.twist_class.empty()) {
        dclass = twist_class_from_flag(o.twist_class, q);
        alphad = kummer_image(e, q, *dclass);
        meet = alpha1.intersect(*alphad);
    }
    std::optional<WSubspace> w;
    if (k) w = w_subspace(h1, *k);

    Sink sink(o.out_path, out);
    auto& os = sink.stream();
    if (o.format == Format::Json) {
        Json j;
        j["q"] = std::to_string(o.q);
        j["nonresidue"] = std::to_string(h1.nonresidue());
        j["basis"] = {"u*P1", "u*P2", "q*P1", "q*P2"};
        j["gram"] = h1.gram();
        j["gram_rank"] = h1.gram_rank();
        j["alpha_1"] = {{"dim", alpha1.dim()}, {"basis", basis_json(alpha1)}, {"isotropic", alpha1.is_isotropic()}};
        if (alphad) {
            j["twist_class"] = dclass->to_string();
            j["alpha_d"] = {{"dim", alphad->dim()}, {"basis", basis_json(*alphad)},
                            {"isotropic", alphad->is_isotropic()}};
            j["intersection_dim"] = meet->dim();
        }
        if (w) j["W"] = {{"dim", w->dim()}, {"basis", basis_json(*w)}};
        os << j.dump(2) << "\n";
        return kOk;
    }
    os << "H^1(Q_" << o.q << ", E[2]), u = " << h1.nonresidue() << ", basis u*P1 u*P2 q*P1 q*P2\n";
    os << "gram:\n";
    for (const auto& row : h1.gram()) {
        os << " ";
        for (int x : row) os << " " << x;
        os << "\n";
    }
    os << "gram rank: " << h1.gram_rank() << "\n";
    os << "alpha(1): dim " << alpha1.dim() << ", " << basis_text(alpha1)
       << (alpha1.is_isotropic() ? ", isotropic" : ", not isotropic") << "\n";
    if (alphad) {
        os << "alpha(d), d in class " << dclass->to_string() << ": dim " << alphad->dim() << ", " << basis_text(*alphad)
           << "\n";
        os << "alpha(1) meet alpha(d): dim " << meet->dim() << "\n";
    }
    if (w) os << "W: dim " << w->dim() << ", " << basis_text(*w) << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quadratic twist certificates for elliptic curves y^2 = x^3 + Ax + B", "twistcert"};
    app.require_subcommand(1);
    Options o;
    const std::map<std::string, Format> formats{{"json", Format::Json}, {"text", Format::Text}};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out_path, "Write output to this file");
        sub->add_option("--format", o.format, "json or text")->transform(CLI::CheckedTransformer(formats));
    };
    auto add_curve = [&](CLI::App* sub) {
        sub->add_option("--curve", o.curve, "A,B or {\"A\": .., \"B\": ..}")->required()->allow_extra_args(false);
    };

    auto* classify = app.add_subcommand("classify", "Classify primes up to a bound");
    add_curve(classify);
    classify->add_option("--D", o.d_field, "K = Q(sqrt(D))");
    classify->add_option("--bound", o.bound, "Largest prime")->default_val(100);
    classify->add_option("--threads", o.threads)->default_val(1)->check(CLI::Range(1u, 256u));
    add_common(classify);

    auto* forge = app.add_subcommand("forge", "Build and verify a twist certificate");
    add_curve(forge);
    forge->add_option("--D", o.d_field, "K = Q(sqrt(D))")->required();
    forge->add_option("--r", o.r, "Target gap")->required()->check(CLI::NonNegativeNumber);
    forge->add_option("--bound", o.bound, "Prime search bound")->default_val(1000000);
    forge->add_option("--c", o.c, "Upper bound for dim Sel_2(E/Q)")->check(CLI::NonNegativeNumber);
    forge->add_option("--rank-d", o.rank_d, "rank E^d(Q)");
    forge->add_option("--rank-dD", o.rank_dd, "rank E^{dD}(Q)");
    forge->add_option("--threads", o.threads)->default_val(1)->check(CLI::Range(1u, 256u));
    forge->add_flag("--assume-selmer-preserved", o.assume_selmer_preserved,
                    "Also report the gap assuming twisting does not enlarge Sel_2 over Q");
    add_common(forge);

    auto* verify = app.add_subcommand("verify", "Re-verify a certificate file");
    verify->add_option("path", o.cert_path)->required();
    add_common(verify);

    auto* local = app.add_subcommand("local", "Local pairing at a prime with full 2-torsion");
    add_curve(local);
    local->add_option("--q", o.q)->required();
    local->add_option("--D", o.d_field, "K = Q(sqrt(D))");
    local->add_option("--twist-class", o.twist_class)
        ->check(CLI::IsMember({"trivial", "unramified", "ramified", "ramified-u"}));
    add_common(local);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (*classify) return cmd_classify(o, out, err);
        if (*forge) return cmd_forge(o, args, out, err);
        if (*verify) return cmd_verify(o, out, err);
        return cmd_local(o, out, err);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code_for(ex.code());
    } catch (const nlohmann::json::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kInvalidInput;
    }
}

}  // namespace twistcert::cli
