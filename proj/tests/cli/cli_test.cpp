#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twistcert/forge.hpp"
#include "twistcert_cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

bool g_update = false;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = twistcert::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void check_golden(const std::string& name, const std::string& actual) {
    const fs::path path = fs::path(TWISTCERT_GOLDEN_DIR) / (name + ".out");
    if (g_update) {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path << "; rerun with --update-golden");
    CHECK_MESSAGE(slurp(path) == actual, "output differs from " << path);
}

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "twistcert_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("golden outputs") {
    struct Case {
        const char* name;
        std::vector<std::string> args;
    };
    const Case cases[] = {
        {"classify_text", {"classify", "--curve", "0,-2", "--D", "5", "--bound", "50", "--format", "text"}},
        {"classify_json", {"classify", "--curve", "0,-2", "--D", "5", "--bound", "50"}},
        {"classify_torsion_warning", {"classify", "--curve", "-1,0", "--bound", "20", "--format", "text"}},
        {"forge_r10", {"forge", "--curve", "0,-2", "--D", "5", "--r", "10", "--bound", "1000000"}},
        {"forge_r10_inputs",
         {"forge", "--curve", "0,-2", "--D", "5", "--r", "10", "--c", "1", "--rank-d", "0", "--rank-dD", "0"}},
        {"forge_r4_assumed_text",
         {"forge", "--curve", "0,-2", "--D", "5", "--r", "4", "--c", "2", "--rank-d", "1", "--rank-dD", "0",
          "--assume-selmer-preserved", "--format", "text"}},
        {"local_43_text", {"local", "--curve", "0,-2", "--q", "43", "--D", "5", "--format", "text"}},
        {"local_43_ramified_u", {"local", "--curve", "0,-2", "--q", "43", "--twist-class", "ramified-u"}},
    };
    for (const auto& c : cases) {
        INFO(c.name);
        const auto r = run(c.args);
        CHECK(r.code == 0);
        check_golden(c.name, r.out);
    }
}

TEST_CASE("forge output is the serialized library result") {
    using namespace twistcert;
    const std::vector<std::string> args{"forge", "--curve", "0,-2", "--D", "5", "--r", "4", "--bound", "100000"};
    const auto r = run(args);
    REQUIRE(r.code == 0);
    auto cert = verify_plan(plan_twist(make_curve(0, -2), QuadField(5), 4, std::nullopt, 100000));
    cert.command_line = "twistcert forge --curve 0,-2 --D 5 --r 4 --bound 100000";
    CHECK(r.out == certificate_to_json(cert));
}

TEST_CASE("exit codes") {
    CHECK(run({"classify", "--curve", "0,0"}).code == 2);
    CHECK(run({"classify", "--curve", "0,0"}).err.find("SingularCurve") != std::string::npos);
    CHECK(run({"classify", "--curve", "x"}).code == 2);
    CHECK(run({"classify"}).code == 2);
    CHECK(run({"classify", "--curve", "0,-2", "--format", "xml"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto warned = run({"classify", "--curve", "-1,0", "--bound", "20"});
    CHECK(warned.code == 0);
    CHECK(warned.err.find("no_rational_2_torsion=false") != std::string::npos);

    CHECK(run({"forge", "--curve", "0,-2", "--D", "-3", "--r", "4"}).code == 2);
    CHECK(run({"forge", "--curve", "0,-2", "--D", "5", "--bound", "50", "--r", "100"}).code == 1);
    const auto slow = run({"forge", "--curve", "0,-2", "--D", "5", "--bound", "5000", "--r", "200"});
    CHECK(slow.code == 1);
    CHECK(slow.err.find("warning: usable-prime search past") != std::string::npos);
    CHECK(slow.err.find("SearchExhausted") != std::string::npos);
    CHECK(run({"forge", "--curve", "-1,0", "--D", "5", "--r", "2"}).code == 2);
    CHECK(run({"forge", "--curve", "0,-2", "--D", "1", "--r", "2"}).code == 2);
    CHECK(run({"forge", "--curve", "0,-2", "--D", "5", "--r", "-2"}).code == 2);
    CHECK(run({"forge", "--curve", "0,-2", "--D", "5", "--r", "2", "--assume-selmer-preserved"}).code == 2);

    CHECK(run({"local", "--curve", "0,-2", "--q", "7"}).code == 2);
    CHECK(run({"local", "--curve", "0,-2", "--q", "43", "--D", "-1"}).code == 0);  // 43 = 3 mod 4, inert
    CHECK(run({"local", "--curve", "0,-2", "--q", "31", "--D", "5"}).code == 2);   // split
    CHECK(run({"local", "--curve", "0,-2", "--q", "45"}).code == 2);
    CHECK(run({"local", "--curve", "0,-2", "--q", "43", "--twist-class", "odd"}).code == 2);
}

TEST_CASE("D is reduced to its squarefree part") {
    const auto a = run({"classify", "--curve", "0,-2", "--D", "20", "--bound", "50"});
    const auto b = run({"classify", "--curve", "0,-2", "--D", "5", "--bound", "50"});
    CHECK(a.code == 0);
    CHECK(a.err.find("squarefree part 5") != std::string::npos);
    CHECK(a.out == b.out);
}

TEST_CASE("ramified twist class is transversal to the unramified image") {
    const auto r = run({"local", "--curve", "0,-2", "--q", "43", "--twist-class", "ramified-u"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["gram_rank"] == 4);
    CHECK(j["intersection_dim"] == 0);
    const auto w = run({"local", "--curve", "0,-2", "--q", "43", "--D", "5"});
    CHECK(nlohmann::json::parse(w.out)["W"]["dim"] == 2);
}

TEST_CASE("verify") {
    const auto cert = temp_file("cert.json");
    const auto r = run({"forge", "--curve", "0,-2", "--D", "5", "--r", "6", "--out", cert.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(run({"verify", cert.string()}).code == 0);

    const std::string text = slurp(cert);
    CHECK(text.find("--out") == std::string::npos);

    auto edited = nlohmann::ordered_json::parse(text);
    edited["sel_K_lower"] = "14";
    const auto bad = temp_file("edited.json");
    std::ofstream(bad, std::ios::binary) << edited.dump(2) << "\n";
    const auto v = run({"verify", bad.string()});
    CHECK(v.code == 1);
    CHECK(v.err.find("sel_K_lower") != std::string::npos);

    auto tampered = nlohmann::ordered_json::parse(text);
    tampered["plan"]["core_primes"][0] = "31";
    tampered["d"] = (twistcert::BigInt(tampered["d"].get<std::string>()) / 43 * 31).str();
    const auto tp = temp_file("tampered.json");
    std::ofstream(tp, std::ios::binary) << tampered.dump(2) << "\n";
    const auto t = run({"verify", tp.string()});
    CHECK(t.code == 1);
    CHECK(t.err.find("inert_in_K at 31") != std::string::npos);

    const auto truncated = temp_file("truncated.json");
    std::ofstream(truncated, std::ios::binary) << text.substr(0, text.size() / 3);
    CHECK(run({"verify", truncated.string()}).code == 2);
    CHECK(run({"verify", temp_file("does_not_exist.json").string()}).code == 2);

    // reformatting does not matter, content does
    const auto compact = temp_file("compact.json");
    std::ofstream(compact, std::ios::binary) << nlohmann::ordered_json::parse(text).dump();
    CHECK(run({"verify", compact.string()}).code == 0);
}

TEST_CASE("thread count does not change results") {
    const auto one = run({"forge", "--curve", "0,-2", "--D", "5", "--r", "20", "--threads", "1"});
    const auto four = run({"forge", "--curve", "0,-2", "--D", "5", "--r", "20", "--threads", "4"});
    REQUIRE(one.code == 0);
    REQUIRE(four.code == 0);
    auto a = nlohmann::ordered_json::parse(one.out), b = nlohmann::ordered_json::parse(four.out);
    a.erase("command_line");
    b.erase("command_line");
    CHECK(a == b);
}

int main(int argc, char** argv) {
    std::vector<char*> rest;
    for (int i = 0; i < argc; ++i) {
        if (std::strcmp(argv[i], "--update-golden") == 0)
            g_update = true;
        else
            rest.push_back(argv[i]);
    }
    doctest::Context ctx(static_cast<int>(rest.size()), rest.data());
    return ctx.run();
}
