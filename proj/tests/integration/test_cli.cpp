#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cpz/cli.hpp"
#include "cpz/spec_json.hpp"

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cpz::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("eval riemann") {
    const auto r = run({"eval", "--catalog", "riemann", "--sigma", "2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["value"]["re"].get<double>() == doctest::Approx(1.644934).epsilon(1e-6));
    CHECK(j["value"]["im"].get<double>() == 0.0);
    CHECK(j["tail"].get<double>() > 0.0);
    CHECK(j["config"]["command"] == "eval");
    CHECK(j["config"]["policy"]["prime_limit"] == 100000);
    CHECK(j["config"]["sigma"] == json::array({2.0}));
}

TEST_CASE("classify L1") {
    const auto r = run({"classify", "--catalog", "L1", "--sigma", "2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["verdict"] == "NotCharacteristic");
    CHECK(j["offending"] == json::parse("[[1,2]]"));
}

TEST_CASE("classify runs the atom path for collinear entries") {
    const auto j = json::parse(run({"classify", "--catalog", "L_zeta2s"}).out);
    CHECK(j["verdict"] == "OutOfTheoremScope");
    CHECK(j["atom_certificate"]["outcome"] == "NegativeAtomFound");
    CHECK(j["atom_certificate"]["negative_atom"]["p"] == 3);
}

TEST_CASE("cf at zero") {
    const auto r = run({"cf", "--catalog", "riemann", "--sigma", "2", "--t", "0"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["re"] == 1.0);
    CHECK(j["im"] == 0.0);
}

TEST_CASE("cf over several t with csv output") {
    const auto r = run({"cf", "--catalog", "md_iii", "--t", "1,0", "--t", "0,-2.5", "--out", "cf.csv"});
    REQUIRE(r.code == 0);
    const auto csv = slurp("cf.csv");
    CHECK(csv.rfind("t_1,t_2,re,im\n1,0,", 0) == 0);
    CHECK(json::parse(r.out)["values"].size() == 2);
}

TEST_CASE("errors are JSON on stderr with exit 2") {
    auto r = run({"eval", "--catalog", "nope"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["kind"] == "lookup_error");

    r = run({"eval", "--catalog", "riemann", "--sigma", "1"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["kind"] == "domain_error");

    r = run({"eval", "--catalog", "md_iii", "--sigma", "2"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["violations"][0]["field"] == "sigma");

    r = run({"eval", "--catalog", "riemann", "--spec", "x.json"});
    CHECK(r.code == 2);

    r = run({"eval", "--catalog", "riemann", "--sigma", "two"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["kind"] == "parse_error");

    r = run({"frobnicate"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["kind"] == "usage_error");

    r = run({"sample", "--catalog", "L1", "--n", "10"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["kind"] == "not_a_distribution");
}

TEST_CASE("witness exit codes") {
    auto r = run({"witness", "--catalog", "L_chi4"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["witness"]["certified_margin"].get<double>() > 0.0);
    CHECK(j["recheck"]["survives"] == true);

    r = run({"witness", "--catalog", "riemann", "--budget", "20000"});
    CHECK(r.code == 1);
    j = json::parse(r.out);
    CHECK(j["found"] == false);

    r = run({"witness", "--catalog", "L1", "--strategy", "sideways"});
    CHECK(r.code == 2);
}

TEST_CASE("sample output is byte-identical across thread counts") {
    auto a = run({"sample", "--catalog", "riemann", "--seed", "17", "--n", "5000", "--out", "s1.csv",
                  "--threads", "1"});
    auto b = run({"sample", "--catalog", "riemann", "--seed", "17", "--n", "5000", "--out", "s2.csv",
                  "--threads", "4"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(slurp("s1.csv") == slurp("s2.csv"));
    const auto side = json::parse(slurp("s1.csv.json"));
    CHECK(side["seed"] == 17);
    CHECK(side["n"] == 5000);
    CHECK(side.contains("bias_bound"));
    CHECK(side["provenance"]["spec_source"]["catalog"] == "riemann");
}

TEST_CASE("levy csv and sidecar") {
    const auto r = run({"levy", "--catalog", "dedekind_qi", "--prime-limit", "50", "--out", "atoms.csv"});
    REQUIRE(r.code == 0);
    const auto csv = slurp("atoms.csv");
    CHECK(csv.rfind("p,r,l,mass,x_1\n2,1,1,0.25,", 0) == 0);
    CHECK(json::parse(slurp("atoms.csv.json"))["nonnegative"] == true);
}

TEST_CASE("moments") {
    const auto j = json::parse(run({"moments", "--catalog", "md_iii"}).out);
    // orders of total degree 1..4 in two variables: 2 + 3 + 4 + 5
    CHECK(j["cumulants"].size() == 14);
    CHECK(j["absolute_moments"].size() == 9);
}

TEST_CASE("catalog list, show and export") {
    auto j = json::parse(run({"catalog", "list"}).out);
    CHECK(j["entries"].size() == 18);
    j = json::parse(run({"catalog", "show", "L_zeta2s"}).out);
    CHECK(j["expected"]["infinitely_divisible"] == false);
    CHECK(j["expected"]["atom_outcome"] == "NegativeAtomFound");

    const auto r = run({"catalog", "export", "md_iv", "--out", "md_iv.json"});
    REQUIRE(r.code == 0);
    const auto spec = cpz::parse_spec(slurp("md_iv.json"));
    CHECK(spec.d == 2);
    const auto e = run({"eval", "--spec", "md_iv.json", "--sigma", "2,0.5", "--t", "1,1"});
    CHECK(e.code == 0);
    CHECK(json::parse(e.out)["config"]["spec_source"]["file"] == "md_iv.json");
    CHECK(run({"catalog", "show", "nope"}).code == 2);
}

TEST_CASE("spec file requires sigma") {
    run({"catalog", "export", "riemann", "--out", "riemann.json"});
    const auto r = run({"eval", "--spec", "riemann.json"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["violations"][0]["field"] == "sigma");
}

TEST_CASE("identical argv gives identical output") {
    const std::vector<std::string> args{"cf", "--catalog", "zeta2_L2s", "--t", "3.5", "--t", "-1e2"};
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("tolerance warnings") {
    const auto j = json::parse(run({"eval", "--catalog", "riemann", "--prime-limit", "100"}).out);
    REQUIRE(j.contains("warnings"));
}

TEST_CASE("help") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("witness") != std::string::npos);
}
