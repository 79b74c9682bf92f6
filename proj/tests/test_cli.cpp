#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    std::string cmd = std::string(DIOPH_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("dioph_cli_test_" + name);
    fs::remove_all(d);
    return d;
}

json load(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("cf writes a report, a series and metadata") {
    fs::path d = scratch("cf");
    Run r = run("cf --target 'surd:(1+1*sqrt(5))/2' --terms 6 --out " + d.string());
    CHECK(r.status == 0);
    json rep = load(d / "report.json");
    CHECK(rep["schema"] == "dioph.report/1");
    CHECK(rep["command"] == "cf");
    CHECK(rep["certified"] == true);
    CHECK(rep["prop1"]["sup_q_ratio"] == "2");
    json meta = load(d / "meta.json");
    CHECK(meta["workers"] == 1);
    CHECK(meta["argv"].size() > 2);
    std::string csv = slurp(d / "series.csv");
    CHECK(csv.rfind("nu,a,p,q,remainder", 0) == 0);
    fs::remove_all(d);
}

TEST_CASE("--json prints the report") {
    fs::path d = scratch("json");
    Run r = run("cf --target 'surd:(-1+1*sqrt(2))/1' --terms 4 --json --out " + d.string());
    CHECK(r.status == 0);
    json rep = json::parse(r.out);
    CHECK(rep["expansion"]["a0"] == "0");
    for (const auto& a : rep["expansion"]["partials"]) CHECK(a == "2");
    fs::remove_all(d);
}

TEST_CASE("output is deterministic apart from metadata") {
    fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string args = "simul --target 'surd:(-1+1*sqrt(2))/1,surd:(-1+1*sqrt(3))/1' --q-max 5000 --out ";
    REQUIRE(run(args + a.string()).status == 0);
    REQUIRE(run(args + b.string() + " --workers 2").status == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("G_d value") {
    Run r = run("exponents --gd 3 0.5");
    CHECK(r.status == 0);
    CHECK(r.out.find("1.6180339887") != std::string::npos);
    CHECK(run("exponents --gd 3 1.5").status == 2);
    CHECK(run("exponents --gd 3 x").status == 2);
}

TEST_CASE("usage errors exit with status 2") {
    CHECK(run("").status != 0);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("cf --terms 3").status == 2);
    CHECK(run("cf --target 'bogus:1' --terms 3").status == 2);
    CHECK(run("verify --ledger /nonexistent/ledger.json").status == 2);
}

TEST_CASE("criteria on a quadratic pair") {
    fs::path d = scratch("criteria");
    Run r = run("criteria --target 'surd:(-1+1*sqrt(2))/1,surd:(-1+1*sqrt(3))/1' --q-max 5000 --m-max 100 --out " +
                d.string());
    CHECK(r.status == 0);
    json rep = load(d / "report.json");
    CHECK(rep["command"] == "criteria");
    fs::remove_all(d);
}

TEST_CASE("construct then verify round-trips through the ledger") {
    fs::path c = scratch("construct"), v = scratch("verify");
    Run r = run("construct --t-max 1 --out " + c.string());
    CHECK(r.status == 0);
    REQUIRE(fs::exists(c / "ledger.json"));
    json ledger = load(c / "ledger.json");
    CHECK(ledger["gamma"] == "400");
    CHECK(ledger["anchors"][0] == 1);
    Run w = run("verify --ledger " + (c / "ledger.json").string() + " --oracle-budget 2000 --out " + v.string());
    CHECK(w.status == 0);
    json rep = load(v / "report.json");
    CHECK(rep["command"] == "verify");
    CHECK(rep["certified"] == true);
    fs::remove_all(c);
    fs::remove_all(v);
}

TEST_CASE("diagnostic construction reports its certificate failure") {
    fs::path d = scratch("diag");
    Run r = run("construct --mode diagnostic --gamma 50 --t-max 2 --oracle-budget 2000 --out " + d.string());
    CHECK(r.status == 1);
    json rep = load(d / "report.json");
    CHECK(rep["certified"] == false);
    CHECK(rep["failure"].get<std::string>().find("(x1)") != std::string::npos);
    fs::remove_all(d);
}

TEST_CASE("a tampered ledger is refused") {
    fs::path c = scratch("tamper"), v = scratch("tamper_v");
    REQUIRE(run("construct --mode diagnostic --gamma 50 --t-max 1 --out " + c.string()).status == 0);
    json ledger = load(c / "ledger.json");
    ledger["anchors"] = json::array({1, 2});
    std::ofstream(c / "ledger.json") << ledger.dump();
    CHECK(run("verify --ledger " + (c / "ledger.json").string() + " --out " + v.string()).status == 2);
    fs::remove_all(c);
    fs::remove_all(v);
}
