#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ellff/cache.hpp"
#include "ellff/cli.hpp"
#include "ellff/errors.hpp"
#include "json.hpp"

using namespace ellff;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result go(JobSpec job)
{
    std::ostringstream out, err;
    int rc = run(job, out, err);
    return {rc, out.str(), err.str()};
}

JobSpec job(const std::string& cmd)
{
    JobSpec j;
    j.command = cmd;
    return j;
}

std::string temp_path(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("ellff_test_" + name);
    std::filesystem::remove(p);
    return p.string();
}

Result shell(const std::string& args)
{
    std::string cmd = std::string(ELLFF_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int st = pclose(f);
    return {WEXITSTATUS(st), out, ""};
}

}  // namespace

TEST_CASE("lfunc on the conductor four fixture")
{
    auto j = job("lfunc");
    j.fixture = "e-prime";
    auto r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    CHECK(rep["l_function"]["conductor_degree"] == 4);
    CHECK(rep["l_function"]["coefficients"] == json::array({"1"}));
    CHECK(rep["l_function"]["functional_equation"] == true);
}

TEST_CASE("inline curves, annotations and field sizes")
{
    auto j = job("lfunc");
    j.curve = "a1=1,a2=0,a3=0,a4=t,a6=0";
    j.q = 2;
    // the fiber at infinity is additive in characteristic 2
    auto r = go(j);
    CHECK(r.code == 2);
    CHECK(r.err.find("inf") != std::string::npos);
    j.annotations = {"inf: type=III*"};
    r = go(j);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["l_function"]["polynomial"] == "1");

    j.curve = "a1=1; annotate inf: type=III*; a4=t";
    j.annotations.clear();
    CHECK(go(j).code == 0);

    j.curve = "a1=1,a4=t^";
    auto bad = go(j);
    CHECK(bad.code == 2);
    CHECK(bad.err.find("column") != std::string::npos);
    j.curve = "a4=t";
    j.q = 6;
    CHECK(go(j).code == 2);
    j.q = 0;
    CHECK(go(j).code == 2);
}

TEST_CASE("curve files")
{
    std::string path = temp_path("curve.txt");
    {
        std::ofstream f(path);
        f << "# legendre curve over F_5\na2 = t + 1\na4 = t\n";
    }
    auto j = job("rank");
    j.curve_file = path;
    j.q = 5;
    auto r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    CHECK(rep["l_function"]["degree"] == 0);
    CHECK(rep["parity"]["odd"] == true);
    j.curve_file = path + ".missing";
    CHECK(go(j).code == 2);
}

TEST_CASE("rank and heights on the legendre fixture")
{
    auto j = job("rank");
    j.fixture = "legendre:p=3,f=1";
    auto r = go(j);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["analytic_rank"] == 2);

    j.command = "heights";
    r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    REQUIRE(rep["points"].size() == 4);
    for (auto& p : rep["points"]) {
        CHECK(p["height"] == "3/4");
        CHECK(p["agrees"] == true);
    }
    j.format = "human";
    r = go(j);
    CHECK(r.out.find("height: 3/4 · log q") != std::string::npos);
    j.format = "csv";
    r = go(j);
    CHECK(r.out.rfind("point,height,telescoping,stable\n", 0) == 0);
}

TEST_CASE("explicit points on the command line")
{
    auto j = job("heights");
    j.curve = "a4=t^3-t^2+t-2, a6=(t+1)^2";
    j.q = 5;
    j.points = {"(0, t+1)", "(t, t^2+1)"};
    auto r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    CHECK(rep["points"][0]["height"] == "1");
    CHECK(rep["points"][1]["height"] == "3/2");
    j.command = "lattice";
    r = go(j);
    REQUIRE(r.code == 0);
    rep = json::parse(r.out);
    CHECK(rep["lattice"]["rank"] == 2);
    CHECK(rep["lattice"]["gram"][0][0] == "1");
    j.points = {"(0, t)"};
    CHECK(go(j).code == 2);
    j.points.clear();
    CHECK(go(j).code == 2);
}

TEST_CASE("lattice on the second explicit-points fixture")
{
    auto j = job("lattice");
    j.fixture = "dpct:p=3,n=1";
    j.format = "csv";
    auto r = go(j);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("P0,P1,P2,P3\n", 0) == 0);
    j.format = "json";
    auto rep = json::parse(go(j).out);
    CHECK(rep["lattice"]["rank"] == 2);
}

TEST_CASE("legendre and dpct commands")
{
    auto j = job("legendre");
    j.p = 3;
    j.f = 1;
    auto r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    CHECK(rep["ok"] == true);
    CHECK(rep["lattice"]["rank"] == 2);
    CHECK(rep["torsion_order"] == 8);
    CHECK(rep["analytic_rank"] == 2);
    CHECK(rep["class_number"]["lhs"] == "64");
    CHECK(rep["class_number"]["holds"] == true);
    // no floats anywhere in this report
    std::function<void(const json&)> no_float = [&](const json& x) {
        CHECK_FALSE(x.is_number_float());
        if (x.is_structured())
            for (auto& e : x) no_float(e);
    };
    no_float(rep);

    j.check = "lattice";
    rep = json::parse(go(j).out);
    CHECK_FALSE(rep.contains("torsion_order"));
    j.check = "everything";
    CHECK(go(j).code == 2);

    auto d = job("dpct");
    d.p = 3;
    d.n = 1;
    rep = json::parse(go(d).out);
    CHECK(rep["ok"] == true);
    CHECK(rep["relations_match"] == true);
    d.p = 2;
    CHECK(go(d).code == 2);
}

TEST_CASE("tower table")
{
    auto j = job("tower");
    j.p = 3;
    j.ds = {2, 3, 4, 8};
    auto r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    REQUIRE(rep["rows"].size() == 3);
    CHECK(rep["rows"][1]["d"] == 4);
    CHECK(rep["rows"][1]["rank"] == 2);
    CHECK(rep["skipped"][0]["d"] == 3);
    // timings stay out of the report
    CHECK(r.out.find("seconds") == std::string::npos);
    j.format = "csv";
    CHECK(go(j).out.rfind("d,o_d,q_d,conductor_degree,degree,rank\n", 0) == 0);
    j.ds.clear();
    CHECK(go(j).code == 2);
}

TEST_CASE("surface zeta and bsd reports")
{
    auto j = job("surface-zeta");
    j.fixture = "e-i2";
    j.n_max = 4;
    auto r = go(j);
    REQUIRE(r.code == 0);
    auto rep = json::parse(r.out);
    CHECK(rep["consistent"] == true);
    CHECK(rep["counts"].size() == 4);
    CHECK(rep["p2_order_at_1_over_q"] == 10);

    auto b = job("bsd-check");
    b.fixture = "legendre:p=3,f=1";
    rep = json::parse(go(b).out);
    CHECK(rep["ok"] == true);
    CHECK(rep["rbsd"]["implied_sha"] == "1");
    CHECK(rep["artin_tate"]["implied_brauer"] == "1");
    CHECK(rep["shioda_tate"]["ns_rank"] == 22);

    // only one of the two independent points: the ranks disagree
    b.points = {"(t, t^3+2*t^2+t)"};
    auto bad = go(b);
    CHECK(bad.code == 1);
    CHECK(json::parse(bad.out)["rbsd"].contains("error"));
}

TEST_CASE("output is byte identical across runs")
{
    auto j = job("bsd-check");
    j.fixture = "legendre:p=3,f=1";
    CHECK(go(j).out == go(j).out);
    auto t = job("tower");
    t.p = 5;
    t.ds = {2, 4, 6};
    t.threads = 3;
    auto a = go(t);
    t.threads = 1;
    CHECK(a.out == go(t).out);
}

TEST_CASE("cache file is used and merges are commutative")
{
    std::string c1 = temp_path("c1.jsonl"), c2 = temp_path("c2.jsonl");
    auto j = job("rank");
    j.fixture = "legendre:p=5,f=1";
    j.cache = c1;
    auto cold = go(j);
    auto warm = go(j);
    REQUIRE(cold.code == 0);
    CHECK(cold.out == warm.out);
    CountCache a(c1);
    CHECK(a.size() > 0);

    j.fixture = "legendre:p=3,f=1";
    j.cache = c2;
    REQUIRE(go(j).code == 0);
    // a corrupted line is skipped with a warning
    {
        std::ofstream f(c2, std::ios::app);
        f << "{not json\n";
    }
    std::string ab = temp_path("ab.jsonl"), ba = temp_path("ba.jsonl");
    auto m = job("cache-merge");
    m.inputs = {c1, c2};
    m.output = ab;
    REQUIRE(go(m).code == 0);
    m.inputs = {c2, c1};
    m.output = ba;
    REQUIRE(go(m).code == 0);
    CountCache x(ab), y(ba);
    CHECK(x == y);
    CHECK(x.size() == a.size() + CountCache(c2).size());
    // merging again changes nothing
    m.inputs = {ab, ab};
    m.output = ab;
    REQUIRE(go(m).code == 0);
    CHECK(CountCache(ab) == x);
}

TEST_CASE("the command line binary")
{
    auto r = shell("legendre --p 3 --f 1 --check all");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["lattice"]["rank"] == 2);
    r = shell("--format csv tower --p 3 --d 2,4");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("d,o_d", 0) == 0);
    r = shell("lfunc --curve 'a1=1,a4=t' --annotate 'inf: type=III*' --q 2 --format human");
    CHECK(r.code == 0);
    CHECK(r.out.find("polynomial: 1") != std::string::npos);
    CHECK(shell("lfunc --curve 'a1=1,a4=t' --q 2").code == 2);
    CHECK(shell("tower --p 3 --d 2,x").code == 2);
    CHECK(shell("no-such-command").code == 2);
    CHECK(shell("--help").code == 0);
}

TEST_CASE("integer lists")
{
    CHECK(parse_int_list("2,4,10") == std::vector<int>{2, 4, 10});
    CHECK_THROWS_AS(parse_int_list("2,,4"), InputError);
    CHECK_THROWS_AS(parse_int_list("2,4a"), InputError);
}
