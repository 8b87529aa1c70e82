#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "ropekit/curve.hpp"
#include "ropekit/dubins.hpp"
#include "ropekit/io.hpp"

namespace fs = std::filesystem;
using namespace ropekit;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "ropekit_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(ROPEKIT_BIN) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ropekit_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("gen + thickness round trip") {
    const fs::path curve = scratch("circle.json");
    const fs::path report = scratch("report.json");
    const fs::path pairs = scratch("pairs.csv");
    REQUIRE(run("gen circle --n 512 --r 1 --out " + curve.string()).exit_code == 0);
    const RunResult r = run("thickness " + curve.string() + " --out " + report.string() +
                            " --pairs " + pairs.string());
    REQUIRE(r.exit_code == 0);
    const std::string json = slurp(report);
    CHECK(json.find("\"nir\":0.9999") != std::string::npos);
    const std::string csv = slurp(pairs);
    CHECK(csv.rfind("s,t,dist,r1,r2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 10);
}

TEST_CASE("malformed input exits 2 with a diagnostic and no partial output") {
    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << "{not json";
    const fs::path report = scratch("never_written.json");
    const RunResult r = run("thickness " + bad.string() + " --out " + report.string());
    CHECK(r.exit_code == 2);
    CHECK(!r.err.empty());
    CHECK(!fs::exists(report));
    CHECK(!fs::exists(report.string() + ".tmp"));
}

TEST_CASE("missing input exits 2") {
    CHECK(run("thickness /nonexistent/x.json").exit_code == 2);
}

TEST_CASE("schema violations exit 2") {
    const fs::path bad = scratch("bad_schema.json");
    std::ofstream(bad) << R"({"components":[{"closed":true,"points":[[0,0],[1,1,1]]}]})";
    CHECK(run("thickness " + bad.string()).exit_code == 2);
}

TEST_CASE("oracle flag adds oracle fields") {
    const fs::path curve = scratch("ell.json");
    REQUIRE(run("gen ellipse --a 2 --b 1 --n 128 --out " + curve.string()).exit_code == 0);
    const RunResult r = run("thickness " + curve.string() + " --oracle");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"ball_radius\":") != std::string::npos);
    CHECK(r.out.find("\"global_radius_min\":") != std::string::npos);
    CHECK(r.out.find("\"focal_min\":") != std::string::npos);
}

TEST_CASE("tighten exit codes") {
    const fs::path curve = scratch("circle_t.json");
    REQUIRE(run("gen circle --n 96 --out " + curve.string()).exit_code == 0);
    // Zero budget: flagged as budget-exhausted.
    CHECK(run("tighten " + curve.string() + " --iters 0 --out " +
              scratch("t0.json").string())
              .exit_code == 4);
    // The circle converges immediately and trivially passes the verdict check.
    const fs::path trace = scratch("trace.csv");
    const RunResult ok = run("tighten " + curve.string() + " --iters 200 --out " +
                             scratch("t1.json").string() + " --trace " + trace.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("verdict=PASS") != std::string::npos);
    const std::string csv = slurp(trace);
    CHECK(csv.rfind("iter,length,nir,dcsd,maxk,ropelength,accepted\n", 0) == 0);
}

TEST_CASE("dubins command") {
    const fs::path boundary = scratch("b.json");
    std::ofstream(boundary) << R"({"p":[0,0,0],"q":[10,0,0],"v":[1,0,0],"w":[1,0,0]})";
    const RunResult r = run("dubins --boundary " + boundary.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"word\":\"S\"") != std::string::npos);
    CHECK(r.out.find("\"length\":10.0") != std::string::npos);

    std::ofstream(boundary, std::ios::trunc)
        << R"({"p":[0,0,0],"q":[1,1,0],"v":[1,0,0],"w":[0,1,0]})";
    const RunResult q = run("dubins --boundary " + boundary.string());
    REQUIRE(q.exit_code == 0);
    CHECK(q.out.find("\"word\":\"L\"") != std::string::npos);
    CHECK(q.out.find("1.5707963267948") != std::string::npos);

    const RunResult h = run("dubins --helical --zeta 0 --tau0 1 --tau0p 0 --span 10 --n 500");
    REQUIRE(h.exit_code == 0);
    const PolyCurve arc = curve_from_json(h.out);
    CHECK(arc.components[0].size() == 501);
    CHECK(!arc.components[0].closed);
}

TEST_CASE("identical inputs produce byte-identical outputs") {
    const fs::path curve = scratch("knot.json");
    REQUIRE(run("gen torus-knot --p 2 --q 3 --R 2 --r 1 --n 96 --out " + curve.string())
                .exit_code == 0);
    const fs::path out1 = scratch("k1.json"), out2 = scratch("k2.json");
    const fs::path tr1 = scratch("k1.csv"), tr2 = scratch("k2.csv");
    const std::string args = " --iters 40 --seed 9 ";
    REQUIRE(run("tighten " + curve.string() + args + "--out " + out1.string() + " --trace " +
                tr1.string())
                .exit_code == 4); // budget-flagged, deterministic content regardless
    REQUIRE(run("tighten " + curve.string() + args + "--out " + out2.string() + " --trace " +
                tr2.string())
                .exit_code == 4);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(tr1) == slurp(tr2));
}

TEST_CASE("curve JSON round trip is exact") {
    const PolyCurve curve = make_torus_knot(2, 3, 2.0, 1.0, 64);
    const PolyCurve back = curve_from_json(curve_to_json(curve));
    REQUIRE(back.components.size() == curve.components.size());
    REQUIRE(back.components[0].closed == curve.components[0].closed);
    REQUIRE(back.components[0].size() == curve.components[0].size());
    for (std::size_t i = 0; i < 64; ++i) {
        const Vec3 a = curve.components[0].points[i];
        const Vec3 b = back.components[0].points[i];
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
        CHECK(a.z == b.z);
    }
}

TEST_CASE("boundary JSON round trip is exact") {
    const BoundaryData b{{0.1, -2.5, 3.25}, {4, 5, 6}, {1, 0, 0}, {0, 0, 1}};
    const BoundaryData r = boundary_from_json(boundary_to_json(b));
    CHECK(distance(r.p, b.p) == 0.0);
    CHECK(distance(r.q, b.q) == 0.0);
    CHECK(distance(r.v, b.v) == 0.0);
    CHECK(distance(r.w, b.w) == 0.0);
    CHECK_THROWS_AS(boundary_from_json("{\"p\":[0,0,0]}"), std::invalid_argument);
}
