#include <cmath>
#include <random>

#include <stdexcept>

#include <doctest.h>

#include "ropekit/dubins.hpp"
#include "ropekit/thickness.hpp"
#include "ropekit/verify.hpp"

using namespace ropekit;

namespace {

double boundary_defect(const DubinsPath& path, const BoundaryData& b) {
    double d = distance(path.start_point(), b.p) + distance(path.end_point(), b.q);
    if (path.length > 0)
        d += angle_between(path.start_tangent(), b.v) + angle_between(path.end_tangent(), b.w);
    return d;
}

std::mt19937_64 rng(42);
double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

BoundaryData random_planar_instance() {
    const double d = uniform(1.0, 9.0);
    const double phi = uniform(-M_PI, M_PI);
    const double psi = uniform(0.0, 2.0 * M_PI);
    return {{0, 0, 0},
            {d * std::cos(phi), d * std::sin(phi), 0},
            {1, 0, 0},
            {std::cos(psi), std::sin(psi), 0}};
}

} // namespace

TEST_CASE("straight boundary degenerates to a pure segment") {
    const BoundaryData b{{0, 0, 0}, {10, 0, 0}, {1, 0, 0}, {1, 0, 0}};
    const DubinsPath path = solve_dubins_2d(b);
    CHECK(path.word == "S");
    CHECK(path.length == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("quarter-turn boundary is a single left arc") {
    const BoundaryData b{{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}};
    const DubinsPath path = solve_dubins_2d(b);
    CHECK(path.word == "L");
    CHECK(path.length == doctest::Approx(M_PI_2).epsilon(1e-9));
    CHECK(boundary_defect(path, b) < 1e-9);
}

TEST_CASE("planar solver always satisfies the boundary and curvature bound") {
    for (int i = 0; i < 40; ++i) {
        const BoundaryData b = random_planar_instance();
        const DubinsPath path = solve_dubins_2d(b);
        CHECK(boundary_defect(path, b) < 1e-9);
        CHECK(path.length >= distance(b.p, b.q) - 1e-9);
        CHECK(path.c1_position_defect() <= 1e-9);
        CHECK(path.c1_tangent_defect() <= 1e-9);
        const PolyCurve sampled = path_to_polycurve(path, 400);
        CHECK(discrete_curvature(sampled).max_kappa <= 1.0 + 2e-3);
    }
}

TEST_CASE("solver is within the DP oracle bound on a few instances") {
    verify::DpOracleConfig cfg;
    for (int i = 0; i < 8; ++i) {
        const double d = uniform(5.0, 8.0);
        const double phi = uniform(-0.4, 0.4);
        const verify::DpInstance inst = verify::snap_instance(
            d * std::cos(phi), d * std::sin(phi), uniform(0.0, 2.0 * M_PI), cfg);
        const BoundaryData b{{0, 0, 0},
                             {inst.qx, inst.qy, 0},
                             {1, 0, 0},
                             {std::cos(inst.psi), std::sin(inst.psi), 0}};
        const DubinsPath path = solve_dubins_2d(b);
        const auto dp = verify::dp_shortest_path(inst, cfg);
        REQUIRE(dp.has_value());
        CHECK(path.length <= *dp * 1.02);
        CHECK(path.length >= distance(b.p, b.q) - 1e-9);
    }
}

TEST_CASE("ccc filter") {
    auto arc = [](double angle) {
        DubinsSegment s;
        s.kind = DubinsSegment::Kind::Arc;
        s.center = {0, 1, 0};
        s.normal = {0, 0, 1};
        s.start = {0, 0, 0};
        s.angle = angle;
        s.end = s.point_at(1.0);
        return s;
    };
    DubinsPath lrl;
    lrl.segments = {arc(1.0), arc(1.5 * M_PI), arc(1.0)};
    lrl.word = "LRL";
    CHECK(ccc_filter(lrl));
    DubinsPath rlr;
    rlr.segments = {arc(1.0), arc(0.5 * M_PI), arc(1.0)};
    rlr.word = "RLR";
    CHECK(!ccc_filter(rlr));
    DubinsPath clc;
    DubinsSegment line;
    line.kind = DubinsSegment::Kind::Line;
    line.start = {0, 0, 0};
    line.end = {1, 0, 0};
    clc.segments = {arc(1.0), line, arc(1.0)};
    CHECK_THROWS_AS(ccc_filter(clc), std::invalid_argument);
}

TEST_CASE("solver never returns a short-middle CCC word") {
    for (int i = 0; i < 60; ++i) {
        const BoundaryData b = random_planar_instance();
        for (const auto& cand : enumerate_dubins_2d(b)) {
            if (cand.word[1] == 'S') continue;
            CHECK(cand.p >= M_PI);
            CHECK(cand.p < 2.0 * M_PI);
        }
    }
}

namespace {

double longest_arc(const DubinsPath& path) {
    double worst = 0.0;
    for (const DubinsSegment& s : path.segments)
        if (s.kind == DubinsSegment::Kind::Arc) worst = std::max(worst, s.angle);
    return worst;
}

} // namespace

TEST_CASE("coplanar CLC matches the exact planar solver") {
    for (int i = 0; i < 5; ++i) {
        const double d = uniform(6.6, 9.0);
        const double phi = uniform(-0.4, 0.4);
        const double psi = uniform(-1.3, 1.3);
        const BoundaryData b{{0, 0, 0},
                             {d * std::cos(phi), d * std::sin(phi), 0},
                             {1, 0, 0},
                             {std::cos(psi), std::sin(psi), 0}};
        const DubinsPath flat = solve_dubins_2d(b);
        REQUIRE(longest_arc(flat) < M_PI); // in this regime the planar optimum is 3D-optimal
        const DubinsPath clc = solve_clc_3d(b);
        CHECK(std::fabs(clc.length - flat.length) <= 1e-6);
        CHECK(boundary_defect(clc, b) < 1e-7);
    }
}

TEST_CASE("planar reduction: CLC never beats a short-arc planar optimum") {
    // A planar word containing an arc of pi or more is not a 3D minimizer
    // (tilting the circle planes shortens it), so the comparison is only
    // meaningful when every arc of the 2D optimum stays below pi.
    int checked = 0;
    for (int i = 0; i < 40 && checked < 8; ++i) {
        const BoundaryData b = random_planar_instance();
        const DubinsPath flat = solve_dubins_2d(b);
        if (longest_arc(flat) >= M_PI - 0.05) continue;
        try {
            const double len3d = solve_clc_3d(b).length;
            CHECK(len3d >= flat.length - 1e-6);
            ++checked;
        } catch (const std::runtime_error&) {
            // Legal: short instances may be CCC-only, outside the CLC family.
        }
    }
    CHECK(checked >= 5);
}

TEST_CASE("out-of-plane CLC case") {
    const BoundaryData b{{0, 0, 0}, {0, 0, 5}, {1, 0, 0}, {0, 0, 1}};
    const DubinsPath path = solve_clc_3d(b);
    CHECK(path.length <= M_PI + 5.0 + M_PI);
    CHECK(boundary_defect(path, b) < 1e-7);
    CHECK(path.c1_position_defect() <= 1e-9);
    CHECK(path.c1_tangent_defect() <= 1e-7);
}

TEST_CASE("antipodal tangents at the same point: candidate or clean error") {
    const BoundaryData b{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {-1, 0, 0}};
    try {
        const DubinsPath path = solve_clc_3d(b);
        CHECK(path.c1_position_defect() <= 1e-9);
        CHECK(path.c1_tangent_defect() <= 1e-7);
        CHECK(boundary_defect(path, b) < 1e-7);
    } catch (const std::runtime_error&) {
        // Documented outcome: no CLC candidate.
    }
}

TEST_CASE("reversal symmetry of the planar solver") {
    for (int i = 0; i < 20; ++i) {
        const BoundaryData b = random_planar_instance();
        const BoundaryData rev{b.q, b.p, -b.w, -b.v};
        CHECK(std::fabs(solve_dubins_2d(b).length - solve_dubins_2d(rev).length) <= 1e-9);
    }
}

TEST_CASE("helicoidal equilibrium at zeta = 0 is the unit-torsion helix") {
    const HelicoidalArc arc = integrate_helicoidal(0.0, 1.0, 0.0, 10.0, 2000);
    for (const double t : arc.tau) CHECK(std::fabs(t - 1.0) <= 1e-6);
    const PolyCurve helix = make_helix(1.0, 10.0, 2001);
    // Same start pose by construction of make_helix? No: compare curvature
    // and torsion profiles instead of raw positions.
    const CurvatureProfile prof = discrete_curvature(arc.curve);
    for (std::size_t i = 2; i + 2 < prof.kappa[0].size(); ++i)
        CHECK(prof.kappa[0][i] == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(helix.components[0].length() == doctest::Approx(arc.curve.components[0].length())
                                              .epsilon(1e-5));
}

TEST_CASE("helicoidal rejections and positivity abort") {
    CHECK_THROWS_AS(integrate_helicoidal(0.0, -0.5, 0.0, 5.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(integrate_helicoidal(-1.0, 1.0, 0.0, 5.0, 100), std::invalid_argument);
    // A hard downward slope drives tau through zero: documented abort.
    CHECK_THROWS_AS(integrate_helicoidal(0.0, 0.2, -5.0, 5.0, 400), std::runtime_error);
}

TEST_CASE("helicoidal equilibria found by bisection satisfy the ODE") {
    for (const double zeta : {0.7, 1.9}) {
        const double tau0 = helicoidal_equilibrium_tau(zeta);
        CHECK(std::fabs(2.0 - 2.0 * tau0 * tau0 - zeta * std::sqrt(tau0)) < 1e-12);
        const HelicoidalArc arc = integrate_helicoidal(zeta, tau0, 0.0, 8.0, 1600);
        for (const double t : arc.tau) CHECK(std::fabs(t - tau0) <= 1e-6);
    }
}

TEST_CASE("sampling a path to a polyline") {
    const BoundaryData straight{{0, 0, 0}, {10, 0, 0}, {1, 0, 0}, {1, 0, 0}};
    const PolyCurve line = path_to_polycurve(solve_dubins_2d(straight), 100);
    REQUIRE(line.components[0].size() == 100);
    CHECK(discrete_curvature(line).max_kappa <= 1e-9);

    const BoundaryData quarter{{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}};
    const PolyCurve arc = path_to_polycurve(solve_dubins_2d(quarter), 64);
    const CurvatureProfile prof = discrete_curvature(arc);
    for (std::size_t i = 1; i + 1 < arc.components[0].size(); ++i)
        CHECK(prof.kappa[0][i] == doctest::Approx(1.0).epsilon(1e-3));

    // A genuine CLC shows three curvature regimes.
    const BoundaryData far{{0, 0, 0}, {8, 2, 0}, {1, 0, 0}, {0, 1, 0}};
    const DubinsPath clc = solve_dubins_2d(far);
    REQUIRE(clc.segments.size() == 3);
    const PolyCurve sampled = path_to_polycurve(clc, 600);
    const CurvatureProfile sp = discrete_curvature(sampled);
    const double arc1 = clc.segments[0].length();
    const double mid = clc.segments[1].length();
    const ArclengthView view(sampled.components[0]);
    for (std::size_t i = 4; i + 4 < sampled.components[0].size(); ++i) {
        const double s = view.arclengths()[i];
        if (s > arc1 + 0.2 && s < arc1 + mid - 0.2)
            CHECK(sp.kappa[0][i] <= 2e-3);
        else if (s > 0.2 && s < arc1 - 0.2)
            CHECK(sp.kappa[0][i] == doctest::Approx(1.0).epsilon(2e-3));
    }
    // Endpoints are preserved exactly.
    CHECK(distance(sampled.components[0].points.front(), far.p) < 1e-12);
    CHECK(distance(sampled.components[0].points.back(), far.q) < 1e-9);
}
