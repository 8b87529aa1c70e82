#include <cmath>

#include <stdexcept>

#include <doctest.h>

#include "ropekit/curve.hpp"

using namespace ropekit;

namespace {

double max_abs_z(const PolyCurve& c) {
    double worst = 0.0;
    for (const Component& comp : c.components)
        for (const Vec3& p : comp.points) worst = std::max(worst, std::fabs(p.z));
    return worst;
}

} // namespace

TEST_CASE("resample is the identity on an equally spaced polygon") {
    const PolyCurve circle = make_circle(1.0, 100);
    const PolyCurve out = resample_arclength(circle, 100);
    REQUIRE(out.components[0].size() == 100);
    for (std::size_t i = 0; i < 100; ++i)
        CHECK(distance(out.components[0].points[i], circle.components[0].points[i]) < 1e-12);
}

TEST_CASE("resample interpolation error on the unit circle") {
    const PolyCurve circle = make_circle(1.0, 100);
    const PolyCurve out = resample_arclength(circle, 200);
    REQUIRE(out.components[0].size() == 200);
    for (const Vec3& p : out.components[0].points) CHECK(std::fabs(p.norm() - 1.0) <= 1.5e-3);
}

TEST_CASE("resample preserves total length") {
    for (const auto& curve :
         {make_circle(1.0, 100), make_ellipse(2.0, 1.0, 128), make_stadium(1.0, 2.0, 96)}) {
        const double before = curve.total_length();
        for (const std::size_t n : {64u, 100u, 333u}) {
            const double after = resample_arclength(curve, n).total_length();
            CHECK(std::fabs(after - before) / before <= 1e-9);
        }
    }
}

TEST_CASE("resample rejects bad inputs") {
    PolyCurve square;
    square.components.push_back(
        {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, true});
    CHECK_THROWS_AS(resample_arclength(square, 100), std::invalid_argument);
    CHECK_THROWS_AS(resample_arclength(make_circle(1.0, 64), 7), std::invalid_argument);
}

TEST_CASE("discrete curvature of a regular N-gon matches the closed form") {
    const std::size_t n = 100;
    const PolyCurve circle = make_circle(1.0, n);
    const CurvatureProfile prof = discrete_curvature(circle);
    const double expected = (2.0 * M_PI / n) / (2.0 * std::sin(M_PI / n));
    for (const double k : prof.kappa[0]) CHECK(k == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.00016).epsilon(1e-4));
}

TEST_CASE("collinear vertices have zero curvature") {
    PolyCurve line;
    line.components.push_back({{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 1, 0}}, false});
    const CurvatureProfile prof = discrete_curvature(line);
    CHECK(prof.kappa[0][1] == 0.0);
}

TEST_CASE("discrete curvature rejects zero-length edges") {
    PolyCurve bad;
    bad.components.push_back({{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}}, false});
    CHECK_THROWS_AS(discrete_curvature(bad), std::invalid_argument);
}

TEST_CASE("ellipse curvature maximum") {
    const PolyCurve ell = make_ellipse(2.0, 1.0, 2000);
    const CurvatureProfile prof = discrete_curvature(ell);
    CHECK(prof.max_kappa == doctest::Approx(2.0).epsilon(1e-2 / 2.0));
    // Attained nearest (+-2, 0).
    std::size_t arg = 0;
    for (std::size_t i = 0; i < prof.kappa[0].size(); ++i)
        if (prof.kappa[0][i] > prof.kappa[0][arg]) arg = i;
    const Vec3 p = ell.components[0].points[arg];
    CHECK(std::min(distance(p, {2, 0, 0}), distance(p, {-2, 0, 0})) < 0.05);
}

TEST_CASE("N-gon curvature error decays quadratically") {
    auto err = [](std::size_t n) {
        const double rho = 2.0;
        const CurvatureProfile prof = discrete_curvature(make_circle(rho, n));
        return std::fabs(prof.max_kappa - 1.0 / rho);
    };
    const double ratio = err(64) / err(128);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("frames on the unit circle") {
    const std::size_t n = 200;
    const PolyCurve circle = make_circle(1.0, n);
    const FrameField f = frenet_frames(circle);
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(f.defined[0][i]);
        const Vec3 to_center = (Vec3{0, 0, 0} - circle.components[0].points[i]).normalized();
        CHECK(angle_between(f.normal[0][i], to_center) < 1e-2);
        if (f.tau_defined[0][i]) CHECK(std::fabs(f.tau[0][i]) < 1e-2);
    }
}

TEST_CASE("frame orthonormality residuals") {
    for (const auto& curve : {make_circle(1.0, 128), make_helix(0.7, 8.0, 512)}) {
        const FrameField f = frenet_frames(curve);
        for (std::size_t ci = 0; ci < curve.components.size(); ++ci)
            for (std::size_t i = 0; i < curve.components[ci].size(); ++i) {
                if (!f.defined[ci][i]) continue;
                CHECK(std::fabs(f.tangent[ci][i].norm() - 1.0) <= 1e-9);
                CHECK(std::fabs(f.normal[ci][i].norm() - 1.0) <= 1e-9);
                CHECK(std::fabs(f.binormal[ci][i].norm() - 1.0) <= 1e-9);
                CHECK(std::fabs(dot(f.tangent[ci][i], f.normal[ci][i])) <= 1e-9);
                CHECK(std::fabs(dot(f.tangent[ci][i], f.binormal[ci][i])) <= 1e-9);
                CHECK(std::fabs(dot(f.normal[ci][i], f.binormal[ci][i])) <= 1e-9);
                const Vec3 b = cross(f.tangent[ci][i], f.normal[ci][i]);
                CHECK(distance(b, f.binormal[ci][i]) <= 1e-9);
            }
    }
}

TEST_CASE("helix curvature and torsion estimates") {
    // kappa = a/(a^2+b^2) = 1, tau = b/(a^2+b^2) = 1 for a = b = 1/2.
    const PolyCurve helix = make_helix(1.0, 10.0, 2000);
    const CurvatureProfile prof = discrete_curvature(helix);
    const FrameField f = frenet_frames(helix);
    const std::size_t n = helix.components[0].size();
    for (std::size_t i = 4; i + 4 < n; ++i) {
        CHECK(prof.kappa[0][i] == doctest::Approx(1.0).epsilon(1e-2));
        REQUIRE(f.tau_defined[0][i]);
        CHECK(f.tau[0][i] == doctest::Approx(1.0).epsilon(5e-2));
        CHECK(f.chirality[0][i] == 1);
    }
}

TEST_CASE("stadium frames undefined on straights, defined on arcs") {
    const PolyCurve stadium = make_stadium(1.0, 2.0, 256);
    const FrameField f = frenet_frames(stadium);
    const CurvatureProfile prof = discrete_curvature(stadium);
    std::size_t undefined_straight = 0, defined_arc = 0;
    for (std::size_t i = 0; i < 256; ++i) {
        if (prof.kappa[0][i] < 1e-8) {
            CHECK(!f.defined[0][i]);
            ++undefined_straight;
        } else if (prof.kappa[0][i] > 0.5) {
            CHECK(f.defined[0][i]);
            ++defined_arc;
        }
    }
    CHECK(undefined_straight > 40);
    CHECK(defined_arc > 80);
}

TEST_CASE("frenet integration closes the unit circle") {
    const PolyCurve curve = frenet_integrate([](double) { return 0.0; }, 2.0 * M_PI, 2000);
    const Component& c = curve.components[0];
    REQUIRE(c.size() == 2001);
    CHECK(distance(c.points.front(), c.points.back()) < 1e-6);
    CHECK(max_abs_z(curve) < 1e-6); // stays in the initial osculating plane
}

TEST_CASE("frenet integration reproduces the closed-form helix") {
    const std::size_t n = 2000;
    const PolyCurve curve = frenet_integrate([](double) { return 1.0; }, 10.0, n);
    const double a = 0.5, b = 0.5;
    const double speed = std::sqrt(a * a + b * b);
    const Vec3 t0 = Vec3{0, a, b} / std::sqrt(a * a + b * b);
    const Vec3 n0{-1, 0, 0};
    const Vec3 b0 = cross(t0, n0);
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = 10.0 * static_cast<double>(k) / n;
        const double t = s / speed;
        const Vec3 x{a * std::cos(t) - a, a * std::sin(t), b * t};
        const Vec3 mapped{dot(x, t0), dot(x, n0), dot(x, b0)};
        CHECK(distance(mapped, curve.components[0].points[k]) < 1e-5);
    }
}

TEST_CASE("frenet integration rejects bad arguments") {
    CHECK_THROWS_AS(frenet_integrate([](double) { return 0.0; }, 1.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        frenet_integrate([](double s) { return s > 0.5 ? std::nan("") : 1.0; }, 1.0, 100),
        std::runtime_error);
}

TEST_CASE("torus knot generator contract") {
    const PolyCurve k = make_torus_knot(2, 3, 2.0, 1.0, 256);
    REQUIRE(k.components.size() == 1);
    CHECK(k.components[0].closed);
    CHECK(k.components[0].size() == 256);
    CHECK_NOTHROW(validate(k));

    // gcd(1, 0) = 1: a degenerate torus knot is a planar circle.
    const PolyCurve unknot = make_torus_knot(1, 0, 2.0, 1.0, 64);
    CHECK(max_abs_z(unknot) < 1e-12);
    for (const Vec3& p : unknot.components[0].points)
        CHECK(p.norm() == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_torus_knot(2, 4, 2.0, 1.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(make_torus_knot(2, 3, 1.0, 2.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(make_torus_knot(2, 3, 2.0, 1.0, 32), std::invalid_argument);
}

TEST_CASE("curve validation catches degenerate links") {
    PolyCurve tiny;
    tiny.components.push_back({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, true});
    CHECK_THROWS_AS(validate(tiny), std::invalid_argument);

    PolyCurve touching = make_circle(1.0, 16);
    Component other = touching.components[0];
    for (Vec3& p : other.points) p.z += 0.0; // exact copy: coincident vertices
    touching.components.push_back(other);
    CHECK_THROWS_AS(validate(touching), std::invalid_argument);
}
