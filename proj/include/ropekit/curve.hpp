#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ropekit/vec3.hpp"

namespace ropekit {

// A polygonal curve component. Closed components connect the last vertex back
// to the first; indexing is cyclic in that case.
struct Component {
    std::vector<Vec3> points;
    bool closed = true;

    std::size_t size() const { return points.size(); }
    // Edge i runs from vertex i to vertex i+1 (mod size for closed).
    std::size_t edge_count() const {
        return closed ? points.size() : (points.empty() ? 0 : points.size() - 1);
    }
    double length() const;
    Vec3 centroid() const;
    // Cumulative arclength of vertex i (s[0] = 0), plus total length.
    std::vector<double> vertex_arclengths() const;
};

// Multi-component polygonal curve, the geometry carrier for every module.
struct PolyCurve {
    std::vector<Component> components;

    double total_length() const;
    std::size_t total_points() const;
};

// Throws std::invalid_argument when the curve violates its invariants:
// closed components need >= 8 points, consecutive points must be > 1e-12
// apart, and no two vertices of the whole link may coincide.
void validate(const PolyCurve& curve);

struct CurvatureProfile {
    // Parallel to curve.components: per-vertex curvature and arclength.
    std::vector<std::vector<double>> kappa;
    std::vector<std::vector<double>> arclength;
    double max_kappa = 0.0;
};

struct FrameField {
    // Per component, per vertex. Entries are meaningful only where
    // defined[c][i] is true; curvature below kappa_floor leaves the normal
    // direction (and with it B and tau) undefined rather than fabricated.
    std::vector<std::vector<Vec3>> tangent;
    std::vector<std::vector<Vec3>> normal;
    std::vector<std::vector<Vec3>> binormal;
    std::vector<std::vector<double>> arclength;
    std::vector<std::vector<double>> tau;       // |tau| (>= 0)
    std::vector<std::vector<int>> chirality;    // sign of the signed torsion, 0 if undefined
    std::vector<std::vector<bool>> defined;     // N/B defined at this vertex
    std::vector<std::vector<bool>> tau_defined;
};

// Pose used to seed Frenet integration: a point plus an orthonormal frame.
struct FramePose {
    Vec3 point{0, 0, 0};
    Vec3 t{1, 0, 0};
    Vec3 n{0, 1, 0};
    Vec3 b{0, 0, 1};
};

// Equal-arclength resampling (linear interpolation on edges) to n points per
// component. The result is rescaled about each component centroid so total
// polygonal length is preserved to 1e-9 relative. n < 8 is rejected.
PolyCurve resample_arclength(const PolyCurve& curve, std::size_t n);

// Turning angle at each vertex divided by the mean of the adjacent edge
// lengths. Open components get kappa = 0 at their endpoints.
CurvatureProfile discrete_curvature(const PolyCurve& curve);

// Discrete Frenet apparatus. T from centered differences, N as the normalized
// rejection of the tangent difference from T, B = T x N, and tau >= 0 from the
// centered derivative of B projected on N (sign reported separately).
FrameField frenet_frames(const PolyCurve& curve, double kappa_floor = 1e-8);

// Integrates T' = N, N' = -T + tau B, B' = -tau N (unit curvature) with
// fixed-step RK4 over n steps, returning an open polyline of n+1 points.
// tau_of_s is evaluated at step midpoints as well; non-finite values abort.
PolyCurve frenet_integrate(const std::function<double(double)>& tau_of_s,
                           double length, std::size_t n,
                           const FramePose& start = FramePose{});

// ((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt) at n equal
// parameter steps. Requires gcd(p, q) = 1, R > r > 0, n >= 64.
PolyCurve make_torus_knot(int p, int q, double R, double r, std::size_t n);

// Piecewise-linear evaluation of one component by arclength. Vertex tangents
// are centered differences; within an edge they are interpolated and
// renormalized. Arclength wraps modulo the total length on closed components
// and is clamped on open ones.
class ArclengthView {
  public:
    explicit ArclengthView(const Component& c);

    double length() const { return total_; }
    double mean_edge() const { return total_ / static_cast<double>(comp_->edge_count()); }
    bool closed() const { return comp_->closed; }
    std::size_t size() const { return comp_->size(); }
    const std::vector<double>& arclengths() const { return s_; }
    const std::vector<Vec3>& vertex_tangents() const { return tangent_; }

    Vec3 point_at(double s) const;
    Vec3 tangent_at(double s) const;
    // Cyclic (or plain, for open components) separation of two arclengths.
    double separation(double a, double b) const;

  private:
    double wrap(double s) const;
    const Component* comp_;
    std::vector<double> s_;
    std::vector<Vec3> tangent_;
    double total_;
};

// Test-curve generators used across the toolkit and the CLI.
PolyCurve make_circle(double radius, std::size_t n);
PolyCurve make_ellipse(double a, double b, std::size_t n);
// Two semicircles of the given radius joined by two straight segments.
PolyCurve make_stadium(double radius, double straight, std::size_t n);
// Arclength-sampled helix with unit curvature and constant torsion tau.
PolyCurve make_helix(double tau, double span, std::size_t n);

} // namespace ropekit
