#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ropekit/curve.hpp"

namespace ropekit {

// Point-tangent boundary data for the unit-curvature shortest-path problem.
struct BoundaryData {
    Vec3 p, q; // endpoints
    Vec3 v, w; // unit tangents at p and q
};

// Throws unless |v| = |w| = 1 within 1e-12.
void validate(const BoundaryData& b);

struct DubinsSegment {
    enum class Kind { Arc, Line };
    Kind kind = Kind::Line;
    Vec3 start, end;
    // Arc only: unit-radius rotation about `normal` through `angle` > 0,
    // starting at `start` on the circle about `center`.
    Vec3 center, normal;
    double angle = 0.0;

    double length() const;
    Vec3 point_at(double u) const;   // u in [0, 1]
    Vec3 tangent_at(double u) const; // unit
};

// C^1 concatenation of unit-radius arcs and line segments.
struct DubinsPath {
    std::vector<DubinsSegment> segments;
    std::string word; // over {L, R, C, S}; zero-length pieces are dropped
    double length = 0.0;

    Vec3 start_point() const;
    Vec3 start_tangent() const;
    Vec3 end_point() const;
    Vec3 end_tangent() const;
    // Worst position / tangent mismatch across interior joints.
    double c1_position_defect() const;
    double c1_tangent_defect() const;
};

// Orthonormal in-plane basis for coplanar boundary data (ex = v).
struct PlaneBasis {
    Vec3 origin, ex, ey, n;
};
std::optional<PlaneBasis> coplanar_basis(const BoundaryData& b, double tol = 1e-9);

// One feasible word of the planar enumeration; lengths of the three pieces
// are (t, p, q) with arcs measured in radians.
struct Dubins2dCandidate {
    std::string word;
    double t = 0.0, p = 0.0, q = 0.0;
    double total = 0.0;
};

// All feasible words LSL/RSR/LSR/RSL/RLR/LRL for coplanar boundary data,
// with CCC candidates failing the middle-arc filter removed.
std::vector<Dubins2dCandidate> enumerate_dubins_2d(const BoundaryData& b);

// Exact planar solver: shortest feasible word realized as a path.
DubinsPath solve_dubins_2d(const BoundaryData& b);

// Middle-arc admissibility for CCC words: length in [pi, 2pi).
// Rejects paths that are not three arcs.
bool ccc_filter(const DubinsPath& path);

// CLC candidate search in R^3: two unit circles (one angular parameter each)
// joined by a common-tangent segment, optimized by multi-start local descent
// over (phi1, theta1, phi2, theta2). Degenerate pieces (zero-length line or
// arcs) are admitted, so pure S / C / CL / LC solutions are found as well.
struct Clc3dConfig {
    int grid = 16;            // phi grid per endpoint circle
    int theta_grid = 12;      // inner seeding grid for the arc angles
    double residual_tol = 1e-9;
};
DubinsPath solve_clc_3d(const BoundaryData& b);
DubinsPath solve_clc_3d(const BoundaryData& b, const Clc3dConfig& cfg);

// Torsion ODE variants: the printed equation uses 1.5 tau' / tau; the common
// control-literature form squares the slope. Only the printed form is used by
// the toolkit; the switch is reserved.
enum class HelicoidalOdeVariant { AsPrinted, SquaredSlope };

// Unit-curvature arc with positive torsion driven by
// tau'' = 1.5 tau' tau^-1 - 2 tau^3 + 2 tau - zeta tau |tau|^(1/2).
struct HelicoidalArc {
    double zeta = 0.0;
    double tau0 = 1.0;
    double tau0_prime = 0.0;
    double span = 0.0;
    std::vector<double> tau; // n+1 node samples of tau(s)
    PolyCurve curve;         // open polyline of n+1 points
};

HelicoidalArc integrate_helicoidal(double zeta, double tau0, double tau0_prime, double span,
                                   std::size_t n,
                                   HelicoidalOdeVariant variant = HelicoidalOdeVariant::AsPrinted);

// Equilibrium torsion for a given zeta >= 0: the root of
// 2 - 2 tau^2 - zeta sqrt(tau) on (0, 1], found by bisection.
double helicoidal_equilibrium_tau(double zeta);

// Uniform-arclength polyline sampling (n points, open component).
PolyCurve path_to_polycurve(const DubinsPath& path, std::size_t n);
PolyCurve path_to_polycurve(const HelicoidalArc& arc, std::size_t n);

} // namespace ropekit
