#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ropekit/curve.hpp"
#include "ropekit/dubins.hpp"
#include "ropekit/thickness.hpp"

// Verification-only machinery: independent oracles and the acceptance suite.
// Nothing here is used by the production computation paths.

namespace ropekit::verify {

// Dynamic-programming oracle for planar unit-curvature shortest paths on an
// (x, y, heading) lattice. States advance by exact straight steps or exact
// +-one-heading-cell arcs, so every produced path is admissible; the best
// path into the goal cell (exact goal heading index) gives an upper bound on
// the optimum that is tight to a few percent at these grid settings.
struct DpOracleConfig {
    double cell = 0.12;
    int headings = 48;
    double margin = 2.5; // box padding around the endpoints
};

struct DpInstance {
    double qx = 0.0, qy = 0.0; // goal position (start is the origin, heading 0)
    double psi = 0.0;          // goal heading
};

// Snaps the goal of a random instance onto the lattice so the oracle's goal
// test is exact in heading and centered in position.
DpInstance snap_instance(double qx, double qy, double psi, const DpOracleConfig& cfg);

// Best admissible lattice path length, or nullopt when the goal is
// unreachable at this resolution.
std::optional<double> dp_shortest_path(const DpInstance& inst, const DpOracleConfig& cfg);

// Exhaustive double-loop critical-pair oracle: refines every admissible
// vertex pair with the same refinement and thresholds as the production
// scan, with no criticality pre-filter.
std::vector<DoubleCriticalPair> exhaustive_critical_pairs(const PolyCurve& curve, double tol);

// Smooth random closed Fourier loop (3 modes per coordinate), resampled to n
// points; regenerates internally until the loop is embedded at this
// resolution.
PolyCurve random_fourier_loop(std::uint64_t seed, std::size_t n);

// Random smooth normal field along the curve (3 Fourier modes), projected
// onto the normal planes of the vertex tangents.
std::vector<std::vector<Vec3>> random_normal_field(const PolyCurve& curve, std::uint64_t seed);

// Central finite difference (step h) of the discrete curvature at every
// vertex of gamma + eps V; rescale = true divides lengths back out the way
// the rescaled family Gamma_eps does.
std::vector<std::vector<double>> fd_curvature_derivative(const PolyCurve& curve,
                                                         const std::vector<std::vector<Vec3>>& V,
                                                         double h, bool rescale);

// Runs the acceptance criteria, printing one PASS/FAIL line per criterion.
// Returns true when every criterion passed.
bool run_acceptance(std::ostream& os);

} // namespace ropekit::verify
