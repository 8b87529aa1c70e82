#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ropekit/curve.hpp"

namespace ropekit {

// A pair of curve points whose chord is perpendicular to the tangent at both
// ends. (s, t) are refined arclength parameters; r1, r2 the dimensionless
// perpendicularity residuals (p-q).T(s)/|p-q| and (p-q).T(t)/|p-q|.
struct DoubleCriticalPair {
    int comp_i = 0;
    int comp_j = 0;
    double s = 0.0;
    double t = 0.0;
    Vec3 p, q;
    double dist = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

struct PairScanConfig {
    double tol = 1e-6;               // residual acceptance threshold
    double feature_floor_edges = 3.0; // same-component exclusion floor, in edge lengths
};

// Refinement shared by the production scan and the exhaustive test oracle:
// Levenberg-Marquardt on the two perpendicularity residuals, seeded at the
// vertex pair (ci, i) x (cj, j). Returns nullopt when the iteration fails to
// reach the residual threshold or wanders more than ~2.5 edge lengths.
std::optional<DoubleCriticalPair> refine_critical_pair(
    const std::vector<ArclengthView>& views, int ci, std::size_t i, int cj, std::size_t j,
    const PairScanConfig& cfg);

// Post-refinement floor check + canonical ordering + proximity deduplication,
// identical for both scan flavors. Mutates and returns the list.
std::vector<DoubleCriticalPair> dedupe_critical_pairs(std::vector<DoubleCriticalPair> pairs,
                                                      const std::vector<ArclengthView>& views,
                                                      const PairScanConfig& cfg);

// Scans vertex pairs outside the feature floor, seeding from every 2x2
// lattice cell over which both perpendicularity residuals change sign
// (critical points of any type: minima, maxima, saddles), then refines and
// dedupes.
std::vector<DoubleCriticalPair> find_double_critical_pairs(const PolyCurve& curve,
                                                           double tol = 1e-6);
std::vector<DoubleCriticalPair> find_double_critical_pairs(const PolyCurve& curve,
                                                           const PairScanConfig& cfg);

struct DcsdResult {
    double value = 0.0;
    std::vector<DoubleCriticalPair> minimal; // argmin pairs
};

// Minimum distance over all double critical pairs. Throws when the scan finds
// no pair at this resolution.
DcsdResult dcsd(const PolyCurve& curve, double tol = 1e-6);

struct ThicknessReport {
    double f_k = 0.0;        // 1 / sup kappa (infinity when the curve is straight)
    double dcsd = 0.0;
    double nir = 0.0;        // min(f_k, dcsd / 2)
    double length = 0.0;
    double ropelength = 0.0; // length / nir
    double pair_tol = 1e-6;  // residual tolerance the pair scan ran with
    std::vector<DoubleCriticalPair> minimal_pairs;
    // Filled by the verification oracles on request.
    std::optional<double> ball_radius;
    std::optional<double> global_radius_min;
    std::optional<double> focal_min;
    bool focal_capped = false;
};

ThicknessReport thickness(const PolyCurve& curve, double tol = 1e-6);

// True iff no curve vertex lies inside any open tangent ball of radius r:
// with d = q - p and dperp = d - (d.v)v, the point q is inside O_p(v, r)
// exactly when |d|^2 < 2 r |dperp|.
bool ball_radius_free(const PolyCurve& curve, double r);

// Bisects [lo, hi] for the ball radius to 1e-4 relative. The bracket must
// satisfy free(lo) and !free(hi); hi < lo is rejected.
double bisect_ball_radius(const PolyCurve& curve, double lo, double hi,
                          double rel_tol = 1e-4);
// Convenience wrapper bracketing with [0, link diameter].
double ball_radius(const PolyCurve& curve, double rel_tol = 1e-4);

// Minimum circumradius over all non-collinear vertex triples, O(N^3).
// Inputs above the cap are rejected; an all-collinear link is an error.
double global_radius_oracle(const PolyCurve& curve, std::size_t point_cap = 1024);

struct FocalResult {
    double value = 0.0;
    bool capped = false; // window never meets the tangent ball; value == max_radius
};

// Pointwise geometric focal distance at one vertex, restricted to a local
// arclength window of the same component (default +/- 10% of its length).
FocalResult geometric_focal_oracle(const PolyCurve& curve, int comp, std::size_t vertex,
                                   double window_frac = 0.1, double max_radius = 0.0,
                                   double rel_tol = 1e-4);
// Minimum over all vertices.
FocalResult geometric_focal_min(const PolyCurve& curve, double window_frac = 0.1,
                                double max_radius = 0.0, double rel_tol = 1e-4);

struct RegimePartition {
    enum class Band : std::uint8_t { Unclassified, Zero, Between, Max };
    std::vector<std::vector<Band>> band;     // I_z / I_b / I_mx membership per vertex
    std::vector<std::vector<bool>> critical; // I_c membership per vertex
    double kappa_tol = 0.0;
    double dist_tol = 0.0;

    std::size_t count(Band b) const;
    std::size_t count_critical() const;
};

// Sorts vertices into I_z (kappa ~ 0), I_mx (kappa ~ 1/NIR), I_b (strictly
// between) and I_c (participates in a pair within dist_tol of DCSD).
RegimePartition classify_regimes(const PolyCurve& curve, const ThicknessReport& report,
                                 double kappa_tol, double dist_tol);

} // namespace ropekit
