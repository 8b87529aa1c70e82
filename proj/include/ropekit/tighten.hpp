#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ropekit/curve.hpp"
#include "ropekit/thickness.hpp"

namespace ropekit {

// Normal vector field along a curve, one 3-vector per vertex.
struct VariationField {
    std::vector<std::vector<Vec3>> v;
};

struct VariationValues {
    std::vector<std::vector<double>> value;
    // Derivatives need both neighbors; endpoints of open components are
    // left undefined rather than extrapolated.
    std::vector<std::vector<bool>> defined;
};

// First variation of curvature under gamma_eps = gamma + eps V on a curve
// with unit curvature and (near) arclength parametrization:
//   gamma'' . V'' - 2 gamma' . V'
// evaluated with centered differences. Preconditions: edge lengths uniform
// within 2%, discrete kappa within 5e-2 of 1 at defined vertices, V normal
// to the curve within 1e-9.
VariationValues curvature_variation_a(const PolyCurve& curve, const VariationField& V);

// Variation of the length-rescaled family Gamma_eps = (L / len(gamma_eps))
// gamma_eps: part (a) plus the mean of gamma' . V' over the curve. Closed
// components integrate over the loop. Open components use their interior
// span, which is what the helix fixtures require (a curve with constant
// positive torsion cannot close); callers needing the strict closed-loop
// reading should pass closed curves.
VariationValues curvature_variation_b(const PolyCurve& curve, const VariationField& V);

struct NormalPushReport {
    double eps = 0.0;
    double length = 0.0;           // L of the input (trimmed for open inputs)
    double length_rescaled = 0.0;  // equals L up to roundoff
    double max_kappa_input = 0.0;
    double max_kappa_rescaled = 0.0;
    std::optional<double> dcsd_rescaled; // absent when no pair exists
    bool max_kappa_below_one = false;    // max kappa(Gamma_eps) < 1
    double closure_defect = 0.0;         // start-to-end gap for open inputs
    PolyCurve pushed;                    // Gamma_eps
};

// Builds gamma_eps = gamma + eps N and Gamma_eps = (L/len(gamma_eps))
// gamma_eps explicitly. Requires defined normals (open components are
// trimmed to their interior). eps = 0 reproduces the input exactly.
NormalPushReport normal_push_experiment(const PolyCurve& curve, double eps);

struct TightenConfig {
    int max_iters = 1500;
    double step0 = 0.02;        // initial centroid-shrink fraction
    double shrink = 0.5;        // step multiplier on rejection
    double grow = 1.3;          // step multiplier on acceptance (capped at step0)
    double lambda_cap = 1.0;    // curvature cap
    double margin = 0.02;       // overlap projection slack
    double tol = 1e-6;          // relative ropelength improvement per window
    int window = 50;
    std::uint64_t seed = 1;
    int reestimate_every = 1;   // target thickness refresh period
    int max_proj_sweeps = 30;
    double smooth_weight = 0.25;
    int smooth_passes = 6;
    double pair_tol = 1e-5;     // residual tolerance for scans inside the loop
    bool normalize_scale = true; // pre-scale input so max kappa == lambda_cap
};

struct TightenTraceRow {
    int iter = 0;
    double length = 0.0;
    double nir = 0.0;
    double dcsd = 0.0; // +inf when no pair exists
    double max_kappa = 0.0;
    double ropelength = 0.0;
    bool accepted = false;
};

struct TightenTrace {
    std::vector<TightenTraceRow> rows;
    bool converged = false;
    bool budget_exhausted = false;
};

// One shrink-smooth-project step at config defaults (step0, target thickness
// from the current state). Returns the new curve and whether it was accepted.
std::pair<PolyCurve, bool> tighten_step(const PolyCurve& curve, const TightenConfig& cfg);

// Iterates steps with adaptive step size until the ropelength improvement
// over `window` iterations drops below tol, or the budget runs out (the trace
// is then flagged and the best state so far returned).
std::pair<PolyCurve, TightenTrace> tighten(const PolyCurve& curve, const TightenConfig& cfg);

struct HalfDcsdReport {
    enum class Branch { Focal, Dcsd, Both };
    double nir = 0.0;
    double dcsd = 0.0;
    double f_k = 0.0;
    double delta = 0.0; // |2 NIR - DCSD| / DCSD
    bool pass = false;
    Branch active = Branch::Both;
    double imx_fraction = 0.0;               // share of vertices with kappa ~ 1/NIR
    double max_kappa_nir_deviation = 0.0;    // max |kappa NIR - 1| over that set
    bool constant_curvature_alternative = false; // nearly all vertices in I_mx
};

// Checks the minimizer identity NIR = DCSD/2 to the given relative
// tolerance and reports which branch of min{F_k, DCSD/2} is active.
HalfDcsdReport verify_half_dcsd(const PolyCurve& curve, double tol_rel);

struct SubarcWindow {
    int comp = 0;
    double s0 = 0.0;
    double window_len = 0.0;
    double subarc_len = 0.0;
    std::optional<double> clc_len; // absent when the CLC solver found nothing
    double excess = 0.0;           // subarc_len - clc_len
    bool skipped = false;
};

struct SubarcReport {
    std::vector<SubarcWindow> windows;
    double max_excess = 0.0;
    double pass_fraction = 0.0; // windows with excess <= 0.01 * window length
    bool pass = false;          // pass_fraction >= 0.95
};

// Compares small subarcs against the best CLC candidate with the same
// boundary data (rescaled so the curvature bound is 1). Observational: where
// the subarc is itself a shortest curve the excess should vanish.
SubarcReport subarc_dubins_check(const PolyCurve& curve, double window_frac = 0.05,
                                 int windows_per_component = 16);

} // namespace ropekit
