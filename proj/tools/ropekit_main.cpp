// ropekit: curvature-constrained curve geometry toolkit.
//
// Commands: gen, thickness, tighten, dubins, verify. All structured output
// is JSON; per-sample series are CSV. Exit codes: 0 success, 2 malformed
// input, 3 computation error, 4 tighten budget exhausted, 5 half-DCSD check
// failed.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ropekit/io.hpp"
#include "ropekit/verify.hpp"

using namespace ropekit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitComputation = 3;
constexpr int kExitBudget = 4;
constexpr int kExitVerdictFail = 5;

PolyCurve load_curve(const std::string& path) {
    return curve_from_json(read_file(path));
}

int cmd_gen(const std::string& kind, std::size_t n, double a, double b, double R, double r,
            int p, int q, double tau, double span, const std::string& out) {
    PolyCurve curve;
    if (kind == "circle")
        curve = make_circle(r, n);
    else if (kind == "ellipse")
        curve = make_ellipse(a, b, n);
    else if (kind == "stadium")
        curve = make_stadium(r, a, n);
    else if (kind == "torus-knot")
        curve = make_torus_knot(p, q, R, r, n);
    else if (kind == "helix")
        curve = make_helix(tau, span, n);
    else
        throw std::invalid_argument("unknown generator: " + kind);
    atomic_write_file(out, curve_to_json(curve));
    return kExitOk;
}

int cmd_thickness(const std::string& input, double tol, bool oracle, std::size_t resample_n,
                  std::size_t oracle_cap, const std::string& out, const std::string& pairs_out) {
    PolyCurve curve = load_curve(input);
    if (resample_n > 0) curve = resample_arclength(curve, resample_n);
    ThicknessReport rep = thickness(curve, tol);
    if (oracle) {
        rep.ball_radius = ball_radius(curve);
        rep.global_radius_min = global_radius_oracle(curve, oracle_cap);
        const FocalResult f = geometric_focal_min(curve);
        rep.focal_min = f.value;
        rep.focal_capped = f.capped;
    }
    const std::string json = thickness_report_to_json(rep);
    if (out.empty())
        std::cout << json << "\n";
    else
        atomic_write_file(out, json);
    if (!pairs_out.empty()) atomic_write_file(pairs_out, pairs_to_csv(rep.minimal_pairs));
    return kExitOk;
}

int cmd_tighten(const std::string& input, int iters, std::uint64_t seed, double tol,
                std::size_t resample_n, const std::string& out, const std::string& trace_out,
                double verdict_tol) {
    PolyCurve curve = load_curve(input);
    if (resample_n > 0) curve = resample_arclength(curve, resample_n);
    TightenConfig cfg;
    cfg.max_iters = iters;
    cfg.seed = seed;
    if (tol > 0) cfg.tol = tol;
    auto [tight, trace] = tighten(curve, cfg);
    if (!out.empty()) atomic_write_file(out, curve_to_json(tight));
    if (!trace_out.empty()) atomic_write_file(trace_out, trace_to_csv(trace));
    if (trace.budget_exhausted) {
        std::cerr << "tighten: iteration budget exhausted before convergence\n";
        return kExitBudget;
    }
    const HalfDcsdReport rep = verify_half_dcsd(tight, verdict_tol);
    std::cout << "half-dcsd: delta=" << rep.delta << " nir=" << rep.nir << " dcsd=" << rep.dcsd
              << " verdict=" << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitVerdictFail;
}

int cmd_dubins(const std::string& input, bool helical, double zeta, double tau0,
               double tau0_prime, double span, std::size_t n, const std::string& out,
               const std::string& sample_out) {
    if (helical) {
        const HelicoidalArc arc = integrate_helicoidal(zeta, tau0, tau0_prime, span, n);
        const std::string json = curve_to_json(arc.curve);
        if (out.empty())
            std::cout << json << "\n";
        else
            atomic_write_file(out, json);
        return kExitOk;
    }
    const BoundaryData b = boundary_from_json(read_file(input));
    DubinsPath path;
    if (coplanar_basis(b))
        path = solve_dubins_2d(b);
    else
        path = solve_clc_3d(b);
    const std::string json = dubins_path_to_json(path);
    if (out.empty())
        std::cout << json << "\n";
    else
        atomic_write_file(out, json);
    if (!sample_out.empty())
        atomic_write_file(sample_out, curve_to_json(path_to_polycurve(path, n)));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature-constrained curve geometry toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a standard test curve");
    std::string gen_kind;
    std::size_t gen_n = 256;
    double gen_a = 2.0, gen_b = 1.0, gen_R = 2.0, gen_r = 1.0, gen_tau = 1.0, gen_span = 10.0;
    int gen_p = 2, gen_q = 3;
    std::string gen_out = "curve.json";
    gen->add_option("kind", gen_kind, "circle | ellipse | stadium | torus-knot | helix")
        ->required();
    gen->add_option("--n", gen_n, "points per component");
    gen->add_option("--a", gen_a, "ellipse semi-axis a / stadium straight length");
    gen->add_option("--b", gen_b, "ellipse semi-axis b");
    gen->add_option("--R", gen_R, "torus major radius");
    gen->add_option("--r", gen_r, "circle/stadium/torus minor radius");
    gen->add_option("--p", gen_p, "torus knot p");
    gen->add_option("--q", gen_q, "torus knot q");
    gen->add_option("--tau", gen_tau, "helix torsion");
    gen->add_option("--span", gen_span, "helix arclength span");
    gen->add_option("--out", gen_out, "output curve JSON");

    // thickness
    auto* thick = app.add_subcommand("thickness", "thickness / DCSD / ropelength report");
    std::string thick_in, thick_out, thick_pairs;
    double thick_tol = 1e-6;
    bool thick_oracle = false;
    std::size_t thick_n = 0, thick_cap = 1024;
    thick->add_option("input", thick_in, "curve JSON")->required();
    thick->add_option("--tol", thick_tol, "pair residual tolerance");
    thick->add_flag("--oracle", thick_oracle, "include R_O, rho_G and F_g oracles");
    thick->add_option("--n", thick_n, "resample to n points first");
    thick->add_option("--oracle-cap", thick_cap, "point cap for the O(N^3) oracle");
    thick->add_option("--out", thick_out, "report JSON (stdout when omitted)");
    thick->add_option("--pairs", thick_pairs, "minimal pairs CSV");

    // tighten
    auto* tight = app.add_subcommand("tighten", "ropelength descent + half-DCSD check");
    std::string tight_in, tight_out = "tightened.json", tight_trace;
    int tight_iters = 1500;
    std::uint64_t tight_seed = 1;
    double tight_tol = 0.0, tight_verdict = 0.05;
    std::size_t tight_n = 0;
    tight->add_option("input", tight_in, "curve JSON")->required();
    tight->add_option("--iters", tight_iters, "iteration budget");
    tight->add_option("--seed", tight_seed, "plateau-kick seed");
    tight->add_option("--tol", tight_tol, "convergence tolerance");
    tight->add_option("--n", tight_n, "resample to n points first");
    tight->add_option("--out", tight_out, "final curve JSON");
    tight->add_option("--trace", tight_trace, "trace CSV");
    tight->add_option("--verdict-tol", tight_verdict, "NIR = DCSD/2 relative tolerance");

    // dubins
    auto* dub = app.add_subcommand("dubins", "curvature-constrained shortest path");
    std::string dub_in, dub_out;
    bool dub_helical = false;
    double dub_zeta = 0.0, dub_tau0 = 1.0, dub_tau0p = 0.0, dub_span = 10.0;
    std::size_t dub_n = 2000;
    dub->add_option("--boundary", dub_in, "boundary JSON {p,q,v,w}");
    dub->add_flag("--helical", dub_helical, "integrate a helicoidal arc instead");
    dub->add_option("--zeta", dub_zeta, "helicoidal zeta (>= 0)");
    dub->add_option("--tau0", dub_tau0, "initial torsion (> 0)");
    dub->add_option("--tau0p", dub_tau0p, "initial torsion slope");
    dub->add_option("--span", dub_span, "arclength span");
    dub->add_option("--n", dub_n, "integration steps / samples");
    dub->add_option("--out", dub_out, "output JSON (stdout when omitted)");
    std::string dub_sample;
    dub->add_option("--sample-out", dub_sample, "also write the sampled path as curve JSON");

    // verify
    auto* ver = app.add_subcommand("verify", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_n, gen_a, gen_b, gen_R, gen_r, gen_p, gen_q, gen_tau,
                           gen_span, gen_out);
        if (thick->parsed())
            return cmd_thickness(thick_in, thick_tol, thick_oracle, thick_n, thick_cap,
                                 thick_out, thick_pairs);
        if (tight->parsed())
            return cmd_tighten(tight_in, tight_iters, tight_seed, tight_tol, tight_n, tight_out,
                               tight_trace, tight_verdict);
        if (dub->parsed())
            return cmd_dubins(dub_in, dub_helical, dub_zeta, dub_tau0, dub_tau0p, dub_span,
                              dub_n, dub_out, dub_sample);
        if (ver->parsed()) return verify::run_acceptance(std::cout) ? kExitOk : kExitComputation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitOk;
}
