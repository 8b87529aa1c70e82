#include "ropekit/tighten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ropekit/dubins.hpp"

namespace ropekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_variation_input(const PolyCurve& curve, const VariationField& V) {
    if (V.v.size() != curve.components.size())
        throw std::invalid_argument("variation: field/component count mismatch");
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci)
        if (V.v[ci].size() != curve.components[ci].size())
            throw std::invalid_argument("variation: field/vertex count mismatch");
}

struct ComponentStencil {
    double h = 0.0;          // uniform spacing
    std::size_t first = 0;   // first vertex with both neighbors
    std::size_t last = 0;    // one past the last such vertex
};

ComponentStencil stencil_for(const Component& c, const std::vector<double>& kappa) {
    const std::size_t n = c.size();
    if (n < 5) throw std::invalid_argument("variation: component too short");
    double hmin = kInf, hmax = 0.0;
    const std::size_t edges = c.edge_count();
    for (std::size_t i = 0; i < edges; ++i) {
        const double e = distance(c.points[i], c.points[(i + 1) % n]);
        hmin = std::min(hmin, e);
        hmax = std::max(hmax, e);
    }
    if (hmax > hmin * 1.02)
        throw std::invalid_argument("variation: curve is not arclength parametrized");
    ComponentStencil st;
    st.h = 0.5 * (hmin + hmax);
    st.first = c.closed ? 0 : 1;
    st.last = c.closed ? n : n - 1;
    for (std::size_t i = st.first; i < st.last; ++i)
        if (std::fabs(kappa[i] - 1.0) > 5e-2)
            throw std::invalid_argument("variation: discrete curvature deviates from 1 "
                                        "beyond 5e-2 (unit-curvature hypothesis violated)");
    return st;
}

void check_normal(const Component& c, const std::vector<Vec3>& tangents,
                  const std::vector<Vec3>& field) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double vn = field[i].norm();
        if (std::fabs(dot(field[i], tangents[i])) > 1e-9 * std::max(1.0, vn))
            throw std::invalid_argument("variation: field is not normal to the curve");
    }
}

} // namespace

VariationValues curvature_variation_a(const PolyCurve& curve, const VariationField& V) {
    validate(curve);
    check_variation_input(curve, V);
    const CurvatureProfile prof = discrete_curvature(curve);
    VariationValues out;
    out.value.resize(curve.components.size());
    out.defined.resize(curve.components.size());
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const Component& c = curve.components[ci];
        const std::size_t n = c.size();
        const ComponentStencil st = stencil_for(c, prof.kappa[ci]);
        const ArclengthView view(c);
        check_normal(c, view.vertex_tangents(), V.v[ci]);
        out.value[ci].assign(n, 0.0);
        out.defined[ci].assign(n, false);
        const double h = st.h;
        for (std::size_t i = st.first; i < st.last; ++i) {
            const std::size_t ip = (i + 1) % n;
            const std::size_t im = (i + n - 1) % n;
            const Vec3 g1 = (c.points[ip] - c.points[im]) / (2.0 * h);
            const Vec3 g2 = (c.points[ip] - c.points[i] * 2.0 + c.points[im]) / (h * h);
            const Vec3 v1 = (V.v[ci][ip] - V.v[ci][im]) / (2.0 * h);
            const Vec3 v2 = (V.v[ci][ip] - V.v[ci][i] * 2.0 + V.v[ci][im]) / (h * h);
            out.value[ci][i] = dot(g2, v2) - 2.0 * dot(g1, v1);
            out.defined[ci][i] = true;
        }
    }
    return out;
}

VariationValues curvature_variation_b(const PolyCurve& curve, const VariationField& V) {
    VariationValues out = curvature_variation_a(curve, V);
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const Component& c = curve.components[ci];
        const std::size_t n = c.size();
        // (1/L) integral of gamma' . V' is the first variation of length; its
        // exact polygonal counterpart is the edge sum of (unit edge) . (dV).
        double sum = 0.0;
        const std::size_t edges = c.edge_count();
        for (std::size_t e = 0; e < edges; ++e) {
            const std::size_t e1 = (e + 1) % n;
            const Vec3 dir = (c.points[e1] - c.points[e]).normalized();
            sum += dot(dir, V.v[ci][e1] - V.v[ci][e]);
        }
        const double mean = sum / c.length();
        for (std::size_t i = 0; i < n; ++i)
            if (out.defined[ci][i]) out.value[ci][i] += mean;
    }
    return out;
}

NormalPushReport normal_push_experiment(const PolyCurve& curve, double eps) {
    validate(curve);
    if (eps < 0) throw std::invalid_argument("normal_push_experiment: eps must be >= 0");
    // Open components lose their endpoint vertices (no centered normal there).
    PolyCurve base;
    for (const Component& c : curve.components) {
        Component t = c;
        if (!c.closed) {
            if (c.size() < 5)
                throw std::invalid_argument("normal_push_experiment: component too short");
            t.points.assign(c.points.begin() + 1, c.points.end() - 1);
        }
        base.components.push_back(std::move(t));
    }
    const FrameField frames = frenet_frames(base);
    for (std::size_t ci = 0; ci < base.components.size(); ++ci) {
        const Component& c = base.components[ci];
        const std::size_t first = c.closed ? 0 : 1;
        const std::size_t last = c.closed ? c.size() : c.size() - 1;
        for (std::size_t i = first; i < last; ++i)
            if (!frames.defined[ci][i])
                throw std::invalid_argument(
                    "normal_push_experiment: normal undefined at a vertex");
    }

    NormalPushReport rep;
    rep.eps = eps;
    rep.length = base.total_length();
    PolyCurve pushed = base;
    for (std::size_t ci = 0; ci < base.components.size(); ++ci) {
        const std::size_t n = base.components[ci].size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 normal = frames.normal[ci][i];
            if (!frames.defined[ci][i]) {
                // Open-interior endpoints reuse the nearest defined normal.
                const std::size_t j = i == 0 ? 1 : n - 2;
                normal = frames.normal[ci][j];
            }
            pushed.components[ci].points[i] += normal * eps;
        }
    }
    const double len_eps = pushed.total_length();
    const double factor = rep.length / len_eps;
    for (Component& c : pushed.components)
        for (Vec3& p : c.points) p *= factor;

    // Open inputs: the endpoint vertices carry substituted normals, so the
    // first few interior stencils are boundary noise; the maxima are taken
    // over a 3-vertex interior margin there.
    auto margin_max = [&](const CurvatureProfile& prof) {
        double m = 0.0;
        for (std::size_t ci = 0; ci < prof.kappa.size(); ++ci) {
            const bool closed = base.components[ci].closed;
            const std::size_t n = prof.kappa[ci].size();
            const std::size_t first = closed ? 0 : 3;
            const std::size_t last = closed ? n : n - 3;
            for (std::size_t i = first; i < last; ++i) m = std::max(m, prof.kappa[ci][i]);
        }
        return m;
    };
    const CurvatureProfile before = discrete_curvature(base);
    const CurvatureProfile after = discrete_curvature(pushed);
    rep.max_kappa_input = margin_max(before);
    rep.max_kappa_rescaled = margin_max(after);
    rep.length_rescaled = pushed.total_length();
    rep.max_kappa_below_one = margin_max(after) < 1.0;
    for (const Component& c : pushed.components)
        if (!c.closed)
            rep.closure_defect =
                std::max(rep.closure_defect, distance(c.points.front(), c.points.back()));
    try {
        rep.dcsd_rescaled = dcsd(pushed, 1e-5).value;
    } catch (const std::exception&) {
        rep.dcsd_rescaled.reset();
    }
    rep.pushed = std::move(pushed);
    return rep;
}

// ---------------------------------------------------------------------------
// Ropelength descent.

namespace {

struct Metrics {
    double length = 0.0;
    double max_kappa = 0.0;
    double dcsd = kInf;
    double nir = 0.0;
    double ropelength = kInf;
};

Metrics measure(const PolyCurve& curve, double pair_tol) {
    Metrics m;
    m.length = curve.total_length();
    m.max_kappa = discrete_curvature(curve).max_kappa;
    try {
        m.dcsd = dcsd(curve, pair_tol).value;
    } catch (const std::exception&) {
        m.dcsd = kInf;
    }
    const double f_k = m.max_kappa > 0 ? 1.0 / m.max_kappa : kInf;
    m.nir = std::min(f_k, 0.5 * m.dcsd);
    m.ropelength = m.length / m.nir;
    return m;
}

double segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
    const Vec3 d1 = p2 - p1;
    const Vec3 d2 = q2 - q1;
    const Vec3 r = p1 - q1;
    const double a = d1.norm2(), e = d2.norm2(), f = dot(d2, r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-30 && e <= 1e-30) return r.norm();
    if (a <= 1e-30) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e <= 1e-30) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            if (denom > 1e-30) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            t = (b * s + f) / e;
            if (t < 0) {
                t = 0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1) {
                t = 1;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return distance(p1 + d1 * s, q1 + d2 * t);
}

// Minimum distance between segment pairs whose arclength separation exceeds
// the tube-local window (points on the same strand within ~pi * r of each
// other are naturally closer than 2r on a curvature-capped curve; squeezes
// there are caught by the curvature and NIR guards instead).
double min_windowed_segment_distance(const PolyCurve& curve, double window) {
    double best = kInf;
    const int nc = static_cast<int>(curve.components.size());
    std::vector<ArclengthView> views;
    views.reserve(nc);
    for (const Component& c : curve.components) views.emplace_back(c);
    for (int ca = 0; ca < nc; ++ca) {
        const Component& A = curve.components[ca];
        const std::size_t na = A.edge_count();
        for (int cb = ca; cb < nc; ++cb) {
            const Component& B = curve.components[cb];
            const std::size_t nb = B.edge_count();
            for (std::size_t i = 0; i < na; ++i) {
                const std::size_t j0 = (ca == cb) ? i + 1 : 0;
                for (std::size_t j = j0; j < nb; ++j) {
                    if (ca == cb &&
                        views[ca].separation(views[ca].arclengths()[i],
                                             views[ca].arclengths()[j]) <= window)
                        continue;
                    best = std::min(
                        best, segment_distance(A.points[i], A.points[(i + 1) % A.size()],
                                               B.points[j], B.points[(j + 1) % B.size()]));
                }
            }
        }
    }
    return best;
}

// Scales each component about its centroid so kappa_max <= cap (exactly hits
// the cap when it was violated). Returns the worst pre-scale kappa.
double rescale_to_cap(PolyCurve& curve, double cap) {
    const double mk = discrete_curvature(curve).max_kappa;
    if (mk > cap) {
        const double factor = mk / cap;
        for (Component& c : curve.components) {
            const Vec3 ctr = c.centroid();
            for (Vec3& p : c.points) p = ctr + (p - ctr) * factor;
        }
    }
    return mk;
}

struct StepOutcome {
    PolyCurve curve;
    Metrics metrics;
    bool accepted = false;
};

StepOutcome attempt_step(const PolyCurve& curve, const Metrics& before,
                         const TightenConfig& cfg, double step, double smooth_scale,
                         double target_r, std::uint64_t jitter_salt) {
    StepOutcome out;
    PolyCurve next = curve;
    // Accumulated displacement field: centroid shrink plus contact
    // inflation. Pushing contacts just past the current contact diameter is
    // what lets the thickness grow when the DCSD branch binds; capping the
    // per-vertex displacement keeps the length cost of a push second order.
    {
        for (Component& c : next.components) {
            const Vec3 ctr = c.centroid();
            for (Vec3& p : c.points) p += (ctr - p) * step;
        }
        std::vector<std::vector<Vec3>> disp(next.components.size());
        for (std::size_t ci = 0; ci < next.components.size(); ++ci)
            disp[ci].assign(next.components[ci].size(), Vec3{});
        const double dmin_up = std::min(2.0 * target_r, before.dcsd) * (1.0 + step);
        const double r_up = 0.5 * dmin_up;
        std::vector<ArclengthView> views;
        views.reserve(next.components.size());
        for (const Component& c : next.components) views.emplace_back(c);
        const int nc = static_cast<int>(next.components.size());
        for (int ca = 0; ca < nc; ++ca) {
            const Component& A = next.components[ca];
            for (int cb = ca; cb < nc; ++cb) {
                const Component& B = next.components[cb];
                for (std::size_t i = 0; i < A.size(); ++i) {
                    const std::size_t j0 = (ca == cb) ? i + 1 : 0;
                    for (std::size_t j = j0; j < B.size(); ++j) {
                        if (ca == cb) {
                            const double window =
                                std::max(6.0 * views[ca].mean_edge(), 1.2 * M_PI * r_up);
                            if (views[ca].separation(views[ca].arclengths()[i],
                                                     views[ca].arclengths()[j]) <= window)
                                continue;
                        }
                        const Vec3 d = B.points[j] - A.points[i];
                        const double dist = d.norm();
                        if (dist >= dmin_up || dist <= 1e-12) continue;
                        const Vec3 push = d * (0.5 * (dmin_up - dist) / dist);
                        disp[ca][i] -= push;
                        disp[cb][j] += push;
                    }
                }
            }
        }
        for (std::size_t ci = 0; ci < next.components.size(); ++ci) {
            Component& c = next.components[ci];
            const double cap = 0.75 * views[ci].mean_edge();
            for (std::size_t i = 0; i < c.size(); ++i) {
                Vec3 d = disp[ci][i];
                const double dn = d.norm();
                if (dn > cap) d *= cap / dn;
                c.points[i] += d;
            }
        }
    }
    // Diffuse afterwards so pushed regions relax smoothly.
    const double smooth_w = cfg.smooth_weight * std::clamp(smooth_scale, 0.0, 1.0);
    for (int pass = 0; pass < cfg.smooth_passes; ++pass) {
        for (Component& c : next.components) {
            const std::size_t n = c.size();
            std::vector<Vec3> moved = c.points;
            const std::size_t first = c.closed ? 0 : 1;
            const std::size_t last = c.closed ? n : n - 1;
            for (std::size_t i = first; i < last; ++i) {
                const Vec3 mid = (c.points[(i + n - 1) % n] + c.points[(i + 1) % n]) * 0.5;
                moved[i] += (mid - c.points[i]) * smooth_w;
            }
            c.points = std::move(moved);
        }
    }
    if (jitter_salt != 0) {
        // Deterministic plateau kick, tiny relative to the edge length.
        std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ull + jitter_salt);
        const double amp = 1e-3 * step;
        for (Component& c : next.components) {
            const double h = c.length() / static_cast<double>(c.edge_count());
            for (Vec3& p : c.points) {
                auto u = [&]() { return (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.5; };
                p += Vec3{u(), u(), u()} * (amp * h);
            }
        }
    }
    // Keep the vertex distribution uniform; the resampler preserves length.
    std::size_t n0 = curve.components.front().size();
    next = resample_arclength(next, n0);

    // Projection: local chord-stretch where the curvature cap is violated
    // (pushing the neighbors of a violating vertex apart lowers its turning
    // angle without shrinking anything), plus overlap removal outside the
    // tube-local window. A global rescale is the last resort only.
    const double dmin = 2.0 * target_r * (1.0 - cfg.margin);
    bool projected = false;
    for (int sweep = 0; sweep < cfg.max_proj_sweeps; ++sweep) {
        bool violated = false;
        {
            const CurvatureProfile prof = discrete_curvature(next);
            for (std::size_t ci = 0; ci < next.components.size(); ++ci) {
                Component& c = next.components[ci];
                const std::size_t n = c.size();
                std::vector<Vec3> adj(n, Vec3{});
                const std::size_t first = c.closed ? 0 : 1;
                const std::size_t last = c.closed ? n : n - 1;
                for (std::size_t i = first; i < last; ++i) {
                    if (prof.kappa[ci][i] <= cfg.lambda_cap * (1.0 + 1e-9)) continue;
                    const std::size_t ip = (i + 1) % n;
                    const std::size_t im = (i + n - 1) % n;
                    const double e0 = distance(c.points[i], c.points[im]);
                    const double e1 = distance(c.points[ip], c.points[i]);
                    const double theta_t = cfg.lambda_cap * 0.5 * (e0 + e1);
                    const double target = std::sqrt(
                        e0 * e0 + e1 * e1 + 2.0 * e0 * e1 * std::cos(theta_t));
                    const Vec3 chord = c.points[ip] - c.points[im];
                    const double clen = chord.norm();
                    if (clen >= target || clen <= 1e-12) continue;
                    const Vec3 push = chord * (0.5 * (target - clen) / clen);
                    adj[im] -= push;
                    adj[ip] += push;
                    violated = true;
                }
                for (std::size_t i = 0; i < n; ++i) c.points[i] += adj[i];
            }
        }
        {
            std::vector<ArclengthView> views;
            views.reserve(next.components.size());
            for (const Component& c : next.components) views.emplace_back(c);
            const int nc = static_cast<int>(next.components.size());
            for (int ca = 0; ca < nc; ++ca) {
                Component& A = next.components[ca];
                for (int cb = ca; cb < nc; ++cb) {
                    Component& B = next.components[cb];
                    for (std::size_t i = 0; i < A.size(); ++i) {
                        const std::size_t j0 = (ca == cb) ? i + 1 : 0;
                        for (std::size_t j = j0; j < B.size(); ++j) {
                            if (ca == cb) {
                                const double window = std::max(
                                    6.0 * views[ca].mean_edge(), 1.2 * M_PI * target_r);
                                if (views[ca].separation(views[ca].arclengths()[i],
                                                         views[ca].arclengths()[j]) <= window)
                                    continue;
                            }
                            const Vec3 d = B.points[j] - A.points[i];
                            const double dist = d.norm();
                            if (dist >= dmin || dist <= 1e-12) continue;
                            const Vec3 push = d * (0.5 * (dmin - dist) / dist);
                            A.points[i] -= push;
                            B.points[j] += push;
                            violated = true;
                        }
                    }
                }
            }
        }
        if (!violated) {
            projected = true;
            break;
        }
    }
    if (!projected) {
        // Uniform violations (a shrunk near-circle) do not relax locally;
        // restore the cap by scale and let the accept test decide.
        rescale_to_cap(next, cfg.lambda_cap);
        projected = discrete_curvature(next).max_kappa <= cfg.lambda_cap * (1.0 + 1e-6);
    }
    if (!projected) {
        out.curve = curve;
        out.metrics = before;
        return out;
    }

    const Metrics after = measure(next, cfg.pair_tol);
    const double guard = 2.0 * target_r * (1.0 - 2.0 * cfg.margin);
    const double guard_window = std::max(6.0 * next.components.front().length() /
                                             next.components.front().size(),
                                         1.2 * M_PI * target_r);
    const bool ok = after.ropelength < before.ropelength - 1e-12 &&
                    after.nir >= before.nir * (1.0 - 1e-6) &&
                    after.max_kappa <= cfg.lambda_cap * (1.0 + 1e-6) &&
                    min_windowed_segment_distance(next, guard_window) >= guard;
    if (!ok) {
        out.curve = curve;
        out.metrics = before;
        return out;
    }
    out.curve = std::move(next);
    out.metrics = after;
    out.accepted = true;
    return out;
}

} // namespace

std::pair<PolyCurve, bool> tighten_step(const PolyCurve& curve, const TightenConfig& cfg) {
    validate(curve);
    const Metrics before = measure(curve, cfg.pair_tol);
    const StepOutcome out =
        attempt_step(curve, before, cfg, cfg.step0, 1.0, before.nir, 0);
    return {out.curve, out.accepted};
}

std::pair<PolyCurve, TightenTrace> tighten(const PolyCurve& curve, const TightenConfig& cfg) {
    validate(curve);
    PolyCurve state = curve;
    if (cfg.normalize_scale) {
        const double mk = discrete_curvature(state).max_kappa;
        if (mk > 0) {
            const double factor = mk / cfg.lambda_cap;
            for (Component& c : state.components)
                for (Vec3& p : c.points) p *= factor;
        }
    }
    TightenTrace trace;
    Metrics cur = measure(state, cfg.pair_tol);
    double step = cfg.step0;
    double target_r = cur.nir;
    int rejects_in_row = 0;
    std::vector<double> history{cur.ropelength};

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        if (iter > 0 && iter % cfg.reestimate_every == 0) target_r = cur.nir;
        const std::uint64_t salt =
            rejects_in_row >= 8 ? static_cast<std::uint64_t>(iter) + 1 : 0;
        StepOutcome out =
            attempt_step(state, cur, cfg, step, step / cfg.step0, target_r, salt);
        trace.rows.push_back({iter, out.metrics.length, out.metrics.nir, out.metrics.dcsd,
                              out.metrics.max_kappa, out.metrics.ropelength, out.accepted});
        if (out.accepted) {
            state = std::move(out.curve);
            cur = out.metrics;
            step = std::min(step * cfg.grow, cfg.step0);
            rejects_in_row = 0;
        } else {
            step *= cfg.shrink;
            ++rejects_in_row;
            if (step < 1e-12) step = 1e-12;
        }
        history.push_back(cur.ropelength);
        if (static_cast<int>(history.size()) > cfg.window) {
            const double old = history[history.size() - 1 - cfg.window];
            if (old - cur.ropelength < cfg.tol * cur.ropelength) {
                trace.converged = true;
                break;
            }
        }
    }
    if (!trace.converged) trace.budget_exhausted = true;
    return {state, trace};
}

HalfDcsdReport verify_half_dcsd(const PolyCurve& curve, double tol_rel) {
    const ThicknessReport rep = thickness(curve, 1e-6);
    HalfDcsdReport out;
    out.nir = rep.nir;
    out.dcsd = rep.dcsd;
    out.f_k = rep.f_k;
    out.delta = std::fabs(2.0 * rep.nir - rep.dcsd) / rep.dcsd;
    out.pass = out.delta <= tol_rel;
    const double half_dcsd = 0.5 * rep.dcsd;
    if (std::fabs(rep.f_k - half_dcsd) <= 1e-9 * rep.nir)
        out.active = HalfDcsdReport::Branch::Both;
    else if (rep.f_k < half_dcsd)
        out.active = HalfDcsdReport::Branch::Focal;
    else
        out.active = HalfDcsdReport::Branch::Dcsd;

    const CurvatureProfile prof = discrete_curvature(curve);
    std::size_t total = 0, in_mx = 0;
    double worst = 0.0;
    for (const auto& comp : prof.kappa)
        for (const double k : comp) {
            ++total;
            const double dev = std::fabs(k * rep.nir - 1.0);
            if (dev <= 0.05) {
                ++in_mx;
                worst = std::max(worst, dev);
            }
        }
    out.imx_fraction = total ? static_cast<double>(in_mx) / static_cast<double>(total) : 0.0;
    out.max_kappa_nir_deviation = worst;
    out.constant_curvature_alternative = out.imx_fraction > 0.99;
    return out;
}

SubarcReport subarc_dubins_check(const PolyCurve& curve, double window_frac,
                                 int windows_per_component) {
    validate(curve);
    SubarcReport rep;
    rep.max_excess = -kInf;
    const double scale = std::max(discrete_curvature(curve).max_kappa, 1e-9);
    Clc3dConfig clc_cfg;
    clc_cfg.grid = 10;
    clc_cfg.theta_grid = 10;
    std::size_t passed = 0, counted = 0;
    for (int ci = 0; ci < static_cast<int>(curve.components.size()); ++ci) {
        const ArclengthView view(curve.components[ci]);
        const double L = view.length();
        const double w = window_frac * L;
        for (int k = 0; k < windows_per_component; ++k) {
            SubarcWindow win;
            win.comp = ci;
            win.s0 = L * static_cast<double>(k) / windows_per_component;
            win.window_len = w;
            win.subarc_len = w;
            if (!view.closed() && win.s0 + w > L) continue;
            BoundaryData bd;
            bd.p = view.point_at(win.s0) * scale;
            bd.q = view.point_at(win.s0 + w) * scale;
            bd.v = view.tangent_at(win.s0);
            bd.w = view.tangent_at(win.s0 + w);
            try {
                const DubinsPath path = solve_clc_3d(bd, clc_cfg);
                win.clc_len = path.length / scale;
                win.excess = win.subarc_len - *win.clc_len;
                rep.max_excess = std::max(rep.max_excess, win.excess);
                ++counted;
                if (win.excess <= 0.01 * win.window_len) ++passed;
            } catch (const std::exception&) {
                win.skipped = true;
            }
            rep.windows.push_back(win);
        }
    }
    rep.pass_fraction = counted ? static_cast<double>(passed) / counted : 0.0;
    rep.pass = rep.pass_fraction >= 0.95;
    return rep;
}

} // namespace ropekit
