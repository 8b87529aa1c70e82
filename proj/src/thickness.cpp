#include "ropekit/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ropekit/parallel.hpp"

namespace ropekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Residual {
    double r1 = 0.0;
    double r2 = 0.0;
    double dist = 0.0;
    bool ok = false;
};

Residual pair_residual(const ArclengthView& a, const ArclengthView& b, double s, double t) {
    Residual r;
    const Vec3 pa = a.point_at(s);
    const Vec3 pb = b.point_at(t);
    const Vec3 u = pa - pb;
    r.dist = u.norm();
    if (r.dist <= 1e-12) return r;
    r.r1 = dot(u, a.tangent_at(s)) / r.dist;
    r.r2 = dot(u, b.tangent_at(t)) / r.dist;
    r.ok = true;
    return r;
}

// Flattened vertex addressing across components.
struct VertexRef {
    int comp;
    std::size_t idx;
};

} // namespace

std::optional<DoubleCriticalPair> refine_critical_pair(const std::vector<ArclengthView>& views,
                                                       int ci, std::size_t i, int cj,
                                                       std::size_t j,
                                                       const PairScanConfig& cfg) {
    const ArclengthView& va = views[ci];
    const ArclengthView& vb = views[cj];
    const double s0 = va.arclengths()[i];
    const double t0 = vb.arclengths()[j];
    const double ha = va.mean_edge();
    const double hb = vb.mean_edge();
    const double wander_cap_a = 2.5 * ha;
    const double wander_cap_b = 2.5 * hb;

    double s = s0;
    double t = t0;
    Residual r = pair_residual(va, vb, s, t);
    if (!r.ok) return std::nullopt;
    double cost = r.r1 * r.r1 + r.r2 * r.r2;
    double lambda = 1e-4;

    const double eps_a = 1e-6 * ha;
    const double eps_b = 1e-6 * hb;
    for (int iter = 0; iter < 60; ++iter) {
        if (std::max(std::fabs(r.r1), std::fabs(r.r2)) < 1e-13) break;
        const Residual rs = pair_residual(va, vb, s + eps_a, t);
        const Residual rt = pair_residual(va, vb, s, t + eps_b);
        if (!rs.ok || !rt.ok) return std::nullopt;
        // 2x2 Jacobian by forward differences.
        const double j11 = (rs.r1 - r.r1) / eps_a;
        const double j12 = (rt.r1 - r.r1) / eps_b;
        const double j21 = (rs.r2 - r.r2) / eps_a;
        const double j22 = (rt.r2 - r.r2) / eps_b;
        const double a11 = j11 * j11 + j21 * j21;
        const double a12 = j11 * j12 + j21 * j22;
        const double a22 = j12 * j12 + j22 * j22;
        const double g1 = j11 * r.r1 + j21 * r.r2;
        const double g2 = j12 * r.r1 + j22 * r.r2;
        const double d11 = a11 + lambda * (a11 + 1e-12);
        const double d22 = a22 + lambda * (a22 + 1e-12);
        const double det = d11 * d22 - a12 * a12;
        if (det == 0.0 || !std::isfinite(det)) {
            lambda *= 4.0;
            continue;
        }
        double ds = -(d22 * g1 - a12 * g2) / det;
        double dt = -(d11 * g2 - a12 * g1) / det;
        ds = std::clamp(ds, -0.75 * ha, 0.75 * ha);
        dt = std::clamp(dt, -0.75 * hb, 0.75 * hb);
        const double s_try = s + ds;
        const double t_try = t + dt;
        if (va.separation(s_try, s0) > wander_cap_a || vb.separation(t_try, t0) > wander_cap_b)
            return std::nullopt;
        const Residual r_try = pair_residual(va, vb, s_try, t_try);
        const double cost_try = r_try.ok ? r_try.r1 * r_try.r1 + r_try.r2 * r_try.r2 : kInf;
        if (r_try.ok && cost_try < cost) {
            s = s_try;
            t = t_try;
            r = r_try;
            cost = cost_try;
            lambda = std::max(lambda / 3.0, 1e-12);
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
        if (std::fabs(ds) < 1e-14 * ha && std::fabs(dt) < 1e-14 * hb) break;
    }
    if (std::max(std::fabs(r.r1), std::fabs(r.r2)) > cfg.tol) return std::nullopt;
    DoubleCriticalPair out;
    out.comp_i = ci;
    out.comp_j = cj;
    out.s = s;
    out.t = t;
    out.p = va.point_at(s);
    out.q = vb.point_at(t);
    out.dist = r.dist;
    out.r1 = r.r1;
    out.r2 = r.r2;
    return out;
}

std::vector<DoubleCriticalPair> dedupe_critical_pairs(std::vector<DoubleCriticalPair> pairs,
                                                      const std::vector<ArclengthView>& views,
                                                      const PairScanConfig& cfg) {
    // Canonical orientation, wrap parameters, re-check the feature floor.
    std::vector<DoubleCriticalPair> canon;
    canon.reserve(pairs.size());
    for (DoubleCriticalPair p : pairs) {
        if (p.dist <= 1e-12) continue;
        const ArclengthView& va = views[p.comp_i];
        const ArclengthView& vb = views[p.comp_j];
        if (va.closed()) p.s = std::fmod(std::fmod(p.s, va.length()) + va.length(), va.length());
        if (vb.closed()) p.t = std::fmod(std::fmod(p.t, vb.length()) + vb.length(), vb.length());
        if (p.comp_i > p.comp_j || (p.comp_i == p.comp_j && p.s > p.t)) {
            std::swap(p.comp_i, p.comp_j);
            std::swap(p.s, p.t);
            std::swap(p.p, p.q);
            std::swap(p.r1, p.r2);
            // The chord flips sign with the swap.
            p.r1 = -p.r1;
            p.r2 = -p.r2;
        }
        if (p.comp_i == p.comp_j) {
            const double floor = cfg.feature_floor_edges * views[p.comp_i].mean_edge();
            if (views[p.comp_i].separation(p.s, p.t) <= 2.0 * floor) continue;
        }
        canon.push_back(p);
    }
    std::sort(canon.begin(), canon.end(), [](const DoubleCriticalPair& a,
                                             const DoubleCriticalPair& b) {
        if (a.comp_i != b.comp_i) return a.comp_i < b.comp_i;
        if (a.comp_j != b.comp_j) return a.comp_j < b.comp_j;
        if (a.s != b.s) return a.s < b.s;
        return a.t < b.t;
    });
    std::vector<DoubleCriticalPair> kept;
    for (const DoubleCriticalPair& p : canon) {
        bool dup = false;
        for (DoubleCriticalPair& k : kept) {
            if (k.comp_i != p.comp_i || k.comp_j != p.comp_j) continue;
            const double prox_s = 0.5 * views[p.comp_i].mean_edge();
            const double prox_t = 0.5 * views[p.comp_j].mean_edge();
            if (views[p.comp_i].separation(k.s, p.s) <= prox_s &&
                views[p.comp_j].separation(k.t, p.t) <= prox_t) {
                if (p.dist < k.dist) k = p;
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(p);
    }
    return kept;
}

std::vector<DoubleCriticalPair> find_double_critical_pairs(const PolyCurve& curve, double tol) {
    PairScanConfig cfg;
    cfg.tol = tol;
    return find_double_critical_pairs(curve, cfg);
}

std::vector<DoubleCriticalPair> find_double_critical_pairs(const PolyCurve& curve,
                                                           const PairScanConfig& cfg) {
    if (!(cfg.tol > 0)) throw std::invalid_argument("pair scan: tol must be positive");
    validate(curve);
    std::vector<ArclengthView> views;
    views.reserve(curve.components.size());
    for (const Component& c : curve.components) views.emplace_back(c);

    std::vector<VertexRef> verts;
    for (int ci = 0; ci < static_cast<int>(curve.components.size()); ++ci) {
        const std::size_t n = curve.components[ci].size();
        for (std::size_t i = 0; i < n; ++i) verts.push_back({ci, i});
    }
    const std::size_t nv = verts.size();

    // A double critical pair is a common zero of the two perpendicularity
    // residuals. Candidate cells are found marching-squares style: both
    // residuals must change sign (or vanish) over the 2x2 lattice cell
    // spanned by (i, i+1) x (j, j+1). Axis-aligned extremum tests miss
    // sheared critical points whose residual zero curves run along a
    // lattice direction; the cell test does not.
    auto advance = [&](const VertexRef& v) -> std::optional<VertexRef> {
        const Component& c = curve.components[v.comp];
        if (v.idx + 1 < c.size()) return VertexRef{v.comp, v.idx + 1};
        if (c.closed) return VertexRef{v.comp, 0};
        return std::nullopt;
    };
    auto residual_pair = [&](const VertexRef& a, const VertexRef& b, double& r1, double& r2) {
        const Vec3 u = curve.components[a.comp].points[a.idx] -
                       curve.components[b.comp].points[b.idx];
        const double d = u.norm();
        if (d <= 1e-12) return false;
        r1 = dot(u, views[a.comp].vertex_tangents()[a.idx]) / d;
        r2 = dot(u, views[b.comp].vertex_tangents()[b.idx]) / d;
        return true;
    };

    const std::size_t block = 64;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> seeds_by_block(
        (nv + block - 1) / block);
    parallel_blocks(nv, block, [&](std::size_t bi, std::size_t begin, std::size_t end) {
        auto& seeds = seeds_by_block[bi];
        for (std::size_t gi = begin; gi < end; ++gi) {
            const VertexRef a = verts[gi];
            const auto a1 = advance(a);
            if (!a1) continue;
            for (std::size_t gj = gi + 1; gj < nv; ++gj) {
                const VertexRef b = verts[gj];
                if (a.comp == b.comp) {
                    const double floor =
                        cfg.feature_floor_edges * views[a.comp].mean_edge();
                    if (views[a.comp].separation(views[a.comp].arclengths()[a.idx],
                                                 views[b.comp].arclengths()[b.idx]) <=
                        2.0 * floor)
                        continue;
                }
                const auto b1 = advance(b);
                if (!b1) continue;
                double r1[4], r2[4];
                if (!residual_pair(a, b, r1[0], r2[0])) continue;
                if (!residual_pair(*a1, b, r1[1], r2[1])) continue;
                if (!residual_pair(a, *b1, r1[2], r2[2])) continue;
                if (!residual_pair(*a1, *b1, r1[3], r2[3])) continue;
                const auto spans_zero = [](const double* r) {
                    double lo = r[0], hi = r[0];
                    for (int k = 1; k < 4; ++k) {
                        lo = std::min(lo, r[k]);
                        hi = std::max(hi, r[k]);
                    }
                    return lo <= 0.0 && hi >= 0.0;
                };
                if (!spans_zero(r1) || !spans_zero(r2)) continue;
                seeds.push_back({gi, gj});
            }
        }
    });

    std::vector<DoubleCriticalPair> refined;
    for (const auto& seeds : seeds_by_block)
        for (const auto& [gi, gj] : seeds) {
            const VertexRef a = verts[gi];
            const VertexRef b = verts[gj];
            if (auto p = refine_critical_pair(views, a.comp, a.idx, b.comp, b.idx, cfg))
                refined.push_back(*p);
        }
    return dedupe_critical_pairs(std::move(refined), views, cfg);
}

DcsdResult dcsd(const PolyCurve& curve, double tol) {
    const std::vector<DoubleCriticalPair> pairs = find_double_critical_pairs(curve, tol);
    if (pairs.empty())
        throw std::runtime_error("dcsd: no double critical pair at this resolution");
    DcsdResult res;
    res.value = kInf;
    for (const DoubleCriticalPair& p : pairs) res.value = std::min(res.value, p.dist);
    for (const DoubleCriticalPair& p : pairs)
        if (p.dist <= res.value * (1.0 + 1e-9)) res.minimal.push_back(p);
    return res;
}

// Sup of the curvature over the curve, not just over vertices: a parabolic
// peak fit through the three samples around each strict local maximum
// recovers the between-vertex part of the supremum.
double sup_kappa_estimate(const CurvatureProfile& prof, const PolyCurve& curve) {
    double sup = prof.max_kappa;
    for (std::size_t ci = 0; ci < prof.kappa.size(); ++ci) {
        const std::vector<double>& k = prof.kappa[ci];
        const std::size_t n = k.size();
        if (n < 3) continue;
        const bool closed = curve.components[ci].closed;
        const std::size_t first = closed ? 0 : 2;
        const std::size_t last = closed ? n : n - 2;
        for (std::size_t i = first; i < last; ++i) {
            const double km = k[(i + n - 1) % n];
            const double kc = k[i];
            const double kp = k[(i + 1) % n];
            if (kc < km || kc < kp) continue;
            // Only smooth peaks. A genuine C^2 maximum sampled at spacing h
            // drops on both sides with a ratio of at least ~1/9; a plateau
            // shoulder next to a curvature jump (a stadium junction, say)
            // drops on one side only, and extrapolating across it would
            // invent a spurious supremum.
            const double drop_lo = std::min(kc - km, kc - kp);
            const double drop_hi = std::max(kc - km, kc - kp);
            if (drop_hi <= 0 || drop_lo < 0.08 * drop_hi) continue;
            if (std::min(km, kp) < 0.8 * kc) continue;
            const double concavity = 2.0 * kc - km - kp;
            if (concavity <= 1e-9 * std::max(kc, 1e-300)) continue;
            sup = std::max(sup, kc + (kp - km) * (kp - km) / (8.0 * concavity));
        }
    }
    return sup;
}

ThicknessReport thickness(const PolyCurve& curve, double tol) {
    validate(curve);
    const CurvatureProfile prof = discrete_curvature(curve);
    ThicknessReport rep;
    rep.pair_tol = tol;
    const double sup_kappa = sup_kappa_estimate(prof, curve);
    rep.f_k = sup_kappa > 0 ? 1.0 / sup_kappa : kInf;
    const DcsdResult d = dcsd(curve, tol);
    rep.dcsd = d.value;
    rep.minimal_pairs = d.minimal;
    rep.nir = std::min(rep.f_k, 0.5 * rep.dcsd);
    rep.length = curve.total_length();
    rep.ropelength = rep.length / rep.nir;
    return rep;
}

namespace {

double link_diameter(const PolyCurve& curve) {
    std::vector<const Vec3*> pts;
    for (const Component& c : curve.components)
        for (const Vec3& p : c.points) pts.push_back(&p);
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, distance(*pts[i], *pts[j]));
    return best;
}

} // namespace

bool ball_radius_free(const PolyCurve& curve, double r) {
    if (!(r > 0)) throw std::invalid_argument("ball_radius_free: r must be positive");
    std::vector<ArclengthView> views;
    for (const Component& c : curve.components) views.emplace_back(c);
    std::vector<VertexRef> verts;
    for (int ci = 0; ci < static_cast<int>(curve.components.size()); ++ci)
        for (std::size_t i = 0; i < curve.components[ci].size(); ++i) verts.push_back({ci, i});
    const std::size_t nv = verts.size();
    std::vector<char> block_hit((nv + 63) / 64, 0);
    parallel_blocks(nv, 64, [&](std::size_t bi, std::size_t begin, std::size_t end) {
        for (std::size_t gi = begin; gi < end && !block_hit[bi]; ++gi) {
            const VertexRef a = verts[gi];
            const Vec3& p = curve.components[a.comp].points[a.idx];
            const Vec3& v = views[a.comp].vertex_tangents()[a.idx];
            for (std::size_t gj = 0; gj < nv; ++gj) {
                if (gj == gi) continue;
                const VertexRef b = verts[gj];
                const Vec3 d = curve.components[b.comp].points[b.idx] - p;
                const double d2 = d.norm2();
                if (d2 <= 1e-24) continue;
                const Vec3 dperp = d - v * dot(d, v);
                if (d2 < 2.0 * r * dperp.norm()) {
                    block_hit[bi] = 1;
                    break;
                }
            }
        }
    });
    for (const char hit : block_hit)
        if (hit) return false;
    return true;
}

double bisect_ball_radius(const PolyCurve& curve, double lo, double hi, double rel_tol) {
    if (hi < lo) throw std::invalid_argument("bisect_ball_radius: hi < lo");
    if (!(hi > 0)) throw std::invalid_argument("bisect_ball_radius: hi must be positive");
    // Bisect in units of hi so the probe sequence is scale invariant.
    const double scale = hi;
    double tlo = lo / scale;
    double thi = 1.0;
    if (tlo > 0 && !ball_radius_free(curve, tlo * scale))
        throw std::runtime_error("bisect_ball_radius: lower bound already occupied");
    if (ball_radius_free(curve, thi * scale))
        throw std::runtime_error("bisect_ball_radius: ball radius exceeds upper bound");
    while (thi - tlo > rel_tol * thi) {
        const double tm = 0.5 * (tlo + thi);
        if (ball_radius_free(curve, tm * scale))
            tlo = tm;
        else
            thi = tm;
    }
    return 0.5 * (tlo + thi) * scale;
}

double ball_radius(const PolyCurve& curve, double rel_tol) {
    validate(curve);
    return bisect_ball_radius(curve, 0.0, link_diameter(curve), rel_tol);
}

double global_radius_oracle(const PolyCurve& curve, std::size_t point_cap) {
    validate(curve);
    std::vector<Vec3> pts;
    for (const Component& c : curve.components)
        for (const Vec3& p : c.points) pts.push_back(p);
    if (pts.size() > point_cap)
        throw std::invalid_argument("global_radius_oracle: point count exceeds cap");
    const std::size_t n = pts.size();
    std::vector<double> block_min((n + 7) / 8, kInf);
    parallel_blocks(n, 8, [&](std::size_t bi, std::size_t begin, std::size_t end) {
        double best = kInf;
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const Vec3 ab = pts[j] - pts[i];
                const double lab = ab.norm();
                for (std::size_t k = j + 1; k < n; ++k) {
                    const Vec3 ac = pts[k] - pts[i];
                    const double twice_area = cross(ab, ac).norm();
                    if (twice_area <= 0.0) continue; // collinear: infinite radius
                    const double r = lab * ac.norm() * distance(pts[j], pts[k]) /
                                     (2.0 * twice_area);
                    best = std::min(best, r);
                }
            }
        block_min[bi] = best;
    });
    double best = kInf;
    for (const double b : block_min) best = std::min(best, b);
    if (!std::isfinite(best))
        throw std::runtime_error("global_radius_oracle: all vertex triples collinear");
    return best;
}

namespace {

bool focal_window_free(const Component& c, const ArclengthView& view, std::size_t vertex,
                       const std::vector<std::size_t>& window, double r) {
    const Vec3& p = c.points[vertex];
    const Vec3& v = view.vertex_tangents()[vertex];
    for (const std::size_t j : window) {
        const Vec3 d = c.points[j] - p;
        const double d2 = d.norm2();
        if (d2 <= 1e-24) continue;
        const Vec3 dperp = d - v * dot(d, v);
        if (d2 < 2.0 * r * dperp.norm()) return false;
    }
    return true;
}

} // namespace

FocalResult geometric_focal_oracle(const PolyCurve& curve, int comp, std::size_t vertex,
                                   double window_frac, double max_radius, double rel_tol) {
    validate(curve);
    if (comp < 0 || comp >= static_cast<int>(curve.components.size()))
        throw std::invalid_argument("geometric_focal_oracle: bad component index");
    const Component& c = curve.components[comp];
    if (vertex >= c.size()) throw std::invalid_argument("geometric_focal_oracle: bad vertex");
    const ArclengthView view(c);
    if (max_radius <= 0) max_radius = 2.0 * link_diameter(curve);
    const double sp = view.arclengths()[vertex];
    std::vector<std::size_t> window;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (j == vertex) continue;
        if (view.separation(view.arclengths()[j], sp) <= window_frac * view.length())
            window.push_back(j);
    }
    if (window.size() < 5)
        throw std::invalid_argument("geometric_focal_oracle: window too small");
    if (focal_window_free(c, view, vertex, window, max_radius))
        return {max_radius, true};
    double tlo = 0.0;
    double thi = 1.0; // units of max_radius
    while (thi - tlo > rel_tol * thi) {
        const double tm = 0.5 * (tlo + thi);
        if (focal_window_free(c, view, vertex, window, tm * max_radius))
            tlo = tm;
        else
            thi = tm;
    }
    return {0.5 * (tlo + thi) * max_radius, false};
}

FocalResult geometric_focal_min(const PolyCurve& curve, double window_frac, double max_radius,
                                double rel_tol) {
    FocalResult best{kInf, false};
    for (int ci = 0; ci < static_cast<int>(curve.components.size()); ++ci) {
        const Component& c = curve.components[ci];
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c.closed && (i == 0 || i + 1 == c.size())) continue;
            const FocalResult f =
                geometric_focal_oracle(curve, ci, i, window_frac, max_radius, rel_tol);
            if (f.value < best.value) best = f;
        }
    }
    if (!std::isfinite(best.value))
        throw std::runtime_error("geometric_focal_min: no vertex admits a window");
    return best;
}

std::size_t RegimePartition::count(Band b) const {
    std::size_t n = 0;
    for (const auto& comp : band)
        for (const Band v : comp)
            if (v == b) ++n;
    return n;
}

std::size_t RegimePartition::count_critical() const {
    std::size_t n = 0;
    for (const auto& comp : critical)
        for (const bool v : comp)
            if (v) ++n;
    return n;
}

RegimePartition classify_regimes(const PolyCurve& curve, const ThicknessReport& report,
                                 double kappa_tol, double dist_tol) {
    validate(curve);
    const CurvatureProfile prof = discrete_curvature(curve);
    RegimePartition part;
    part.kappa_tol = kappa_tol;
    part.dist_tol = dist_tol;
    const double inv_nir = 1.0 / report.nir;
    part.band.resize(curve.components.size());
    part.critical.resize(curve.components.size());
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const std::size_t n = curve.components[ci].size();
        part.band[ci].assign(n, RegimePartition::Band::Unclassified);
        part.critical[ci].assign(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const double k = prof.kappa[ci][i];
            if (k <= kappa_tol)
                part.band[ci][i] = RegimePartition::Band::Zero;
            else if (std::fabs(k - inv_nir) <= kappa_tol)
                part.band[ci][i] = RegimePartition::Band::Max;
            else if (k < inv_nir - kappa_tol)
                part.band[ci][i] = RegimePartition::Band::Between;
        }
    }
    // I_c: vertices adjacent to a pair whose distance is within dist_tol of DCSD.
    std::vector<ArclengthView> views;
    for (const Component& c : curve.components) views.emplace_back(c);
    const std::vector<DoubleCriticalPair> pairs =
        find_double_critical_pairs(curve, report.pair_tol);
    auto mark = [&](int comp, double s) {
        const ArclengthView& view = views[comp];
        const double prox = 0.51 * view.mean_edge();
        for (std::size_t i = 0; i < view.size(); ++i)
            if (view.separation(view.arclengths()[i], s) <= prox)
                part.critical[comp][i] = true;
    };
    for (const DoubleCriticalPair& p : pairs) {
        if (p.dist > report.dcsd + dist_tol) continue;
        mark(p.comp_i, p.s);
        mark(p.comp_j, p.t);
    }
    return part;
}

} // namespace ropekit
