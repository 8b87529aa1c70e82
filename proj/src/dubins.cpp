#include "ropekit/dubins.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ropekit {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kInf = std::numeric_limits<double>::infinity();

double mod2pi(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

} // namespace

void validate(const BoundaryData& b) {
    if (std::fabs(b.v.norm() - 1.0) > 1e-12 || std::fabs(b.w.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("boundary data: tangents must be unit vectors");
}

double DubinsSegment::length() const {
    return kind == Kind::Arc ? angle : distance(start, end);
}

Vec3 DubinsSegment::point_at(double u) const {
    if (kind == Kind::Line) return start + (end - start) * u;
    const Vec3 r0 = start - center;
    const Vec3 s0 = cross(normal, r0);
    const double a = u * angle;
    return center + r0 * std::cos(a) + s0 * std::sin(a);
}

Vec3 DubinsSegment::tangent_at(double u) const {
    if (kind == Kind::Line) return (end - start).normalized();
    const Vec3 r0 = start - center;
    const Vec3 s0 = cross(normal, r0);
    const double a = u * angle;
    return (s0 * std::cos(a) - r0 * std::sin(a)).normalized();
}

Vec3 DubinsPath::start_point() const { return segments.front().start; }
Vec3 DubinsPath::start_tangent() const { return segments.front().tangent_at(0.0); }
Vec3 DubinsPath::end_point() const { return segments.back().end; }
Vec3 DubinsPath::end_tangent() const { return segments.back().tangent_at(1.0); }

double DubinsPath::c1_position_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i)
        worst = std::max(worst, distance(segments[i].end, segments[i + 1].start));
    return worst;
}

double DubinsPath::c1_tangent_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i)
        worst = std::max(worst,
                         angle_between(segments[i].tangent_at(1.0), segments[i + 1].tangent_at(0.0)));
    return worst;
}

std::optional<PlaneBasis> coplanar_basis(const BoundaryData& b, double tol) {
    validate(b);
    const Vec3 qp = b.q - b.p;
    // Most stable normal among the available cross products.
    Vec3 n = cross(b.v, b.w);
    const Vec3 n2 = cross(b.v, qp);
    const Vec3 n3 = cross(b.w, qp);
    if (n2.norm() > n.norm()) n = n2;
    if (n3.norm() > n.norm()) n = n3;
    if (n.norm() <= 1e-12) n = any_orthogonal(b.v); // everything parallel: any plane through v
    n = n.normalized();
    const double scale = std::max(1.0, qp.norm());
    if (std::fabs(dot(qp, n)) > tol * scale || std::fabs(dot(b.v, n)) > tol ||
        std::fabs(dot(b.w, n)) > tol)
        return std::nullopt;
    PlaneBasis basis;
    basis.origin = b.p;
    basis.ex = b.v;
    basis.n = n;
    basis.ey = cross(n, basis.ex).normalized();
    return basis;
}

namespace {

// Appends a unit-radius arc turning about `axis` (left for axis = +plane
// normal) through `angle`, advancing pose (pos, heading).
void append_arc(std::vector<DubinsSegment>& segs, Vec3& pos, Vec3& heading, const Vec3& axis,
                double angle) {
    DubinsSegment s;
    s.kind = DubinsSegment::Kind::Arc;
    s.normal = axis;
    s.center = pos + cross(axis, heading);
    s.start = pos;
    s.angle = angle;
    s.end = s.point_at(1.0);
    pos = s.end;
    heading = s.tangent_at(1.0);
    segs.push_back(s);
}

void append_line(std::vector<DubinsSegment>& segs, Vec3& pos, const Vec3& heading, double len) {
    DubinsSegment s;
    s.kind = DubinsSegment::Kind::Line;
    s.start = pos;
    s.end = pos + heading * len;
    pos = s.end;
    segs.push_back(s);
}

struct WordParams {
    const char* word;
    double t, p, q;
    bool ok = false;
};

// Closed-form piece lengths for the six planar words; angles in radians,
// straight piece in curve units (turning radius 1).
std::array<WordParams, 8> planar_words(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double c_ab = std::cos(alpha - beta);
    const double d_sq = d * d;
    std::array<WordParams, 8> out;
    out[5].word = "RLR";
    out[7].word = "LRL";

    // When p_sq vanishes for an outer-tangent word the two circles coincide
    // and atan2 sees 0/0; the word collapses to a single arc of the full
    // heading change.
    constexpr double kMergedArc = 1e-14;

    out[0].word = "LSL";
    {
        const double p_sq = 2.0 + d_sq - 2.0 * c_ab + 2.0 * d * (sa - sb);
        if (std::fabs(p_sq) < kMergedArc) {
            out[0].t = mod2pi(beta - alpha);
            out[0].p = 0.0;
            out[0].q = 0.0;
            out[0].ok = true;
        } else if (p_sq >= 0) {
            const double tmp = std::atan2(cb - ca, d + sa - sb);
            out[0].t = mod2pi(tmp - alpha);
            out[0].p = std::sqrt(p_sq);
            out[0].q = mod2pi(beta - tmp);
            out[0].ok = true;
        }
    }
    out[1].word = "RSR";
    {
        const double p_sq = 2.0 + d_sq - 2.0 * c_ab + 2.0 * d * (sb - sa);
        if (std::fabs(p_sq) < kMergedArc) {
            out[1].t = mod2pi(alpha - beta);
            out[1].p = 0.0;
            out[1].q = 0.0;
            out[1].ok = true;
        } else if (p_sq >= 0) {
            const double tmp = std::atan2(ca - cb, d - sa + sb);
            out[1].t = mod2pi(alpha - tmp);
            out[1].p = std::sqrt(p_sq);
            out[1].q = mod2pi(tmp - beta);
            out[1].ok = true;
        }
    }
    out[2].word = "LSR";
    {
        double p_sq = -2.0 + d_sq + 2.0 * c_ab + 2.0 * d * (sa + sb);
        if (p_sq < 0 && p_sq > -kMergedArc) p_sq = 0.0;
        if (p_sq >= 0) {
            const double p = std::sqrt(p_sq);
            const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
            out[2].t = mod2pi(tmp - alpha);
            out[2].p = p;
            out[2].q = mod2pi(tmp - mod2pi(beta));
            out[2].ok = true;
        }
    }
    out[3].word = "RSL";
    {
        double p_sq = -2.0 + d_sq + 2.0 * c_ab - 2.0 * d * (sa + sb);
        if (p_sq < 0 && p_sq > -kMergedArc) p_sq = 0.0;
        if (p_sq >= 0) {
            const double p = std::sqrt(p_sq);
            const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
            out[3].t = mod2pi(alpha - tmp);
            out[3].p = p;
            out[3].q = mod2pi(beta - tmp);
            out[3].ok = true;
        }
    }
    // CCC words by the tangent-circle construction. The middle circle is
    // tangent to the start and goal circles (both radius 1, center distance
    // 2); each side of the center line gives one candidate.
    struct Pt {
        double x, y;
    };
    const auto ccc = [&](bool start_left, WordParams* slots) {
        const double o = start_left ? 1.0 : -1.0;
        const Pt c1{-o * sa, o * ca};
        const Pt c3{d - o * sb, o * cb};
        const double dx = c3.x - c1.x, dy = c3.y - c1.y;
        const double D = std::hypot(dx, dy);
        if (D > 4.0 || D < 1e-12) return;
        const double base = std::atan2(dy, dx);
        const double gamma = std::acos(std::clamp(D / 4.0, -1.0, 1.0));
        // ccw angle from point a to point b around center c.
        const auto ccw = [](const Pt& c, const Pt& a, const Pt& b) {
            return mod2pi(std::atan2(b.y - c.y, b.x - c.x) - std::atan2(a.y - c.y, a.x - c.x));
        };
        const Pt start{0.0, 0.0};
        const Pt goal{d, 0.0};
        for (int side = 0; side < 2; ++side) {
            const double ang = base + (side == 0 ? gamma : -gamma);
            const Pt c2{c1.x + 2.0 * std::cos(ang), c1.y + 2.0 * std::sin(ang)};
            const Pt t1{0.5 * (c1.x + c2.x), 0.5 * (c1.y + c2.y)};
            const Pt t2{0.5 * (c2.x + c3.x), 0.5 * (c2.y + c3.y)};
            WordParams& wp = slots[side];
            wp.word = start_left ? "LRL" : "RLR";
            if (start_left) {
                wp.t = ccw(c1, start, t1);
                wp.p = mod2pi(-ccw(c2, t1, t2)); // middle arc turns the other way
                wp.q = ccw(c3, t2, goal);
            } else {
                wp.t = mod2pi(-ccw(c1, start, t1));
                wp.p = ccw(c2, t1, t2);
                wp.q = mod2pi(-ccw(c3, t2, goal));
            }
            wp.ok = true;
        }
    };
    ccc(false, &out[4]); // RLR, both middle-circle sides
    ccc(true, &out[6]);  // LRL
    return out;
}

struct Planar2d {
    PlaneBasis basis;
    double d, alpha, beta;
};

Planar2d reduce_to_plane(const BoundaryData& b) {
    const auto basis = coplanar_basis(b);
    if (!basis)
        throw std::invalid_argument("solve_dubins_2d: boundary data is not coplanar");
    Planar2d out;
    out.basis = *basis;
    const Vec3 qp = b.q - b.p;
    const double qx = dot(qp, basis->ex);
    const double qy = dot(qp, basis->ey);
    const double th1 = std::atan2(dot(b.w, basis->ey), dot(b.w, basis->ex));
    out.d = std::hypot(qx, qy);
    const double theta = out.d > 0 ? mod2pi(std::atan2(qy, qx)) : 0.0;
    out.alpha = mod2pi(0.0 - theta); // heading at p is 0 in this basis
    out.beta = mod2pi(th1 - theta);
    return out;
}

DubinsPath realize_planar_word(const PlaneBasis& basis, const BoundaryData& b,
                               const WordParams& wp) {
    DubinsPath path;
    Vec3 pos = b.p;
    Vec3 heading = b.v;
    const double pieces[3] = {wp.t, wp.p, wp.q};
    for (int k = 0; k < 3; ++k) {
        const char letter = wp.word[k];
        const double amount = pieces[k];
        if (amount <= 1e-12) continue;
        if (letter == 'S') {
            append_line(path.segments, pos, heading, amount);
            path.word += 'S';
        } else {
            const Vec3 axis = letter == 'L' ? basis.n : -basis.n;
            append_arc(path.segments, pos, heading, axis, amount);
            path.word += letter;
        }
    }
    path.length = wp.t + wp.p + wp.q;
    if (path.segments.empty()) {
        // Degenerate boundary (p == q, v == w): keep an explicit zero line.
        append_line(path.segments, pos, heading, 0.0);
        path.word = "S";
        path.length = 0.0;
    }
    return path;
}

struct SolvedWord {
    WordParams wp;
    DubinsPath path;
};

// Feasible words, each realized as a path and checked against the boundary
// data; candidates failing the 1e-9 admissibility check are dropped.
std::vector<SolvedWord> solve_words(const BoundaryData& b) {
    const Planar2d red = reduce_to_plane(b);
    const auto words = planar_words(red.d, red.alpha, red.beta);
    const double pos_tol = 1e-9 * std::max(1.0, red.d);
    std::vector<SolvedWord> out;
    for (const WordParams& wp : words) {
        if (!wp.ok) continue;
        // A CCC minimizer needs a middle arc in [pi, 2pi); shorter
        // middles are never optimal.
        if (wp.word[1] != 'S' && !(wp.p >= M_PI && wp.p < kTwoPi)) continue;
        DubinsPath path = realize_planar_word(red.basis, b, wp);
        if (distance(path.end_point(), b.q) > pos_tol) continue;
        if (path.length > 0 && angle_between(path.end_tangent(), b.w) > 1e-9) continue;
        out.push_back({wp, std::move(path)});
    }
    return out;
}

} // namespace

std::vector<Dubins2dCandidate> enumerate_dubins_2d(const BoundaryData& b) {
    std::vector<Dubins2dCandidate> out;
    for (const SolvedWord& sw : solve_words(b))
        out.push_back({sw.wp.word, sw.wp.t, sw.wp.p, sw.wp.q, sw.wp.t + sw.wp.p + sw.wp.q});
    return out;
}

DubinsPath solve_dubins_2d(const BoundaryData& b) {
    std::vector<SolvedWord> solved = solve_words(b);
    if (solved.empty())
        throw std::runtime_error(
            "solve_dubins_2d: no feasible word survives the admissibility check");
    const SolvedWord* best = &solved.front();
    for (const SolvedWord& sw : solved)
        if (sw.path.length < best->path.length) best = &sw;
    return best->path;
}

bool ccc_filter(const DubinsPath& path) {
    if (path.segments.size() != 3)
        throw std::invalid_argument("ccc_filter: path is not a three-arc word");
    for (const DubinsSegment& s : path.segments)
        if (s.kind != DubinsSegment::Kind::Arc)
            throw std::invalid_argument("ccc_filter: path is not a three-arc word");
    const double mid = path.segments[1].angle;
    return mid >= M_PI && mid < kTwoPi;
}

// ---------------------------------------------------------------------------
// CLC candidates in R^3.

namespace {

struct ClcEval {
    Vec3 a, b;       // arc exit / entry points
    Vec3 ta, tb;     // forward tangents there
    double seg_len;  // connecting chord length
    double residual[6];
    double max_residual;
    double total_length;
};

struct ClcFrame {
    // Orthonormal pairs spanning the planes of admissible circle centers.
    Vec3 u1p, u2p, u1q, u2q;
};

ClcEval eval_clc(const BoundaryData& bd, const ClcFrame& fr, const double x[4]) {
    const double phi1 = x[0], th1 = x[1], phi2 = x[2], th2 = x[3];
    ClcEval e;
    const Vec3 n1 = fr.u1p * std::cos(phi1) + fr.u2p * std::sin(phi1);
    const Vec3 n2 = fr.u1q * std::cos(phi2) + fr.u2q * std::sin(phi2);
    const Vec3 c1 = bd.p + n1;
    const Vec3 c2 = bd.q + n2;
    e.a = c1 - n1 * std::cos(th1) + bd.v * std::sin(th1);
    e.ta = n1 * std::sin(th1) + bd.v * std::cos(th1);
    e.b = c2 - n2 * std::cos(th2) - bd.w * std::sin(th2);
    e.tb = n2 * std::sin(th2) * -1.0 + bd.w * std::cos(th2);
    const Vec3 u = e.b - e.a;
    e.seg_len = u.norm();
    Vec3 s;
    if (e.seg_len > 1e-10) {
        s = u / e.seg_len;
        const Vec3 r1 = e.ta - s;
        const Vec3 r2 = e.tb - s;
        e.residual[0] = r1.x; e.residual[1] = r1.y; e.residual[2] = r1.z;
        e.residual[3] = r2.x; e.residual[4] = r2.y; e.residual[5] = r2.z;
    } else {
        const Vec3 r = e.ta - e.tb;
        e.residual[0] = r.x; e.residual[1] = r.y; e.residual[2] = r.z;
        e.residual[3] = e.residual[4] = e.residual[5] = 0.0;
    }
    e.max_residual = 0.0;
    for (const double r : e.residual) e.max_residual = std::max(e.max_residual, std::fabs(r));
    e.total_length = mod2pi(th1) + e.seg_len + mod2pi(th2);
    return e;
}

double clc_cost(const ClcEval& e) {
    double c = 0.0;
    for (const double r : e.residual) c += r * r;
    return c;
}

// Damped Gauss-Newton on the 6-vector tangent-mismatch residual.
bool clc_polish(const BoundaryData& bd, const ClcFrame& fr, double x[4], double tol) {
    double lambda = 1e-3;
    ClcEval e = eval_clc(bd, fr, x);
    double cost = clc_cost(e);
    for (int iter = 0; iter < 120; ++iter) {
        if (e.max_residual < 0.2 * tol) return true;
        double J[6][4];
        const double eps = 1e-7;
        for (int c = 0; c < 4; ++c) {
            double xt[4] = {x[0], x[1], x[2], x[3]};
            xt[c] += eps;
            const ClcEval ep = eval_clc(bd, fr, xt);
            for (int r = 0; r < 6; ++r) J[r][c] = (ep.residual[r] - e.residual[r]) / eps;
        }
        double A[4][4] = {};
        double g[4] = {};
        for (int r = 0; r < 6; ++r)
            for (int c1 = 0; c1 < 4; ++c1) {
                g[c1] += J[r][c1] * e.residual[r];
                for (int c2 = 0; c2 < 4; ++c2) A[c1][c2] += J[r][c1] * J[r][c2];
            }
        for (int c = 0; c < 4; ++c) A[c][c] += lambda * (A[c][c] + 1e-12);
        // Solve A dx = -g by Gaussian elimination with partial pivoting.
        double M[4][5];
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) M[r][c] = A[r][c];
            M[r][4] = -g[r];
        }
        bool singular = false;
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
            if (std::fabs(M[piv][col]) < 1e-14) {
                singular = true;
                break;
            }
            std::swap(M[piv], M[col]);
            for (int r = col + 1; r < 4; ++r) {
                const double f = M[r][col] / M[col][col];
                for (int c = col; c < 5; ++c) M[r][c] -= f * M[col][c];
            }
        }
        if (singular) {
            lambda *= 5.0;
            if (lambda > 1e10) return e.max_residual < tol;
            continue;
        }
        double dx[4];
        for (int r = 3; r >= 0; --r) {
            double acc = M[r][4];
            for (int c = r + 1; c < 4; ++c) acc -= M[r][c] * dx[c];
            dx[r] = acc / M[r][r];
        }
        double xt[4];
        for (int c = 0; c < 4; ++c) xt[c] = x[c] + std::clamp(dx[c], -0.5, 0.5);
        const ClcEval et = eval_clc(bd, fr, xt);
        const double cost_t = clc_cost(et);
        if (cost_t < cost) {
            std::copy(xt, xt + 4, x);
            e = et;
            cost = cost_t;
            lambda = std::max(lambda / 3.0, 1e-12);
        } else {
            lambda *= 5.0;
            if (lambda > 1e10) break;
        }
    }
    return e.max_residual < tol;
}

DubinsPath build_clc_path(const BoundaryData& bd, const ClcFrame& fr, const double x[4]) {
    const double th1 = mod2pi(x[1]);
    const double th2 = mod2pi(x[2 + 1]);
    const ClcEval e = eval_clc(bd, fr, x);
    DubinsPath path;
    Vec3 pos = bd.p;
    Vec3 heading = bd.v;
    if (th1 > 1e-11) {
        const Vec3 n1 = fr.u1p * std::cos(x[0]) + fr.u2p * std::sin(x[0]);
        // Rotation axis placing the marching arc's center at p + n1.
        const Vec3 axis = cross(bd.v, n1).normalized();
        append_arc(path.segments, pos, heading, axis, th1);
        path.word += 'C';
    }
    if (e.seg_len > 1e-11) {
        append_line(path.segments, pos, heading, e.seg_len);
        path.word += 'S';
    }
    if (th2 > 1e-11) {
        const Vec3 n2 = fr.u1q * std::cos(x[2]) + fr.u2q * std::sin(x[2]);
        const Vec3 axis = cross(e.tb, (bd.q + n2) - e.b).normalized();
        append_arc(path.segments, pos, heading, axis, th2);
        path.word += 'C';
    }
    if (path.segments.empty()) {
        append_line(path.segments, pos, heading, 0.0);
        path.word = "S";
    }
    path.length = 0.0;
    for (const DubinsSegment& s : path.segments) path.length += s.length();
    return path;
}

// Single-arc candidates: unit circles through p tangent to v that also pass
// through q with the right exit tangent.
void try_pure_arc(const BoundaryData& bd, const ClcFrame& fr, double tol,
                  std::vector<std::array<double, 4>>& out) {
    const Vec3 qp = bd.q - bd.p;
    const double A = dot(qp, fr.u1p);
    const double B = dot(qp, fr.u2p);
    const double target = qp.norm2() / 2.0;
    const double mag = std::hypot(A, B);
    if (mag < target - 1e-12 || mag <= 1e-15) return;
    const double base = std::atan2(B, A);
    const double off = std::acos(std::clamp(target / mag, -1.0, 1.0));
    for (const double phi : {base + off, base - off}) {
        const Vec3 n1 = fr.u1p * std::cos(phi) + fr.u2p * std::sin(phi);
        const Vec3 c1 = bd.p + n1;
        const Vec3 rq = bd.q - c1;
        const double ct = dot(rq, n1 * -1.0);
        const double st = dot(rq, bd.v);
        const double th = mod2pi(std::atan2(st, ct));
        // Verify the arc really ends at q with tangent w.
        const double x[4] = {phi, th, 0.0, 0.0};
        const ClcEval e = eval_clc(bd, fr, x);
        if (distance(e.a, bd.q) < 1e-9 && angle_between(e.ta, bd.w) < tol)
            out.push_back({phi, th, 0.0, 0.0});
    }
}

} // namespace

DubinsPath solve_clc_3d(const BoundaryData& b) { return solve_clc_3d(b, Clc3dConfig{}); }

DubinsPath solve_clc_3d(const BoundaryData& bd, const Clc3dConfig& cfg) {
    validate(bd);
    ClcFrame fr;
    fr.u1p = any_orthogonal(bd.v);
    fr.u2p = cross(bd.v, fr.u1p).normalized();
    fr.u1q = any_orthogonal(bd.w);
    fr.u2q = cross(bd.w, fr.u1q).normalized();

    DubinsPath best;
    double best_len = kInf;
    bool have = false;

    auto consider = [&](const double x[4]) {
        ClcEval e = eval_clc(bd, fr, x);
        if (e.max_residual > cfg.residual_tol) return;
        const double len = e.total_length;
        if (len >= best_len - 1e-12) return;
        DubinsPath path = build_clc_path(bd, fr, x);
        // Reject anything that does not meet the boundary data cleanly.
        if (distance(path.start_point(), bd.p) > 1e-7 ||
            distance(path.end_point(), bd.q) > 1e-7 ||
            angle_between(path.start_tangent(), bd.v) > 1e-7 ||
            angle_between(path.end_tangent(), bd.w) > 1e-7)
            return;
        if (path.c1_position_defect() > 1e-9 || path.c1_tangent_defect() > 1e-7) return;
        best = std::move(path);
        best_len = len;
        have = true;
    };

    // Exact straight line when admissible.
    if (angle_between(bd.v, bd.w) < 1e-12) {
        const Vec3 qp = bd.q - bd.p;
        if (qp.norm() < 1e-12 || angle_between(bd.v, qp) < 1e-12) {
            const double x[4] = {0.0, 0.0, 0.0, 0.0};
            consider(x);
        }
    }
    // Single-arc fits.
    std::vector<std::array<double, 4>> arc_seeds;
    try_pure_arc(bd, fr, cfg.residual_tol, arc_seeds);
    for (const auto& s : arc_seeds) consider(s.data());

    // Multi-start over the two circle parameters with an inner seeding scan
    // over the arc angles, then joint Gauss-Newton polish.
    for (int i1 = 0; i1 < cfg.grid; ++i1)
        for (int i2 = 0; i2 < cfg.grid; ++i2) {
            const double phi1 = kTwoPi * (i1 + 0.5) / cfg.grid;
            const double phi2 = kTwoPi * (i2 + 0.5) / cfg.grid;
            double seed[4] = {phi1, 0.0, phi2, 0.0};
            double seed_cost = kInf;
            for (int a = 0; a < cfg.theta_grid; ++a)
                for (int c = 0; c < cfg.theta_grid; ++c) {
                    const double x[4] = {phi1, kTwoPi * (a + 0.5) / cfg.theta_grid, phi2,
                                         kTwoPi * (c + 0.5) / cfg.theta_grid};
                    const double cost = clc_cost(eval_clc(bd, fr, x));
                    if (cost < seed_cost) {
                        seed_cost = cost;
                        seed[1] = x[1];
                        seed[3] = x[3];
                    }
                }
            if (clc_polish(bd, fr, seed, cfg.residual_tol)) {
                seed[1] = mod2pi(seed[1]);
                seed[3] = mod2pi(seed[3]);
                consider(seed);
            }
        }

    if (!have) throw std::runtime_error("solve_clc_3d: no CLC candidate");
    return best;
}

// ---------------------------------------------------------------------------
// Helicoidal arcs.

double helicoidal_equilibrium_tau(double zeta) {
    if (zeta < 0) throw std::invalid_argument("helicoidal_equilibrium_tau: zeta must be >= 0");
    auto f = [&](double tau) { return 2.0 - 2.0 * tau * tau - zeta * std::sqrt(tau); };
    double lo = 1e-12, hi = 1.0;
    if (f(hi) >= 0) return hi; // zeta == 0
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

HelicoidalArc integrate_helicoidal(double zeta, double tau0, double tau0_prime, double span,
                                   std::size_t n, HelicoidalOdeVariant variant) {
    if (zeta < 0) throw std::invalid_argument("integrate_helicoidal: zeta must be >= 0");
    if (!(tau0 > 0)) throw std::invalid_argument("integrate_helicoidal: tau0 must be positive");
    if (!(span > 0) || n < 2) throw std::invalid_argument("integrate_helicoidal: bad span or n");

    auto rhs = [&](double tau, double v) {
        const double slope_term = variant == HelicoidalOdeVariant::AsPrinted
                                      ? 1.5 * v / tau
                                      : 1.5 * v * v / tau;
        return slope_term - 2.0 * tau * tau * tau + 2.0 * tau -
               zeta * tau * std::sqrt(std::fabs(tau));
    };

    // Integrate tau on half-steps so the frame RK4 below sees exact values at
    // step midpoints.
    const std::size_t fine = 2 * n;
    const double h = span / static_cast<double>(fine);
    std::vector<double> tau_fine(fine + 1);
    double tau = tau0, v = tau0_prime;
    tau_fine[0] = tau;
    for (std::size_t k = 0; k < fine; ++k) {
        const double k1t = v, k1v = rhs(tau, v);
        const double k2t = v + 0.5 * h * k1v, k2v = rhs(tau + 0.5 * h * k1t, v + 0.5 * h * k1v);
        const double k3t = v + 0.5 * h * k2v, k3v = rhs(tau + 0.5 * h * k2t, v + 0.5 * h * k2v);
        const double k4t = v + h * k3v, k4v = rhs(tau + h * k3t, v + h * k3v);
        tau += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!(tau > 1e-9) || !std::isfinite(tau) || !std::isfinite(v))
            throw std::runtime_error("integrate_helicoidal: torsion left the positive cone at s=" +
                                     std::to_string(h * static_cast<double>(k + 1)));
        tau_fine[k + 1] = tau;
    }

    auto tau_of_s = [&](double s) {
        const double u = s / h;
        const double idx = std::round(u);
        if (std::fabs(u - idx) < 1e-9 && idx >= 0 && idx <= static_cast<double>(fine))
            return tau_fine[static_cast<std::size_t>(idx)];
        const std::size_t lo =
            std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, std::floor(u))), fine - 1);
        const double frac = u - static_cast<double>(lo);
        return tau_fine[lo] * (1.0 - frac) + tau_fine[lo + 1] * frac;
    };

    HelicoidalArc arc;
    arc.zeta = zeta;
    arc.tau0 = tau0;
    arc.tau0_prime = tau0_prime;
    arc.span = span;
    arc.tau.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) arc.tau[k] = tau_fine[2 * k];
    arc.curve = frenet_integrate(tau_of_s, span, n);
    return arc;
}

PolyCurve path_to_polycurve(const DubinsPath& path, std::size_t n) {
    if (n < 2) throw std::invalid_argument("path_to_polycurve: need at least 2 points");
    Component comp;
    comp.closed = false;
    comp.points.reserve(n);
    const double total = path.length;
    for (std::size_t k = 0; k < n; ++k) {
        double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
        Vec3 pt = path.segments.back().end;
        for (const DubinsSegment& seg : path.segments) {
            const double len = seg.length();
            if (s <= len || &seg == &path.segments.back()) {
                pt = seg.point_at(len > 0 ? std::clamp(s / len, 0.0, 1.0) : 0.0);
                break;
            }
            s -= len;
        }
        comp.points.push_back(pt);
    }
    PolyCurve out;
    out.components.push_back(std::move(comp));
    return out;
}

PolyCurve path_to_polycurve(const HelicoidalArc& arc, std::size_t n) {
    return resample_arclength(arc.curve, n);
}

} // namespace ropekit
