#include "ropekit/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ropekit {

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

double Component::length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) len += distance(points[i], points[i + 1]);
    if (closed && points.size() > 1) len += distance(points.back(), points.front());
    return len;
}

Vec3 Component::centroid() const {
    Vec3 c{0, 0, 0};
    for (const Vec3& p : points) c += p;
    return points.empty() ? c : c / static_cast<double>(points.size());
}

std::vector<double> Component::vertex_arclengths() const {
    std::vector<double> s(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i)
        s[i] = s[i - 1] + distance(points[i - 1], points[i]);
    return s;
}

double PolyCurve::total_length() const {
    double len = 0.0;
    for (const Component& c : components) len += c.length();
    return len;
}

std::size_t PolyCurve::total_points() const {
    std::size_t n = 0;
    for (const Component& c : components) n += c.size();
    return n;
}

void validate(const PolyCurve& curve) {
    if (curve.components.empty()) throw std::invalid_argument("curve has no components");
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const Component& c = curve.components[ci];
        if (c.closed && c.points.size() < 8)
            throw std::invalid_argument("closed component " + std::to_string(ci) +
                                        " has fewer than 8 points");
        if (!c.closed && c.points.size() < 2)
            throw std::invalid_argument("open component " + std::to_string(ci) +
                                        " has fewer than 2 points");
        const std::size_t m = c.edge_count();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3& a = c.points[i];
            const Vec3& b = c.points[(i + 1) % c.points.size()];
            if (distance(a, b) <= 1e-12)
                throw std::invalid_argument("component " + std::to_string(ci) +
                                            ": consecutive points coincide at vertex " +
                                            std::to_string(i));
        }
    }
    // Vertex-resolution self-intersection check over the whole link.
    std::vector<const Vec3*> all;
    for (const Component& c : curve.components)
        for (const Vec3& p : c.points) all.push_back(&p);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (distance(*all[i], *all[j]) <= 1e-12)
                throw std::invalid_argument("two points of the link coincide");
}

namespace {

// Position at arclength s along the polygon (linear on edges). s is taken
// mod length for closed components and clamped for open ones.
Vec3 eval_at_arclength(const Component& c, const std::vector<double>& s, double total,
                       double query) {
    if (c.closed) {
        query = std::fmod(query, total);
        if (query < 0) query += total;
    } else {
        query = std::clamp(query, 0.0, total);
    }
    // s is ascending; find the edge containing query.
    const auto it = std::upper_bound(s.begin(), s.end(), query);
    std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin() - 1);
    const std::size_t n = c.points.size();
    if (i >= c.edge_count()) i = c.edge_count() - 1;
    const Vec3& a = c.points[i];
    const Vec3& b = c.points[(i + 1) % n];
    const double edge_start = s[i];
    const double edge_len = (i + 1 < n ? s[i + 1] : total) - edge_start;
    const double u = edge_len > 0 ? (query - edge_start) / edge_len : 0.0;
    return a + (b - a) * u;
}

} // namespace

PolyCurve resample_arclength(const PolyCurve& curve, std::size_t n) {
    validate(curve);
    if (n < 8) throw std::invalid_argument("resample_arclength: n must be >= 8");
    PolyCurve out;
    out.components.reserve(curve.components.size());
    for (const Component& c : curve.components) {
        const double total = c.length();
        if (total <= 0) throw std::invalid_argument("resample_arclength: degenerate component");
        std::vector<double> s = c.vertex_arclengths();
        Component r;
        r.closed = c.closed;
        r.points.reserve(n);
        const double step = c.closed ? total / static_cast<double>(n)
                                     : total / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k)
            r.points.push_back(eval_at_arclength(c, s, total, step * static_cast<double>(k)));
        if (c.closed) {
            // Chords cut corners of the input polygon; rescale about the
            // centroid so total length is preserved.
            const double got = r.length();
            if (got > 0) {
                const double factor = total / got;
                const Vec3 ctr = r.centroid();
                for (Vec3& p : r.points) p = ctr + (p - ctr) * factor;
            }
        }
        out.components.push_back(std::move(r));
    }
    return out;
}

CurvatureProfile discrete_curvature(const PolyCurve& curve) {
    CurvatureProfile prof;
    prof.kappa.resize(curve.components.size());
    prof.arclength.resize(curve.components.size());
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const Component& c = curve.components[ci];
        const std::size_t n = c.points.size();
        prof.arclength[ci] = c.vertex_arclengths();
        std::vector<double>& k = prof.kappa[ci];
        k.assign(n, 0.0);
        if (n < 3) continue;
        const std::size_t first = c.closed ? 0 : 1;
        const std::size_t last = c.closed ? n : n - 1;
        for (std::size_t i = first; i < last; ++i) {
            const Vec3& prev = c.points[(i + n - 1) % n];
            const Vec3& cur = c.points[i];
            const Vec3& next = c.points[(i + 1) % n];
            const Vec3 e0 = cur - prev;
            const Vec3 e1 = next - cur;
            const double l0 = e0.norm();
            const double l1 = e1.norm();
            if (l0 <= 1e-12 || l1 <= 1e-12)
                throw std::invalid_argument("discrete_curvature: zero-length edge");
            const double theta = angle_between(e0, e1);
            k[i] = theta / (0.5 * (l0 + l1));
            prof.max_kappa = std::max(prof.max_kappa, k[i]);
        }
    }
    return prof;
}

FrameField frenet_frames(const PolyCurve& curve, double kappa_floor) {
    const CurvatureProfile prof = discrete_curvature(curve);
    FrameField f;
    const std::size_t nc = curve.components.size();
    f.tangent.resize(nc);
    f.normal.resize(nc);
    f.binormal.resize(nc);
    f.arclength = prof.arclength;
    f.tau.resize(nc);
    f.chirality.resize(nc);
    f.defined.resize(nc);
    f.tau_defined.resize(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        const Component& c = curve.components[ci];
        const std::size_t n = c.points.size();
        f.tangent[ci].assign(n, Vec3{});
        f.normal[ci].assign(n, Vec3{});
        f.binormal[ci].assign(n, Vec3{});
        f.tau[ci].assign(n, 0.0);
        f.chirality[ci].assign(n, 0);
        f.defined[ci].assign(n, false);
        f.tau_defined[ci].assign(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 d;
            if (c.closed) {
                d = c.points[(i + 1) % n] - c.points[(i + n - 1) % n];
            } else if (i == 0) {
                d = c.points[1] - c.points[0];
            } else if (i + 1 == n) {
                d = c.points[n - 1] - c.points[n - 2];
            } else {
                d = c.points[i + 1] - c.points[i - 1];
            }
            f.tangent[ci][i] = d.normalized();
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!c.closed && (i == 0 || i + 1 == n)) continue;
            if (prof.kappa[ci][i] <= kappa_floor) continue;
            const Vec3& t = f.tangent[ci][i];
            const Vec3 dt = f.tangent[ci][(i + 1) % n] - f.tangent[ci][(i + n - 1) % n];
            const Vec3 rej = dt - t * dot(dt, t);
            if (rej.norm() <= 1e-12) continue;
            f.normal[ci][i] = rej.normalized();
            f.binormal[ci][i] = cross(t, f.normal[ci][i]).normalized();
            f.defined[ci][i] = true;
        }
        // tau from the centered derivative of B projected on N; reported
        // non-negative, with handedness in the chirality flag.
        const std::vector<double>& s = f.arclength[ci];
        const double total = c.length();
        for (std::size_t i = 0; i < n; ++i) {
            if (!f.defined[ci][i]) continue;
            const std::size_t ip = (i + 1) % n;
            const std::size_t im = (i + n - 1) % n;
            if (!c.closed && (i == 0 || i + 1 == n)) continue;
            if (!f.defined[ci][ip] || !f.defined[ci][im]) continue;
            double ds = s[ip] - s[im];
            if (c.closed) {
                if (i == 0) ds = s[ip] + (total - s[im]);
                if (i + 1 == n) ds = (total - s[im]) + s[ip];
            }
            if (ds <= 0) continue;
            const Vec3 db = (f.binormal[ci][ip] - f.binormal[ci][im]) / ds;
            const double signed_tau = -dot(db, f.normal[ci][i]);
            f.tau[ci][i] = std::fabs(signed_tau);
            f.chirality[ci][i] = signed_tau > 0 ? 1 : (signed_tau < 0 ? -1 : 0);
            f.tau_defined[ci][i] = true;
        }
    }
    return f;
}

ArclengthView::ArclengthView(const Component& c) : comp_(&c) {
    s_ = c.vertex_arclengths();
    total_ = c.length();
    const std::size_t n = c.points.size();
    tangent_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 d;
        if (!c.closed && i == 0) {
            d = c.points[1] - c.points[0];
        } else if (!c.closed && i + 1 == n) {
            d = c.points[n - 1] - c.points[n - 2];
        } else {
            // Edge-length-weighted difference: second-order accurate even
            // when the adjacent edges differ (plain central differences are
            // only first order there).
            const Vec3& pm = c.points[(i + n - 1) % n];
            const Vec3& pc = c.points[i];
            const Vec3& pp = c.points[(i + 1) % n];
            const double e0 = distance(pc, pm);
            const double e1 = distance(pp, pc);
            d = (pp - pc) * (e0 / e1) + (pc - pm) * (e1 / e0);
        }
        tangent_[i] = d.normalized();
    }
}

double ArclengthView::wrap(double s) const {
    if (comp_->closed) {
        s = std::fmod(s, total_);
        if (s < 0) s += total_;
        return s;
    }
    return std::clamp(s, 0.0, total_);
}

Vec3 ArclengthView::point_at(double s) const {
    s = wrap(s);
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin() - 1);
    const std::size_t n = comp_->points.size();
    if (i >= comp_->edge_count()) i = comp_->edge_count() - 1;
    const Vec3& a = comp_->points[i];
    const Vec3& b = comp_->points[(i + 1) % n];
    const double start = s_[i];
    const double len = (i + 1 < n ? s_[i + 1] : total_) - start;
    const double u = len > 0 ? (s - start) / len : 0.0;
    return a + (b - a) * u;
}

Vec3 ArclengthView::tangent_at(double s) const {
    s = wrap(s);
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin() - 1);
    const std::size_t n = comp_->points.size();
    if (i >= comp_->edge_count()) i = comp_->edge_count() - 1;
    const double start = s_[i];
    const double len = (i + 1 < n ? s_[i + 1] : total_) - start;
    const double u = len > 0 ? (s - start) / len : 0.0;
    const Vec3 blend = tangent_[i] * (1.0 - u) + tangent_[(i + 1) % n] * u;
    const double bn = blend.norm();
    return bn > 1e-12 ? blend / bn : tangent_[i];
}

double ArclengthView::separation(double a, double b) const {
    double d = std::fabs(wrap(a) - wrap(b));
    if (comp_->closed) d = std::min(d, total_ - d);
    return d;
}

namespace {

struct FrameState {
    Vec3 p, t, n, b;
};

FrameState frame_derivative(const FrameState& y, double tau) {
    FrameState d;
    d.p = y.t;
    d.t = y.n;                    // kappa == 1
    d.n = -y.t + y.b * tau;
    d.b = -y.n * tau;
    return d;
}

FrameState axpy(const FrameState& y, const FrameState& d, double h) {
    return {y.p + d.p * h, y.t + d.t * h, y.n + d.n * h, y.b + d.b * h};
}

void renormalize(FrameState& y) {
    y.t = y.t.normalized();
    y.n = (y.n - y.t * dot(y.n, y.t)).normalized();
    y.b = cross(y.t, y.n);
}

} // namespace

PolyCurve frenet_integrate(const std::function<double(double)>& tau_of_s,
                           double length, std::size_t n, const FramePose& start) {
    if (n == 0) throw std::invalid_argument("frenet_integrate: n must be positive");
    if (!(length > 0)) throw std::invalid_argument("frenet_integrate: length must be positive");
    const double ortho = std::fabs(dot(start.t, start.n)) + std::fabs(dot(start.t, start.b)) +
                         std::fabs(dot(start.n, start.b)) + std::fabs(start.t.norm() - 1.0) +
                         std::fabs(start.n.norm() - 1.0) + std::fabs(start.b.norm() - 1.0);
    if (ortho > 1e-6) throw std::invalid_argument("frenet_integrate: start frame not orthonormal");

    const double h = length / static_cast<double>(n);
    FrameState y{start.point, start.t, start.n, start.b};
    Component comp;
    comp.closed = false;
    comp.points.reserve(n + 1);
    comp.points.push_back(y.p);
    auto tau_at = [&](double s) {
        const double v = tau_of_s(s);
        if (!std::isfinite(v))
            throw std::runtime_error("frenet_integrate: non-finite torsion at s=" +
                                     std::to_string(s));
        return v;
    };
    for (std::size_t k = 0; k < n; ++k) {
        const double s = h * static_cast<double>(k);
        const double t0 = tau_at(s);
        const double t1 = tau_at(s + 0.5 * h);
        const double t2 = tau_at(s + h);
        const FrameState k1 = frame_derivative(y, t0);
        const FrameState k2 = frame_derivative(axpy(y, k1, 0.5 * h), t1);
        const FrameState k3 = frame_derivative(axpy(y, k2, 0.5 * h), t1);
        const FrameState k4 = frame_derivative(axpy(y, k3, h), t2);
        y.p = y.p + (k1.p + k2.p * 2.0 + k3.p * 2.0 + k4.p) * (h / 6.0);
        y.t = y.t + (k1.t + k2.t * 2.0 + k3.t * 2.0 + k4.t) * (h / 6.0);
        y.n = y.n + (k1.n + k2.n * 2.0 + k3.n * 2.0 + k4.n) * (h / 6.0);
        y.b = y.b + (k1.b + k2.b * 2.0 + k3.b * 2.0 + k4.b) * (h / 6.0);
        renormalize(y);
        comp.points.push_back(y.p);
    }
    PolyCurve out;
    out.components.push_back(std::move(comp));
    return out;
}

PolyCurve make_torus_knot(int p, int q, double R, double r, std::size_t n) {
    if (std::gcd(std::abs(p), std::abs(q)) != 1)
        throw std::invalid_argument("make_torus_knot: gcd(p, q) must be 1");
    if (!(R > r && r > 0)) throw std::invalid_argument("make_torus_knot: need R > r > 0");
    if (n < 64) throw std::invalid_argument("make_torus_knot: n must be >= 64");
    Component c;
    c.closed = true;
    c.points.reserve(n);
    const double step = 2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = step * static_cast<double>(k);
        const double w = R + r * std::cos(q * t);
        c.points.push_back({w * std::cos(p * t), w * std::sin(p * t), r * std::sin(q * t)});
    }
    PolyCurve out;
    out.components.push_back(std::move(c));
    validate(out);
    return out;
}

PolyCurve make_circle(double radius, std::size_t n) {
    Component c;
    c.closed = true;
    c.points.reserve(n);
    const double step = 2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        c.points.push_back({radius * std::cos(step * k), radius * std::sin(step * k), 0.0});
    PolyCurve out;
    out.components.push_back(std::move(c));
    return out;
}

PolyCurve make_ellipse(double a, double b, std::size_t n) {
    // Sample the parameter densely, then equal-arclength resample.
    const std::size_t dense = std::max<std::size_t>(4 * n, 512);
    Component c;
    c.closed = true;
    c.points.reserve(dense);
    const double step = 2.0 * M_PI / static_cast<double>(dense);
    for (std::size_t k = 0; k < dense; ++k)
        c.points.push_back({a * std::cos(step * k), b * std::sin(step * k), 0.0});
    PolyCurve out;
    out.components.push_back(std::move(c));
    return resample_arclength(out, n);
}

PolyCurve make_stadium(double radius, double straight, std::size_t n) {
    const double total = 2.0 * straight + 2.0 * M_PI * radius;
    const double hx = straight / 2.0;
    Component c;
    c.closed = true;
    c.points.reserve(n);
    const double step = total / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = step * static_cast<double>(k);
        Vec3 p;
        if (s < straight) { // bottom straight, left to right
            p = {-hx + s, -radius, 0.0};
        } else if (s < straight + M_PI * radius) { // right semicircle
            const double a = (s - straight) / radius;
            p = {hx + radius * std::sin(a), -radius * std::cos(a), 0.0};
        } else if (s < 2.0 * straight + M_PI * radius) { // top straight, right to left
            const double u = s - straight - M_PI * radius;
            p = {hx - u, radius, 0.0};
        } else { // left semicircle
            const double a = (s - 2.0 * straight - M_PI * radius) / radius;
            p = {-hx - radius * std::sin(a), radius * std::cos(a), 0.0};
        }
        c.points.push_back(p);
    }
    PolyCurve out;
    out.components.push_back(std::move(c));
    return out;
}

PolyCurve make_helix(double tau, double span, std::size_t n) {
    // Unit curvature, torsion tau: radius a = 1/(1+tau^2), pitch b = tau/(1+tau^2),
    // arclength parameter s = t * sqrt(a^2 + b^2).
    const double denom = 1.0 + tau * tau;
    const double a = 1.0 / denom;
    const double b = tau / denom;
    const double speed = std::sqrt(a * a + b * b);
    Component c;
    c.closed = false;
    c.points.reserve(n);
    const double step = span / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = step * static_cast<double>(k) / speed;
        c.points.push_back({a * std::cos(t), a * std::sin(t), b * t});
    }
    PolyCurve out;
    out.components.push_back(std::move(c));
    return out;
}

} // namespace ropekit
