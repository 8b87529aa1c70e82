#include "ropekit/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ropekit {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("expected a 3-element number array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Shortest representation that round-trips exactly.
std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string curve_to_json(const PolyCurve& curve) {
    json root;
    root["components"] = json::array();
    for (const Component& c : curve.components) {
        json jc;
        jc["closed"] = c.closed;
        jc["points"] = json::array();
        for (const Vec3& p : c.points) jc["points"].push_back(vec_to_json(p));
        root["components"].push_back(std::move(jc));
    }
    return root.dump();
}

PolyCurve curve_from_json(const std::string& text) {
    const json root = json::parse(text);
    if (!root.contains("components") || !root["components"].is_array())
        throw std::invalid_argument("curve JSON: missing components array");
    PolyCurve curve;
    for (const json& jc : root["components"]) {
        Component c;
        c.closed = jc.value("closed", true);
        if (!jc.contains("points") || !jc["points"].is_array())
            throw std::invalid_argument("curve JSON: component without points");
        for (const json& jp : jc["points"]) c.points.push_back(vec_from_json(jp));
        curve.components.push_back(std::move(c));
    }
    return curve;
}

std::string boundary_to_json(const BoundaryData& b) {
    json root;
    root["p"] = vec_to_json(b.p);
    root["q"] = vec_to_json(b.q);
    root["v"] = vec_to_json(b.v);
    root["w"] = vec_to_json(b.w);
    return root.dump();
}

BoundaryData boundary_from_json(const std::string& text) {
    const json root = json::parse(text);
    for (const char* key : {"p", "q", "v", "w"})
        if (!root.contains(key))
            throw std::invalid_argument(std::string("boundary JSON: missing ") + key);
    BoundaryData b;
    b.p = vec_from_json(root["p"]);
    b.q = vec_from_json(root["q"]);
    b.v = vec_from_json(root["v"]);
    b.w = vec_from_json(root["w"]);
    return b;
}

std::string thickness_report_to_json(const ThicknessReport& rep) {
    json root;
    root["f_k"] = rep.f_k;
    root["dcsd"] = rep.dcsd;
    root["nir"] = rep.nir;
    root["length"] = rep.length;
    root["ropelength"] = rep.ropelength;
    root["pair_tol"] = rep.pair_tol;
    if (rep.ball_radius) root["ball_radius"] = *rep.ball_radius;
    if (rep.global_radius_min) root["global_radius_min"] = *rep.global_radius_min;
    if (rep.focal_min) {
        root["focal_min"] = *rep.focal_min;
        root["focal_capped"] = rep.focal_capped;
    }
    root["minimal_pairs"] = json::array();
    for (const DoubleCriticalPair& p : rep.minimal_pairs) {
        json jp;
        jp["comp_i"] = p.comp_i;
        jp["comp_j"] = p.comp_j;
        jp["s"] = p.s;
        jp["t"] = p.t;
        jp["p"] = vec_to_json(p.p);
        jp["q"] = vec_to_json(p.q);
        jp["dist"] = p.dist;
        jp["r1"] = p.r1;
        jp["r2"] = p.r2;
        root["minimal_pairs"].push_back(std::move(jp));
    }
    return root.dump();
}

std::string pairs_to_csv(const std::vector<DoubleCriticalPair>& pairs) {
    std::ostringstream os;
    os << "s,t,dist,r1,r2\n";
    for (const DoubleCriticalPair& p : pairs)
        os << fmt_double(p.s) << ',' << fmt_double(p.t) << ',' << fmt_double(p.dist) << ','
           << fmt_double(p.r1) << ',' << fmt_double(p.r2) << '\n';
    return os.str();
}

std::string trace_to_csv(const TightenTrace& trace) {
    std::ostringstream os;
    os << "iter,length,nir,dcsd,maxk,ropelength,accepted\n";
    for (const TightenTraceRow& r : trace.rows)
        os << r.iter << ',' << fmt_double(r.length) << ',' << fmt_double(r.nir) << ','
           << fmt_double(r.dcsd) << ',' << fmt_double(r.max_kappa) << ','
           << fmt_double(r.ropelength) << ',' << (r.accepted ? 1 : 0) << '\n';
    return os.str();
}

std::string dubins_path_to_json(const DubinsPath& path) {
    json root;
    root["word"] = path.word;
    root["length"] = path.length;
    root["segments"] = json::array();
    for (const DubinsSegment& s : path.segments) {
        json js;
        if (s.kind == DubinsSegment::Kind::Arc) {
            js["type"] = "arc";
            js["center"] = vec_to_json(s.center);
            js["normal"] = vec_to_json(s.normal);
            js["start"] = vec_to_json(s.start);
            js["angle"] = s.angle;
            js["radius"] = 1.0;
        } else {
            js["type"] = "line";
            js["start"] = vec_to_json(s.start);
            js["end"] = vec_to_json(s.end);
        }
        root["segments"].push_back(std::move(js));
    }
    return root.dump();
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace ropekit
