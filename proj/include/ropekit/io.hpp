#pragma once

#include <string>

#include "ropekit/curve.hpp"
#include "ropekit/dubins.hpp"
#include "ropekit/thickness.hpp"
#include "ropekit/tighten.hpp"

namespace ropekit {

// Curve JSON: {"components":[{"closed":true,"points":[[x,y,z],...]}]}.
std::string curve_to_json(const PolyCurve& curve);
PolyCurve curve_from_json(const std::string& text);

// {"p":[...],"q":[...],"v":[...],"w":[...]}.
std::string boundary_to_json(const BoundaryData& b);
BoundaryData boundary_from_json(const std::string& text);

std::string thickness_report_to_json(const ThicknessReport& rep);

// Minimal pairs as CSV rows `s,t,dist,r1,r2` (header included).
std::string pairs_to_csv(const std::vector<DoubleCriticalPair>& pairs);

// Trace as CSV rows `iter,length,nir,dcsd,maxk,ropelength,accepted`.
std::string trace_to_csv(const TightenTrace& trace);

std::string dubins_path_to_json(const DubinsPath& path);

// Writes via a temporary file in the same directory plus an atomic rename,
// so failures never leave partial output behind.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

} // namespace ropekit
