#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "curveprox/geometry.hpp"

namespace curveprox {

/// Raised for unreadable or malformed data files; messages carry file and line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads line-delimited records {"id": "...", "points": [[x, y], ...]}.
/// Blank lines are skipped.
std::vector<Curve> parse_curves(std::istream& in, const std::string& source);
std::vector<Curve> load_curves(const std::string& path);

void write_curves(std::ostream& out, const std::vector<Curve>& curves);
void save_curves(const std::string& path, const std::vector<Curve>& curves);

/// Segment view of a two-vertex record.
Segment as_segment(const Curve& curve);

/// Number with 12 significant digits, JSON-compatible.
std::string format_number(double value);

}  // namespace curveprox
