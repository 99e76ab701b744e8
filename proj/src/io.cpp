#include "curveprox/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

namespace curveprox {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

std::string exact_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

std::vector<Curve> parse_curves(std::istream& in, const std::string& source) {
  std::vector<Curve> curves;
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(text);
    } catch (const nlohmann::json::out_of_range&) {
      fail(source, line, "non-finite coordinate (number overflow)");
    } catch (const nlohmann::json::exception& e) {
      fail(source, line, std::string("malformed JSON (") + e.what() + ")");
    }
    if (!record.is_object()) fail(source, line, "record is not an object");
    if (!record.contains("id") || !record["id"].is_string()) fail(source, line, "missing string field 'id'");
    if (!record.contains("points") || !record["points"].is_array()) {
      fail(source, line, "missing array field 'points'");
    }
    Curve curve{record["id"].get<std::string>(), {}};
    for (const auto& p : record["points"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        fail(source, line, "each point must be an [x, y] pair of numbers");
      }
      const Point point{p[0].get<double>(), p[1].get<double>()};
      if (!is_finite(point)) fail(source, line, "non-finite coordinate");
      curve.vertices.push_back(point);
    }
    if (curve.vertices.empty()) fail(source, line, "curve '" + curve.id + "' has no points");
    if (!seen.insert(curve.id).second) fail(source, line, "duplicate id '" + curve.id + "'");
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<Curve> load_curves(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return parse_curves(in, path);
}

void write_curves(std::ostream& out, const std::vector<Curve>& curves) {
  for (const Curve& c : curves) {
    out << "{\"id\":" << nlohmann::json(c.id).dump() << ",\"points\":[";
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) out << ',';
      out << '[' << exact_number(c[k].x) << ',' << exact_number(c[k].y) << ']';
    }
    out << "]}\n";
  }
}

void save_curves(const std::string& path, const std::vector<Curve>& curves) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot write file");
  write_curves(out, curves);
}

Segment as_segment(const Curve& curve) {
  if (curve.size() != 2) {
    throw DataError("record '" + curve.id + "' is not a segment (" + std::to_string(curve.size()) +
                    " points)");
  }
  return {curve.id, curve[0], curve[1]};
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace curveprox
