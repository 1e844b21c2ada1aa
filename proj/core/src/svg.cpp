#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "fleetroute/export.hpp"
#include "json.hpp"

namespace fleetroute {

using nlohmann::json;

namespace {

constexpr double kMargin = 0.05;
constexpr double kDegenerateExtentM = 100.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Projection {
  double lat0 = 0.0;
  double lon0 = 0.0;
  double scale = 1.0;  // px per meter
  double canvas = 800.0;

  // Local equirectangular meters, then pixels (y grows downward).
  std::pair<double, double> operator()(double lon, double lat) const {
    constexpr double kDeg = std::numbers::pi / 180.0;
    const double x = (lon - lon0) * kDeg * std::cos(lat0 * kDeg) * kEarthRadiusM;
    const double y = (lat - lat0) * kDeg * kEarthRadiusM;
    return {canvas / 2.0 + x * scale, canvas / 2.0 - y * scale};
  }
};

}  // namespace

std::string render_svg(const std::string& geojson, int canvas_px) {
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::exception& e) {
    throw ExportError(std::string("render_svg: ") + e.what());
  }
  const auto& features = doc.at("features");
  if (features.empty()) throw ExportError("render_svg: empty FeatureCollection");
  if (canvas_px <= 0) throw ExportError("render_svg: canvas must be positive");

  double min_lon = std::numeric_limits<double>::infinity();
  double max_lon = -min_lon;
  double min_lat = min_lon;
  double max_lat = -min_lon;
  auto extend = [&](const json& pos) {
    const double lon = pos.at(0).get<double>();
    const double lat = pos.at(1).get<double>();
    min_lon = std::min(min_lon, lon);
    max_lon = std::max(max_lon, lon);
    min_lat = std::min(min_lat, lat);
    max_lat = std::max(max_lat, lat);
  };
  for (const auto& f : features) {
    const auto& g = f.at("geometry");
    if (g.at("type") == "LineString") {
      for (const auto& p : g.at("coordinates")) extend(p);
    } else {
      extend(g.at("coordinates"));
    }
  }

  Projection proj;
  proj.canvas = canvas_px;
  proj.lat0 = (min_lat + max_lat) / 2.0;
  proj.lon0 = (min_lon + max_lon) / 2.0;
  const auto [x0, y0] = proj(min_lon, min_lat);
  const auto [x1, y1] = proj(max_lon, max_lat);
  // proj.scale is 1 here, so these spans are meters.
  double span_m = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
  if (span_m < 1e-6) span_m = kDegenerateExtentM;
  proj.scale = canvas_px * (1.0 - 2.0 * kMargin) / span_m;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(canvas_px) + "\" height=\"" + std::to_string(canvas_px) +
         "\" viewBox=\"0 0 " + std::to_string(canvas_px) + " " +
         std::to_string(canvas_px) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (const auto& f : features) {
    const auto& g = f.at("geometry");
    if (g.at("type") != "LineString") continue;
    const auto& props = f.at("properties");
    out += "<polyline fill=\"none\" stroke=\"" +
           escape(props.value("color", std::string("#000000"))) +
           "\" stroke-width=\"3\" stroke-linejoin=\"round\" points=\"";
    bool first = true;
    for (const auto& p : g.at("coordinates")) {
      const auto [x, y] = proj(p.at(0).get<double>(), p.at(1).get<double>());
      if (!first) out += ' ';
      out += num(x) + "," + num(y);
      first = false;
    }
    out += "\"><title>trip " + std::to_string(props.value("trip", 0)) + " (" +
           escape(props.value("vehicle_type", std::string())) + ")</title></polyline>\n";
  }

  for (const auto& f : features) {
    const auto& g = f.at("geometry");
    if (g.at("type") != "Point") continue;
    const auto& props = f.at("properties");
    const auto kind = props.value("kind", std::string());
    const auto& c = g.at("coordinates");
    const auto [x, y] = proj(c.at(0).get<double>(), c.at(1).get<double>());
    const auto id = escape(props.value("id", std::string()));
    if (kind == "customer") {
      out += "<g><title>" + id + "</title><circle cx=\"" + num(x) + "\" cy=\"" + num(y) +
             "\" r=\"8\" fill=\"#ffffff\" stroke=\"" +
             escape(props.value("color", std::string("#000000"))) +
             "\" stroke-width=\"2\"/><text x=\"" + num(x) + "\" y=\"" + num(y + 3.5) +
             "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" +
             std::to_string(props.value("order", 0)) + "</text></g>\n";
    } else if (kind == "depot") {
      out += "<g><title>" + id + "</title><rect x=\"" + num(x - 7) + "\" y=\"" + num(y - 7) +
             "\" width=\"14\" height=\"14\" fill=\"#1f4e9c\" stroke=\"#000000\"/></g>\n";
    } else {
      out += "<g><title>" + id + "</title><polygon points=\"" + num(x) + "," + num(y - 6) +
             " " + num(x + 6) + "," + num(y) + " " + num(x) + "," + num(y + 6) + " " +
             num(x - 6) + "," + num(y) + "\" fill=\"#666666\"/></g>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fleetroute
