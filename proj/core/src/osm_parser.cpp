#include <expat.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <memory>
#include <set>
#include <string_view>

#include "fleetroute/osmnet.hpp"

namespace fleetroute {
namespace {

// Distinct nodes sharing a coordinate still need a positive edge length.
constexpr double kMinEdgeLengthM = 0.01;

struct PendingWay {
  NodeId id = 0;
  std::vector<NodeId> refs;
  std::string highway;
  bool oneway = false;
};

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

const char* find_attr(const XML_Char** attrs, const char* name) {
  for (int i = 0; attrs[i] != nullptr; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

class OsmHandler {
 public:
  explicit OsmHandler(XML_Parser parser) : parser_(parser) {}

  static void on_start(void* self, const XML_Char* name,
                       const XML_Char** attrs) {
    static_cast<OsmHandler*>(self)->start(name, attrs);
  }
  static void on_end(void* self, const XML_Char* name) {
    static_cast<OsmHandler*>(self)->end(name);
  }

  bool failed() const { return error_.has_value(); }
  const ParseError& error() const { return *error_; }

  std::map<NodeId, GeoPoint>& nodes() { return nodes_; }
  std::vector<PendingWay>& ways() { return ways_; }

 private:
  void fail(const std::string& message) {
    if (error_) return;
    error_.emplace(message + " at line " +
                       std::to_string(XML_GetCurrentLineNumber(parser_)),
                   XML_GetCurrentLineNumber(parser_),
                   XML_GetCurrentColumnNumber(parser_) + 1);
    XML_StopParser(parser_, XML_FALSE);
  }

  void start(const XML_Char* name, const XML_Char** attrs) {
    const std::string_view tag(name);
    if (tag == "node") {
      read_node(attrs);
    } else if (tag == "way") {
      const char* id = find_attr(attrs, "id");
      PendingWay way;
      if (id == nullptr || !parse_number(id, way.id)) {
        fail("way without a valid id");
        return;
      }
      current_ = std::move(way);
    } else if (tag == "nd" && current_) {
      const char* ref = find_attr(attrs, "ref");
      NodeId node = 0;
      if (ref == nullptr || !parse_number(ref, node)) {
        fail("way " + std::to_string(current_->id) + ": invalid nd ref");
        return;
      }
      current_->refs.push_back(node);
    } else if (tag == "tag" && current_) {
      const char* k = find_attr(attrs, "k");
      const char* v = find_attr(attrs, "v");
      if (k == nullptr || v == nullptr) return;
      if (std::strcmp(k, "highway") == 0) {
        current_->highway = v;
      } else if (std::strcmp(k, "oneway") == 0) {
        current_->oneway = std::strcmp(v, "yes") == 0;
      }
    }
  }

  void end(const XML_Char* name) {
    if (std::strcmp(name, "way") == 0 && current_) {
      if (!current_->highway.empty()) ways_.push_back(std::move(*current_));
      current_.reset();
    }
  }

  void read_node(const XML_Char** attrs) {
    const char* id = find_attr(attrs, "id");
    const char* lat = find_attr(attrs, "lat");
    const char* lon = find_attr(attrs, "lon");
    NodeId node = 0;
    GeoPoint p;
    if (id == nullptr || !parse_number(id, node)) {
      fail("node without a valid id");
      return;
    }
    if (lat == nullptr || lon == nullptr || !parse_number(lat, p.lat) ||
        !parse_number(lon, p.lon) || !in_bounds(p)) {
      fail("node " + std::to_string(node) + ": invalid coordinates");
      return;
    }
    nodes_[node] = p;
  }

  XML_Parser parser_;
  std::optional<ParseError> error_;
  std::map<NodeId, GeoPoint> nodes_;
  std::vector<PendingWay> ways_;
  std::optional<PendingWay> current_;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

RoadNetwork parse_osm_xml(std::istream& source) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(
      XML_ParserCreate(nullptr));
  if (!parser) throw Error("could not allocate XML parser");

  OsmHandler handler(parser.get());
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(parser.get(), &OsmHandler::on_start,
                        &OsmHandler::on_end);

  std::array<char, 1 << 16> buffer{};
  for (;;) {
    source.read(buffer.data(), buffer.size());
    const auto got = static_cast<int>(source.gcount());
    const bool done = got < static_cast<int>(buffer.size());
    if (XML_Parse(parser.get(), buffer.data(), got, done ? 1 : 0) ==
        XML_STATUS_ERROR) {
      if (handler.failed()) throw handler.error();
      const auto line = XML_GetCurrentLineNumber(parser.get());
      const auto column = XML_GetCurrentColumnNumber(parser.get()) + 1;
      throw ParseError("parse error at line " + std::to_string(line) +
                           ", column " + std::to_string(column) + ": " +
                           XML_ErrorString(XML_GetErrorCode(parser.get())),
                       line, column);
    }
    if (done) break;
  }

  auto& all_nodes = handler.nodes();
  RoadNetwork net;
  std::set<NodeId> used;
  for (const auto& way : handler.ways()) {
    for (const NodeId ref : way.refs) {
      if (!all_nodes.contains(ref)) {
        throw ParseError("way " + std::to_string(way.id) +
                         " references missing node " + std::to_string(ref));
      }
    }
    for (std::size_t i = 1; i < way.refs.size(); ++i) {
      const NodeId a = way.refs[i - 1];
      const NodeId b = way.refs[i];
      if (a == b) continue;
      const double length =
          std::max(kMinEdgeLengthM, haversine_m(all_nodes[a], all_nodes[b]));
      net.edges.push_back({a, b, length, way.highway, way.oneway});
      used.insert(a);
      used.insert(b);
    }
  }
  if (net.edges.empty()) throw ParseError("empty network: no highway edges");
  for (const NodeId id : used) net.nodes.emplace(id, all_nodes[id]);
  return net;
}

}  // namespace fleetroute
