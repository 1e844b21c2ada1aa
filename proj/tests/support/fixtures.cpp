#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "json.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using namespace fleetroute;

GeoPoint offset(const GeoPoint& origin, double north_m, double east_m) {
  constexpr double kMetersPerDegree = 111195.0;
  const double pi = std::acos(-1.0);
  return {origin.lat + north_m / kMetersPerDegree,
          origin.lon + east_m / (kMetersPerDegree * std::cos(origin.lat * pi / 180.0))};
}

VehicleProfile profile(const std::string& name, std::map<std::string, double> speeds,
                       std::vector<std::string> blocked) {
  VehicleProfile p;
  p.name = name;
  p.speeds = std::move(speeds);
  for (const auto& cls : blocked) p.access[cls] = false;
  return p;
}

namespace {

void add_edge(RoadNetwork& net, NodeId a, NodeId b, const std::string& cls, bool oneway) {
  const double len = std::max(0.01, haversine_m(net.nodes.at(a), net.nodes.at(b)));
  net.edges.push_back({a, b, len, cls, oneway});
}

}  // namespace

RoadNetwork random_network(Rng& rng, const RandomNetworkSpec& spec) {
  RoadNetwork net;
  const GeoPoint origin{19.75, -72.21};
  std::uniform_real_distribution<double> coord(0.0, spec.box_m);
  std::uniform_int_distribution<NodeId> id_dist(1, 1'000'000);
  std::set<NodeId> used;
  std::vector<NodeId> ids;
  while (static_cast<int>(ids.size()) < spec.nodes) {
    const NodeId id = id_dist(rng);
    if (used.insert(id).second) ids.push_back(id);
  }
  for (const NodeId id : ids) net.nodes[id] = offset(origin, coord(rng), coord(rng));

  std::uniform_int_distribution<std::size_t> cls(0, spec.classes.size() - 1);
  std::bernoulli_distribution oneway(spec.oneway_probability);
  for (int i = 1; i < spec.nodes; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    const NodeId a = ids[parent(rng)];
    const NodeId b = ids[i];
    if (std::bernoulli_distribution(0.5)(rng)) {
      add_edge(net, a, b, spec.classes[cls(rng)], oneway(rng));
    } else {
      add_edge(net, b, a, spec.classes[cls(rng)], oneway(rng));
    }
  }
  if (spec.nodes >= 2) {
    std::uniform_int_distribution<int> pick(0, spec.nodes - 1);
    for (int e = 0; e < spec.extra_edges; ++e) {
      const int a = pick(rng);
      int b = pick(rng);
      if (a == b) b = (b + 1) % spec.nodes;
      add_edge(net, ids[a], ids[b], spec.classes[cls(rng)], oneway(rng));
    }
  }
  return net;
}

RoadNetwork grid_network(int rows, int cols, double step_m, const std::string& cls,
                         GeoPoint origin) {
  RoadNetwork net;
  auto id = [&](int r, int c) { return static_cast<NodeId>(1 + r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) net.nodes[id(r, c)] = offset(origin, r * step_m, c * step_m);
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) add_edge(net, id(r, c), id(r, c + 1), cls, false);
      if (r + 1 < rows) add_edge(net, id(r, c), id(r + 1, c), cls, false);
    }
  }
  return net;
}

std::string to_osm_xml(const RoadNetwork& net) {
  std::ostringstream out;
  out.precision(12);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osm version=\"0.6\">\n";
  for (const auto& [id, p] : net.nodes) {
    out << "  <node id=\"" << id << "\" lat=\"" << p.lat << "\" lon=\"" << p.lon << "\"/>\n";
  }
  long long way = 1;
  for (const auto& e : net.edges) {
    out << "  <way id=\"" << way++ << "\">\n"
        << "    <nd ref=\"" << e.from << "\"/>\n    <nd ref=\"" << e.to << "\"/>\n"
        << "    <tag k=\"highway\" v=\"" << e.road_class << "\"/>\n";
    if (e.oneway) out << "    <tag k=\"oneway\" v=\"yes\"/>\n";
    out << "  </way>\n";
  }
  out << "</osm>\n";
  return out.str();
}

ProblemInstance instance_from_costs(const std::vector<std::vector<std::vector<Seconds>>>& costs,
                                    const std::vector<int>& demands,
                                    const std::vector<int>& capacities) {
  if (costs.size() != capacities.size()) throw std::invalid_argument("one matrix per type");
  const std::size_t n = demands.size();
  const GeoPoint origin{19.76, -72.20};
  ProblemInstance inst;
  inst.depot = {"depot", origin, FacilityKind::depot};
  inst.depot_snap = {"depot", 0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    Customer c;
    c.id = "c" + std::to_string(i + 1);
    c.location = offset(origin, 1000.0 * static_cast<double>(i + 1), 0.0);
    c.buckets = demands[i];
    c.zone = "z";
    inst.customers.push_back(c);
    inst.customer_snaps.push_back({c.id, static_cast<NodeId>(i + 1), 0.0});
  }
  for (std::size_t t = 0; t < capacities.size(); ++t) {
    const std::string name = "t" + std::to_string(t);
    inst.fleet.push_back({name, capacities[t], "p" + std::to_string(t), 1});
    CostMatrixSet m;
    m.profile = "p" + std::to_string(t);
    for (std::size_t i = 0; i <= n; ++i) m.points.push_back(static_cast<NodeId>(i));
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = 0; b <= n; ++b) {
        const Seconds s = costs[t].at(a).at(b);
        m.time_s.push_back(s);
        m.dist_m.push_back(s == kUnreachable ? std::numeric_limits<double>::infinity()
                                             : static_cast<double>(s));
      }
    }
    inst.matrices.emplace(m.profile, std::move(m));
  }
  return inst;
}

ProblemInstance random_instance(Rng& rng, const RandomInstanceSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(spec.customers);
  std::uniform_int_distribution<Seconds> cost(1, spec.max_cost);
  const int cap_max = *std::max_element(spec.capacities.begin(), spec.capacities.end());
  std::uniform_int_distribution<int> demand(1, std::min(spec.max_demand, cap_max));
  std::vector<std::vector<std::vector<Seconds>>> costs;
  for (std::size_t t = 0; t < spec.capacities.size(); ++t) {
    std::vector<std::vector<Seconds>> m(n + 1, std::vector<Seconds>(n + 1, 0));
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = 0; b <= n; ++b) {
        if (a == b) continue;
        if (spec.symmetric && b < a) {
          m[a][b] = m[b][a];
        } else {
          m[a][b] = cost(rng);
        }
      }
    }
    costs.push_back(std::move(m));
  }
  std::vector<int> demands(n);
  for (auto& d : demands) d = demand(rng);
  return instance_from_costs(costs, demands, spec.capacities);
}

ProblemInstance geometric_instance(Rng& rng, int customers, const std::vector<int>& capacities,
                                   const std::vector<double>& speed_mps, int max_demand,
                                   double box_m) {
  const std::size_t n = static_cast<std::size_t>(customers);
  std::uniform_real_distribution<double> coord(0.0, box_m);
  std::vector<std::pair<double, double>> xy{{box_m / 2, box_m / 2}};
  for (std::size_t i = 0; i < n; ++i) xy.emplace_back(coord(rng), coord(rng));
  const int cap_max = *std::max_element(capacities.begin(), capacities.end());
  std::uniform_int_distribution<int> demand(1, std::min(max_demand, cap_max));
  std::vector<int> demands(n);
  for (auto& d : demands) d = demand(rng);

  std::vector<std::vector<std::vector<Seconds>>> costs;
  for (std::size_t t = 0; t < capacities.size(); ++t) {
    std::vector<std::vector<Seconds>> m(n + 1, std::vector<Seconds>(n + 1, 0));
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = 0; b <= n; ++b) {
        if (a == b) continue;
        const double d = std::hypot(xy[a].first - xy[b].first, xy[a].second - xy[b].second);
        m[a][b] = std::max<Seconds>(1, std::llround(d / speed_mps[t]));
      }
    }
    costs.push_back(std::move(m));
  }
  auto inst = instance_from_costs(costs, demands, capacities);
  const GeoPoint origin{19.76, -72.20};
  inst.depot.location = offset(origin, xy[0].second, xy[0].first);
  for (std::size_t i = 0; i < n; ++i) {
    inst.customers[i].location = offset(origin, xy[i + 1].second, xy[i + 1].first);
  }
  for (auto& [name, m] : inst.matrices) {
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = 0; b <= n; ++b) {
        m.dist_m[a * (n + 1) + b] =
            std::hypot(xy[a].first - xy[b].first, xy[a].second - xy[b].second);
      }
    }
  }
  return inst;
}

fs::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = fs::temp_directory_path() /
                   ("fleetroute-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_town(const fs::path& dir, const TownSpec& spec) {
  Rng rng(spec.seed);
  const GeoPoint origin{19.76, -72.20};
  const int rows = 7, cols = 9;
  const double step = 90.0;
  auto net = grid_network(rows, cols, step, "residential", origin);
  // a footpath pocket off the east edge
  NodeId prev = 1 + 3 * cols + (cols - 1);
  for (int k = 1; k <= 3; ++k) {
    const NodeId id = 10'000 + k;
    net.nodes[id] = offset(origin, 3 * step + 20.0 * k, (cols - 1) * step + 70.0 * k);
    add_edge(net, prev, id, "path", false);
    prev = id;
  }
  fs::create_directories(dir);
  write_text(dir / "network.osm", to_osm_xml(net));

  write_text(dir / "profiles.json", R"([
  {"name": "three_wheeler", "speeds": {"residential": 15}, "access": {"path": false}},
  {"name": "wheelbarrow", "speeds": {"residential": 4, "path": 3}}
]
)");
  write_text(dir / "fleet.json", R"([
  {"name": "three_wheeler", "capacity_buckets": 10, "profile": "three_wheeler", "count": 2},
  {"name": "wheelbarrow", "capacity_buckets": 3, "profile": "wheelbarrow", "count": 3}
]
)");

  std::ostringstream customers;
  customers.precision(9);
  customers << "id,lat,lon,buckets,zone,phone\n";
  std::uniform_real_distribution<double> north(0.0, (rows - 1) * step);
  std::uniform_real_distribution<double> east(0.0, (cols - 1) * step);
  std::uniform_int_distribution<int> buckets(1, 3);
  int n = 0;
  for (const auto& [zone, count] : spec.zones) {
    for (int i = 0; i < count; ++i) {
      const auto p = offset(origin, north(rng), east(rng));
      ++n;
      char id[16];
      std::snprintf(id, sizeof id, "C%03d", n);
      customers << id << "," << p.lat << "," << p.lon << "," << buckets(rng) << "," << zone
                << ",+509 3700" << n << "\n";
    }
  }
  write_text(dir / "customers.csv", customers.str());

  std::ostringstream facilities;
  facilities.precision(9);
  const auto depot = offset(origin, 3 * step, 4 * step);
  const auto focal = offset(origin, 1 * step, 1 * step);
  facilities << "id,lat,lon,kind\n"
             << "depot," << depot.lat << "," << depot.lon << ",depot\n"
             << "focal-1," << focal.lat << "," << focal.lon << ",focal_point\n";
  write_text(dir / "facilities.csv", facilities.str());

  nlohmann::json run = {
      {"network", "network.osm"},   {"profiles", "profiles.json"},
      {"customers", "customers.csv"}, {"facilities", "facilities.csv"},
      {"fleet", "fleet.json"},      {"out_dir", "out"},
      {"snap_radius_m", 100},
      {"solver", {{"seed", 7}, {"time_limit_s", spec.time_limit_s}}},
  };
  write_text(dir / "run.json", run.dump(2) + "\n");
  return dir / "run.json";
}

Town analog_town() {
  Rng rng(2024);
  Town t;
  const GeoPoint origin{19.755, -72.205};
  const int rows = 9, cols = 12;
  const double step = 85.0;
  t.net = grid_network(rows, cols, step, "residential", origin);
  auto grid_id = [&](int r, int c) { return static_cast<NodeId>(1 + r * cols + c); };
  for (auto& e : t.net.edges) {
    // middle row is the primary road
    if (e.from <= grid_id(4, cols - 1) && e.from >= grid_id(4, 0) &&
        e.to <= grid_id(4, cols - 1) && e.to >= grid_id(4, 0)) {
      e.road_class = "primary";
    }
  }
  // footway alleys cutting blocks diagonally
  for (int r = 0; r + 1 < rows; r += 2) {
    for (int c = 1; c + 1 < cols; c += 3) {
      add_edge(t.net, grid_id(r, c), grid_id(r + 1, c + 1), "footway", false);
    }
  }
  // dead-end footpath pockets off the west and east edges
  NodeId next = 5000;
  std::vector<NodeId> pocket_nodes;
  const std::vector<std::pair<int, bool>> pockets{{1, true}, {6, true}, {2, false}, {7, false}};
  for (const auto& [r, west] : pockets) {
    NodeId prev = grid_id(r, west ? 0 : cols - 1);
    for (int k = 1; k <= 4; ++k) {
      const NodeId id = next++;
      const double east = west ? -55.0 * k : (cols - 1) * step + 55.0 * k;
      t.net.nodes[id] = offset(origin, r * step + 12.0 * k, east);
      add_edge(t.net, prev, id, "path", false);
      pocket_nodes.push_back(id);
      prev = id;
    }
  }

  t.profiles = {
      profile("three_wheeler", {{"primary", 25}, {"residential", 15}}, {"path", "footway"}),
      profile("wheelbarrow", {{"primary", 4}, {"residential", 4}, {"path", 3}, {"footway", 3}})};
  for (const auto& p : t.profiles) t.graphs.push_back(fleetroute::build_profiled_graph(t.net, p));

  std::vector<fleetroute::Customer> customers;
  std::uniform_real_distribution<double> north(0.0, (rows - 1) * step);
  std::uniform_real_distribution<double> east(0.0, (cols - 1) * step);
  std::uniform_real_distribution<double> jitter(-6.0, 6.0);
  std::uniform_int_distribution<int> buckets(1, 3);
  std::uniform_int_distribution<std::size_t> pocket(0, pocket_nodes.size() - 1);
  for (int i = 0; i < 100; ++i) {
    fleetroute::Customer c;
    char id[16];
    std::snprintf(id, sizeof id, "A%03d", i + 1);
    c.id = id;
    if (i % 5 == 4) {
      c.location = offset(t.net.nodes.at(pocket_nodes[pocket(rng)]), jitter(rng), jitter(rng));
    } else {
      c.location = offset(origin, north(rng), east(rng));
    }
    c.buckets = buckets(rng);
    c.zone = "analog";
    customers.push_back(c);
  }
  const std::vector<fleetroute::Facility> facilities{
      {"depot", offset(origin, 4 * step, 5 * step), fleetroute::FacilityKind::depot}};
  const std::vector<fleetroute::VehicleTypeSpec> fleet{
      {"three_wheeler", 12, "three_wheeler", 3}, {"wheelbarrow", 3, "wheelbarrow", 4}};
  t.instance =
      fleetroute::build_instance(t.net, t.profiles, customers, facilities, fleet, 100.0, 1);
  return t;
}

}  // namespace fixtures
