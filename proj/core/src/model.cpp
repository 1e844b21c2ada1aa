#include <algorithm>
#include <boost/tokenizer.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "fleetroute/model.hpp"
#include "json.hpp"

namespace fleetroute {

using nlohmann::json;

namespace {

using Row = std::vector<std::string>;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

Row split_csv_line(const std::string& line) {
  using Sep = boost::escaped_list_separator<char>;
  boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
  Row row;
  for (const auto& field : tok) row.push_back(trim(field));
  return row;
}

// Reads a CSV stream into (line number, fields) pairs, skipping blank lines.
struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::pair<std::size_t, Row>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    const auto it = columns.find(name);
    if (it == columns.end()) return std::nullopt;
    return it->second;
  }
};

CsvTable read_csv(std::istream& in, const char* what) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    Row row;
    try {
      row = split_csv_line(line);
    } catch (const boost::escaped_list_error& e) {
      if (!have_header) {
        throw ParseError(std::string(what) + ": malformed header", line_no);
      }
      // Kept as an empty row so the caller reports it against its line.
      table.rows.emplace_back(line_no, Row{});
      continue;
    }
    if (!have_header) {
      for (std::size_t i = 0; i < row.size(); ++i) table.columns[row[i]] = i;
      have_header = true;
      continue;
    }
    table.rows.emplace_back(line_no, std::move(row));
  }
  if (!have_header) throw ValidationError(std::string(what) + ": missing header");
  return table;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_int(const std::string& text, int& out) {
  if (text.empty()) return false;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, out);
  return ec == std::errc() && ptr == last;
}

const std::string& field(const Row& row, std::optional<std::size_t> col) {
  static const std::string empty;
  if (!col || *col >= row.size()) return empty;
  return row[*col];
}

std::size_t require_column(const CsvTable& t, const std::string& name,
                           const char* what) {
  const auto col = t.column(name);
  if (!col) {
    throw ValidationError(std::string(what) + ": missing column '" + name + "'");
  }
  return *col;
}

// Returns an error message, or empty when the coordinate is usable.
std::string read_location(const Row& row, std::size_t lat_col,
                          std::size_t lon_col, GeoPoint& out) {
  if (!parse_double(field(row, lat_col), out.lat) || out.lat < -90.0 ||
      out.lat > 90.0) {
    return "invalid latitude";
  }
  if (!parse_double(field(row, lon_col), out.lon) || out.lon < -180.0 ||
      out.lon > 180.0) {
    return "invalid longitude";
  }
  return {};
}

}  // namespace

LoadResult<Customer> load_customers(std::istream& source) {
  constexpr const char* kWhat = "customers";
  const auto table = read_csv(source, kWhat);
  const auto id_col = require_column(table, "id", kWhat);
  const auto lat_col = require_column(table, "lat", kWhat);
  const auto lon_col = require_column(table, "lon", kWhat);
  const auto buckets_col = require_column(table, "buckets", kWhat);
  const auto zone_col = require_column(table, "zone", kWhat);
  const auto phone_col = table.column("phone");
  const auto months_col = table.column("service_months");

  LoadResult<Customer> result;
  std::set<std::string> seen;
  for (const auto& [line, row] : table.rows) {
    auto bad = [&, line = line](const std::string& msg) {
      result.errors.push_back({line, "row " + std::to_string(line) + ": " + msg});
    };
    if (row.empty()) {
      bad("malformed CSV row");
      continue;
    }
    Customer c;
    c.id = field(row, id_col);
    if (c.id.empty()) {
      bad("missing id");
      continue;
    }
    if (const auto msg = read_location(row, lat_col, lon_col, c.location);
        !msg.empty()) {
      bad(msg);
      continue;
    }
    const auto& buckets = field(row, buckets_col);
    if (!buckets.empty() && (!parse_int(buckets, c.buckets) || c.buckets <= 0)) {
      bad("buckets must be a positive integer");
      continue;
    }
    c.zone = field(row, zone_col);
    if (const auto& phone = field(row, phone_col); !phone.empty()) c.phone = phone;
    if (const auto& months = field(row, months_col); !months.empty()) {
      double v = 0.0;
      if (parse_double(months, v)) c.service_months = v;
    }
    if (!seen.insert(c.id).second) {
      bad("duplicate id '" + c.id + "'");
      continue;
    }
    result.items.push_back(std::move(c));
  }

  if (result.errors.size() * 10 > table.rows.size()) {
    std::string msg = "customers: " + std::to_string(result.errors.size()) +
                      " of " + std::to_string(table.rows.size()) +
                      " rows invalid (limit 10%)";
    for (const auto& e : result.errors) msg += "\n  " + e.message;
    throw ValidationError(msg);
  }
  return result;
}

std::vector<Facility> load_facilities(std::istream& source) {
  constexpr const char* kWhat = "facilities";
  const auto table = read_csv(source, kWhat);
  const auto id_col = require_column(table, "id", kWhat);
  const auto lat_col = require_column(table, "lat", kWhat);
  const auto lon_col = require_column(table, "lon", kWhat);
  const auto kind_col = require_column(table, "kind", kWhat);

  std::vector<Facility> out;
  for (const auto& [line, row] : table.rows) {
    const std::string prefix = "facilities row " + std::to_string(line) + ": ";
    if (row.empty()) throw ValidationError(prefix + "malformed CSV row");
    Facility f;
    f.id = field(row, id_col);
    if (f.id.empty()) throw ValidationError(prefix + "missing id");
    if (const auto msg = read_location(row, lat_col, lon_col, f.location);
        !msg.empty()) {
      throw ValidationError(prefix + msg);
    }
    const auto& kind = field(row, kind_col);
    if (kind == "depot") {
      f.kind = FacilityKind::depot;
    } else if (kind == "focal_point") {
      f.kind = FacilityKind::focal_point;
    } else {
      throw ValidationError(prefix + "unknown kind '" + kind + "'");
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<VehicleTypeSpec> load_fleet(std::istream& source,
                                        std::span<const VehicleProfile> profiles) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("fleet: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("fleet: expected a JSON array");
  if (doc.empty()) throw ValidationError("fleet must be non-empty");

  std::vector<VehicleTypeSpec> fleet;
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    const std::string where = "fleet[" + std::to_string(i) + "]";
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    VehicleTypeSpec spec;
    if (!obj.contains("name") || !obj["name"].is_string() ||
        obj["name"].get<std::string>().empty()) {
      throw ValidationError(where + ".name: missing vehicle type name");
    }
    spec.name = obj["name"].get<std::string>();
    if (!obj.contains("capacity_buckets") ||
        !obj["capacity_buckets"].is_number_integer() ||
        obj["capacity_buckets"].get<long long>() <= 0) {
      throw ValidationError(where + ".capacity_buckets: capacity must be a positive integer");
    }
    spec.capacity_buckets = obj["capacity_buckets"].get<int>();
    if (!obj.contains("profile") || !obj["profile"].is_string()) {
      throw ValidationError(where + ".profile: missing profile name");
    }
    spec.profile = obj["profile"].get<std::string>();
    const bool known = std::any_of(profiles.begin(), profiles.end(), [&](const auto& p) {
      return p.name == spec.profile;
    });
    if (!known) {
      throw ValidationError(where + ".profile: unknown profile '" + spec.profile + "'");
    }
    if (obj.contains("count")) {
      if (!obj["count"].is_number_integer() || obj["count"].get<long long>() < 1) {
        throw ValidationError(where + ".count: count must be a positive integer");
      }
      spec.count = obj["count"].get<int>();
    }
    if (!names.insert(spec.name).second) {
      throw ValidationError(where + ".name: duplicate vehicle type '" + spec.name + "'");
    }
    fleet.push_back(std::move(spec));
  }
  return fleet;
}

int ProblemInstance::max_capacity() const {
  int best = 0;
  for (const auto& t : fleet) best = std::max(best, t.capacity_buckets);
  return best;
}

long long ProblemInstance::total_buckets() const {
  long long total = 0;
  for (const auto& c : customers) total += c.buckets;
  return total;
}

long long ProblemInstance::min_trips_lower_bound() const {
  const long long cap = max_capacity();
  if (cap <= 0) return 1;
  return std::max(1LL, (total_buckets() + cap - 1) / cap);
}

ProblemInstance ProblemInstance::restricted_to(
    std::span<const std::size_t> customer_indices) const {
  ProblemInstance out;
  out.depot = depot;
  out.depot_snap = depot_snap;
  out.focal_points = focal_points;
  out.fleet = fleet;
  std::vector<std::size_t> keep{0};
  for (const auto i : customer_indices) {
    if (i >= customers.size()) {
      throw ValidationError("restricted_to: customer index out of range");
    }
    out.customers.push_back(customers[i]);
    out.customer_snaps.push_back(customer_snaps[i]);
    keep.push_back(i + 1);
  }
  for (const auto& [name, m] : matrices) out.matrices.emplace(name, m.subset(keep));
  return out;
}

ProblemInstance build_instance(const RoadNetwork& net,
                               std::span<const VehicleProfile> profiles,
                               std::span<const Customer> customers,
                               std::span<const Facility> facilities,
                               std::span<const VehicleTypeSpec> fleet,
                               double snap_radius_m, unsigned threads) {
  if (fleet.empty()) throw ValidationError("fleet must be non-empty");

  ProblemInstance inst;
  std::size_t depots = 0;
  for (const auto& f : facilities) {
    if (f.kind == FacilityKind::depot) {
      inst.depot = f;
      ++depots;
    } else {
      inst.focal_points.push_back(f);
    }
  }
  if (depots != 1) {
    throw ValidationError("expected exactly one depot, found " +
                          std::to_string(depots));
  }
  inst.fleet.assign(fleet.begin(), fleet.end());

  std::vector<std::string> profile_names;
  for (const auto& t : fleet) profile_names.push_back(t.profile);
  std::sort(profile_names.begin(), profile_names.end());
  profile_names.erase(std::unique(profile_names.begin(), profile_names.end()),
                      profile_names.end());
  std::vector<ProfiledGraph> graphs;
  graphs.reserve(profile_names.size());
  for (const auto& name : profile_names) {
    graphs.emplace_back(net, find_profile(profiles, name));
  }

  const auto depot_snap = snap_point(net, graphs, inst.depot.location, snap_radius_m);
  inst.depot_snap = {inst.depot.id, depot_snap.node, depot_snap.snap_dist_m};

  std::vector<Customer> snapped;
  std::vector<SnapRecord> snaps;
  std::vector<NodeId> points{depot_snap.node};
  for (const auto& c : customers) {
    try {
      const auto s = snap_point(net, graphs, c.location, snap_radius_m);
      snapped.push_back(c);
      snaps.push_back({c.id, s.node, s.snap_dist_m});
      points.push_back(s.node);
    } catch (const SnapFailed& e) {
      inst.excluded.push_back({c.id, std::string("snap failed: ") + e.what()});
    }
  }

  std::map<std::string, CostMatrixSet> full;
  for (const auto& g : graphs) {
    full.emplace(g.profile().name, cost_matrices(g, points, threads));
  }

  std::vector<std::size_t> keep{0};
  for (std::size_t k = 0; k < snapped.size(); ++k) {
    const bool servable = std::any_of(full.begin(), full.end(), [&](const auto& kv) {
      return kv.second.reachable(0, k + 1) && kv.second.reachable(k + 1, 0);
    });
    if (!servable) {
      inst.excluded.push_back({snapped[k].id, "unreachable by every fleet profile"});
      continue;
    }
    keep.push_back(k + 1);
    inst.customers.push_back(std::move(snapped[k]));
    inst.customer_snaps.push_back(snaps[k]);
  }
  for (auto& [name, m] : full) inst.matrices.emplace(name, m.subset(keep));
  return inst;
}

std::vector<Finding> validate_instance(const ProblemInstance& inst,
                                       double snap_warn_m) {
  std::vector<Finding> findings;
  auto fmt_m = [](double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << v;
    return os.str();
  };
  if (inst.depot_snap.snap_dist_m > snap_warn_m) {
    findings.push_back({Severity::warning, inst.depot.id,
                        "depot snap distance " + fmt_m(inst.depot_snap.snap_dist_m) +
                            " m exceeds " + fmt_m(snap_warn_m) + " m"});
  }
  const int max_cap = inst.max_capacity();
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    const auto& c = inst.customers[i];
    const std::size_t k = i + 1;
    if (c.buckets > max_cap) {
      findings.push_back({Severity::fatal, c.id, "demand exceeds all capacities"});
    } else {
      const bool served = std::any_of(inst.fleet.begin(), inst.fleet.end(), [&](const auto& t) {
        const auto& m = inst.matrix_for(t);
        return t.capacity_buckets >= c.buckets && m.reachable(0, k) && m.reachable(k, 0);
      });
      if (!served) {
        findings.push_back({Severity::fatal, c.id,
                            "no vehicle type with enough capacity can reach customer"});
      }
    }
    if (i < inst.customer_snaps.size() &&
        inst.customer_snaps[i].snap_dist_m > snap_warn_m) {
      findings.push_back({Severity::warning, c.id,
                          "snap distance " + fmt_m(inst.customer_snaps[i].snap_dist_m) +
                              " m exceeds " + fmt_m(snap_warn_m) + " m"});
    }
    for (const auto& [name, m] : inst.matrices) {
      const bool out = m.reachable(0, k);
      const bool back = m.reachable(k, 0);
      if (out && !back) {
        findings.push_back({Severity::warning, c.id,
                            "profile " + name + ": reachable outbound but not return"});
      } else if (!out && back) {
        findings.push_back({Severity::warning, c.id,
                            "profile " + name + ": return reachable but not outbound"});
      }
    }
  }
  return findings;
}

bool has_fatal(std::span<const Finding> findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const auto& f) { return f.severity == Severity::fatal; });
}

}  // namespace fleetroute
