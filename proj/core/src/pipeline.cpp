#include "fleetroute/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "fleetroute/cluster.hpp"
#include "fleetroute/export.hpp"
#include "fleetroute/osmnet.hpp"
#include "io_util.hpp"
#include "json_io.hpp"

namespace fleetroute {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bumped whenever the matrix file layout or snapping rules change.
constexpr const char* kCacheVersion = "fleetroute-matrix-v1";
constexpr const char* kAllZones = "all";

fs::path resolve(const fs::path& base, const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    throw ValidationError(std::string("run config: missing path '") + key + "'");
  }
  fs::path p = doc[key].get<std::string>();
  return p.is_absolute() ? p : base / p;
}

SolverConfig solver_from_json(const json& j) {
  SolverConfig c;
  c.seed = j.value("seed", c.seed);
  c.time_limit_s = j.value("time_limit_s", c.time_limit_s);
  c.gls_lambda_alpha = j.value("gls_lambda_alpha", c.gls_lambda_alpha);
  if (j.contains("trip_cost") && j["trip_cost"].is_number_integer()) {
    c.trip_cost = j["trip_cost"].get<Seconds>();
  }
  c.cluster_penalty_s = j.value("cluster_penalty_s", c.cluster_penalty_s);
  c.cluster_radius_m = j.value("cluster_radius_m", c.cluster_radius_m);
  if (j.contains("granularity")) {
    c.granularity = parse_granularity(j["granularity"].get<std::string>());
  }
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.stall_iterations = j.value("stall_iterations", c.stall_iterations);
  if (!(c.time_limit_s > 0.0)) throw ValidationError("solver.time_limit_s must be positive");
  if (c.cluster_penalty_s < 0) throw ValidationError("solver.cluster_penalty_s must be >= 0");
  if (!(c.cluster_radius_m > 0.0)) throw ValidationError("solver.cluster_radius_m must be positive");
  return c;
}

void check_inputs(const RunConfig& config) {
  for (const auto* p : {&config.paths.network, &config.paths.profiles, &config.paths.customers,
                        &config.paths.facilities, &config.paths.fleet}) {
    if (!fs::exists(*p)) throw ValidationError("input not found: " + p->string());
  }
  fs::create_directories(config.paths.out_dir);
}

struct Inputs {
  std::vector<VehicleProfile> profiles;
  LoadResult<Customer> customers;
  std::vector<Facility> facilities;
  std::vector<VehicleTypeSpec> fleet;
  std::string checksum;
};

Inputs load_inputs(const RunConfig& config, std::ostream& err) {
  Inputs in;
  std::uint64_t h = detail::fnv1a(kCacheVersion);
  auto read = [&](const fs::path& p) {
    auto text = detail::read_file(p);
    h = detail::fnv1a(text, detail::fnv1a("\x1f", h));
    return text;
  };
  read(config.paths.network);
  {
    std::istringstream s(read(config.paths.profiles));
    in.profiles = parse_profiles(s);
  }
  {
    std::istringstream s(read(config.paths.customers));
    in.customers = load_customers(s);
  }
  {
    std::istringstream s(read(config.paths.facilities));
    in.facilities = load_facilities(s);
  }
  {
    std::istringstream s(read(config.paths.fleet));
    in.fleet = load_fleet(s, in.profiles);
  }
  h = detail::fnv1a(json(config.snap_radius_m).dump(), h);
  in.checksum = detail::hex64(h);
  for (const auto& e : in.customers.errors) err << "warning: customers " << e.message << "\n";
  return in;
}

RoadNetwork load_network(const RunConfig& config) {
  std::ifstream in(config.paths.network, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + config.paths.network.string());
  return parse_osm_xml(in);
}

std::vector<std::string> fleet_profiles(const std::vector<VehicleTypeSpec>& fleet) {
  std::set<std::string> names;
  for (const auto& t : fleet) names.insert(t.profile);
  return {names.begin(), names.end()};
}

fs::path matrix_path(const RunConfig& config, const std::string& profile) {
  return config.paths.out_dir / ("matrix-" + zone_file_label(profile) + ".json");
}

fs::path snap_report_path(const RunConfig& config) {
  return config.paths.out_dir / "snap-report.json";
}

json snap_json(const SnapRecord& s) {
  return {{"id", s.id}, {"node", s.node}, {"snap_dist_m", detail::round6(s.snap_dist_m)}};
}

void write_cache(const RunConfig& config, const Inputs& in, const ProblemInstance& inst,
                 const std::vector<Finding>& findings) {
  json ids = json::array();
  for (const auto& c : inst.customers) ids.push_back(c.id);
  for (const auto& [name, m] : inst.matrices) {
    json doc = detail::matrix_to_json(m);
    doc["input_checksum"] = in.checksum;
    doc["customers"] = ids;
    detail::write_file_atomic(matrix_path(config, name), doc.dump() + "\n");
  }
  json report;
  report["input_checksum"] = in.checksum;
  report["depot"] = snap_json(inst.depot_snap);
  json customers = json::array();
  for (const auto& s : inst.customer_snaps) customers.push_back(snap_json(s));
  report["customers"] = std::move(customers);
  json excluded = json::array();
  for (const auto& e : inst.excluded) excluded.push_back({{"id", e.id}, {"reason", e.reason}});
  report["excluded"] = std::move(excluded);
  json found = json::array();
  for (const auto& f : findings) {
    found.push_back({{"severity", f.severity == Severity::fatal ? "fatal" : "warning"},
                     {"id", f.customer_id},
                     {"message", f.message}});
  }
  report["findings"] = std::move(found);
  detail::write_file_atomic(snap_report_path(config), report.dump(2) + "\n");
}

// Rebuilds the instance from matrix files whose checksum matches the
// current inputs; nullopt when anything is missing or stale.
std::optional<ProblemInstance> load_cache(const RunConfig& config, const Inputs& in) {
  try {
    if (!fs::exists(snap_report_path(config))) return std::nullopt;
    const auto report = json::parse(detail::read_file(snap_report_path(config)));
    if (report.value("input_checksum", std::string()) != in.checksum) return std::nullopt;

    ProblemInstance inst;
    std::size_t depots = 0;
    for (const auto& f : in.facilities) {
      if (f.kind == FacilityKind::depot) {
        inst.depot = f;
        ++depots;
      } else {
        inst.focal_points.push_back(f);
      }
    }
    if (depots != 1) return std::nullopt;
    inst.fleet = in.fleet;
    const auto& d = report.at("depot");
    inst.depot_snap = {d.at("id").get<std::string>(), d.at("node").get<NodeId>(),
                       d.at("snap_dist_m").get<double>()};

    std::map<std::string, const Customer*> by_id;
    for (const auto& c : in.customers.items) by_id.emplace(c.id, &c);
    for (const auto& s : report.at("customers")) {
      const auto id = s.at("id").get<std::string>();
      const auto it = by_id.find(id);
      if (it == by_id.end()) return std::nullopt;
      inst.customers.push_back(*it->second);
      inst.customer_snaps.push_back(
          {id, s.at("node").get<NodeId>(), s.at("snap_dist_m").get<double>()});
    }
    for (const auto& e : report.at("excluded")) {
      inst.excluded.push_back({e.at("id").get<std::string>(), e.at("reason").get<std::string>()});
    }

    json ids = json::array();
    for (const auto& c : inst.customers) ids.push_back(c.id);
    for (const auto& name : fleet_profiles(in.fleet)) {
      const auto path = matrix_path(config, name);
      if (!fs::exists(path)) return std::nullopt;
      const auto doc = json::parse(detail::read_file(path));
      if (doc.value("input_checksum", std::string()) != in.checksum) return std::nullopt;
      if (doc.at("customers") != ids) return std::nullopt;
      auto m = detail::matrix_from_json(doc);
      if (m.profile != name || m.size() != inst.customers.size() + 1) return std::nullopt;
      inst.matrices.emplace(name, std::move(m));
    }
    return inst;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct Prepared {
  Inputs inputs;
  ProblemInstance instance;
  bool from_cache = false;
};

Prepared prepare(const RunConfig& config, std::ostream& err) {
  check_inputs(config);
  Prepared p;
  p.inputs = load_inputs(config, err);
  if (auto cached = load_cache(config, p.inputs)) {
    p.instance = std::move(*cached);
    p.from_cache = true;
    return p;
  }
  const auto net = load_network(config);
  p.instance = build_instance(net, p.inputs.profiles, p.inputs.customers.items,
                              p.inputs.facilities, p.inputs.fleet, config.snap_radius_m,
                              config.threads);
  const auto findings = validate_instance(p.instance, config.snap_warn_m);
  for (const auto& e : p.instance.excluded) {
    err << "warning: customer " << e.id << " excluded: " << e.reason << "\n";
  }
  for (const auto& f : findings) {
    err << (f.severity == Severity::fatal ? "fatal: " : "warning: ") << f.customer_id << ": "
        << f.message << "\n";
  }
  write_cache(config, p.inputs, p.instance, findings);
  return p;
}

struct ZonePlan {
  std::string zone;
  std::vector<std::size_t> customers;
};

std::vector<ZonePlan> plan_zones(const RunConfig& config, const Prepared& p, std::ostream& err) {
  const auto& inst = p.instance;
  if (!config.zone_split) {
    ZonePlan all{kAllZones, {}};
    for (std::size_t i = 0; i < inst.customers.size(); ++i) all.customers.push_back(i);
    return {all};
  }
  std::map<std::string, std::vector<std::size_t>> by_zone;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    by_zone[inst.customers[i].zone].push_back(i);
  }
  std::set<std::string> declared;
  for (const auto& c : p.inputs.customers.items) declared.insert(c.zone);

  std::vector<std::string> wanted = config.zones;
  if (wanted.empty()) wanted.assign(declared.begin(), declared.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<ZonePlan> plans;
  for (const auto& z : wanted) {
    if (!declared.contains(z)) throw ValidationError("unknown zone '" + z + "'");
    const auto it = by_zone.find(z);
    if (it == by_zone.end()) {
      err << "warning: zone " << z << ": every customer was excluded, skipping\n";
      continue;
    }
    plans.push_back({z, it->second});
  }
  return plans;
}

fs::path solution_path(const RunConfig& config, const std::string& zone) {
  return config.paths.out_dir / ("solution-" + zone_file_label(zone) + ".json");
}

std::string hms(Seconds s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                static_cast<long long>((s / 60) % 60), static_cast<long long>(s % 60));
  return buf;
}

int guarded(std::ostream& err, const auto& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SnapFailed& e) {
    err << "error: depot: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

std::string zone_file_label(const std::string& zone) {
  if (zone.empty()) return "unzoned";
  std::string out;
  for (const unsigned char c : zone) {
    out += (std::isalnum(c) || c == '-' || c == '_' || c == '.') ? static_cast<char>(c) : '_';
  }
  return out;
}

RunConfig load_run_config(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(detail::read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("run config: " + std::string(e.what()));
  }
  const fs::path base = path.parent_path();
  RunConfig c;
  c.paths.network = resolve(base, doc, "network");
  c.paths.profiles = resolve(base, doc, "profiles");
  c.paths.customers = resolve(base, doc, "customers");
  c.paths.facilities = resolve(base, doc, "facilities");
  c.paths.fleet = resolve(base, doc, "fleet");
  c.paths.out_dir = resolve(base, doc, "out_dir");
  try {
    c.snap_radius_m = doc.value("snap_radius_m", c.snap_radius_m);
    c.snap_warn_m = doc.value("snap_warn_m", c.snap_warn_m);
    c.zones = doc.value("zones", c.zones);
    c.zone_split = doc.value("zone_split", c.zone_split);
    if (doc.contains("baseline_trips") && !doc["baseline_trips"].is_null()) {
      c.baseline_trips = doc["baseline_trips"].get<long long>();
    }
    if (doc.contains("solver")) c.solver = solver_from_json(doc["solver"]);
  } catch (const json::exception& e) {
    throw ValidationError("run config: " + std::string(e.what()));
  }
  if (!(c.snap_radius_m > 0.0)) throw ValidationError("snap_radius_m must be positive");
  return c;
}

int cmd_matrix(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto p = prepare(config, err);
    for (const auto& [name, m] : p.instance.matrices) {
      out << "matrix " << name << ": " << m.size() << " points"
          << (p.from_cache ? " (cached)" : "") << "\n";
    }
    return int{kExitOk};
  });
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto p = prepare(config, err);
    const auto plans = plan_zones(config, p, err);

    struct ZoneOutcome {
      std::string text;
      Solution solution;
      std::string error;
      bool infeasible = false;
    };
    std::vector<ZoneOutcome> outcomes(plans.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t z = next++; z < plans.size(); z = next++) {
        auto& o = outcomes[z];
        try {
          const auto inst = p.instance.restricted_to(plans[z].customers);
          const auto findings = validate_instance(inst, config.snap_warn_m);
          if (has_fatal(findings)) {
            std::string why;
            for (const auto& f : findings) {
              if (f.severity == Severity::fatal) why += " " + f.customer_id + ": " + f.message + ";";
            }
            throw InfeasibleError("zone " + plans[z].zone + " is infeasible:" + why);
          }
          const auto clusters = build_clusters(inst, config.solver.cluster_radius_m);
          o.solution = gls_run(inst, config.solver, clusters);
          const auto violations = check_feasible(inst, o.solution);
          if (!violations.empty()) {
            throw Error("zone " + plans[z].zone + ": solver returned an infeasible plan: " +
                        violations.front());
          }
          o.text = serialize_solution(inst, o.solution, clusters, plans[z].zone);
        } catch (const InfeasibleError& e) {
          o.infeasible = true;
          o.error = e.what();
        } catch (const std::exception& e) {
          o.error = e.what();
        }
      }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(
        std::max<std::size_t>(1, plans.size()),
        config.threads ? config.threads : default_worker_count()));
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
      worker();
    }

    Seconds total = 0;
    for (std::size_t z = 0; z < plans.size(); ++z) {
      const auto& o = outcomes[z];
      if (o.infeasible) throw InfeasibleError(o.error);
      if (!o.error.empty()) throw Error(o.error);
      detail::write_file_atomic(solution_path(config, plans[z].zone), o.text);
      total += o.solution.travel_seconds;
      out << "zone " << plans[z].zone << ": " << o.solution.trip_count << " trips, travel "
          << hms(o.solution.travel_seconds) << (o.solution.truncated ? " (truncated)" : "")
          << "\n";
    }
    out << "total travel: " << hms(total) << "\n";
    return int{kExitOk};
  });
}

int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto p = prepare(config, err);
    const auto plans = plan_zones(config, p, err);
    for (const auto& plan : plans) {
      if (!fs::exists(solution_path(config, plan.zone))) {
        throw ValidationError("missing solution file " + solution_path(config, plan.zone).string() +
                              "; run 'solve' first");
      }
    }

    const auto net = load_network(config);
    std::vector<ProfiledGraph> graphs;
    for (const auto& name : fleet_profiles(p.inputs.fleet)) {
      graphs.emplace_back(net, find_profile(p.inputs.profiles, name));
    }

    std::vector<ProblemInstance> instances;
    std::vector<Solution> solutions;
    instances.reserve(plans.size());
    solutions.reserve(plans.size());
    std::vector<std::string> documents;
    for (const auto& plan : plans) {
      instances.push_back(p.instance.restricted_to(plan.customers));
      const auto& inst = instances.back();
      solutions.push_back(parse_solution(inst, detail::read_file(solution_path(config, plan.zone))));
      const auto& sol = solutions.back();
      const auto violations = check_feasible(inst, sol);
      if (!violations.empty()) {
        throw ValidationError("solution for zone " + plan.zone + " is not valid: " + violations.front());
      }
      const auto geometries = resolve_geometries(inst, sol, graphs);
      auto geojson = routes_to_geojson(inst, sol, geometries, net, plan.zone);
      const auto label = zone_file_label(plan.zone);
      detail::write_file_atomic(config.paths.out_dir / ("zone-" + label + ".geojson"), geojson);
      detail::write_file_atomic(config.paths.out_dir / ("zone-" + label + ".svg"),
                                render_svg(geojson));
      documents.push_back(std::move(geojson));
      out << "exported zone " << plan.zone << "\n";
    }
    detail::write_file_atomic(config.paths.out_dir / "master.geojson", merge_geojson(documents));

    std::vector<ZoneResult> results;
    for (std::size_t z = 0; z < plans.size(); ++z) {
      results.push_back({plans[z].zone, &instances[z], &solutions[z]});
    }
    detail::write_file_atomic(config.paths.out_dir / "summary.txt",
                              summary_report(results, config.baseline_trips));
    out << "wrote master.geojson and summary.txt\n";
    return int{kExitOk};
  });
}

int run_command(Command command, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  switch (command) {
    case Command::matrix: return cmd_matrix(config, out, err);
    case Command::solve: return cmd_solve(config, out, err);
    case Command::export_maps: return cmd_export(config, out, err);
  }
  return kExitInternal;
}

}  // namespace fleetroute
