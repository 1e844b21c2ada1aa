#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "fleetroute/model.hpp"
#include "oracles.hpp"

using namespace fleetroute;

namespace {

Customer at(std::string id, GeoPoint location) {
  Customer c;
  c.id = std::move(id);
  c.location = location;
  return c;
}

LoadResult<Customer> customers(const std::string& csv) {
  std::istringstream in(csv);
  return load_customers(in);
}

std::vector<VehicleTypeSpec> fleet(const std::string& json,
                                   const std::vector<VehicleProfile>& profiles) {
  std::istringstream in(json);
  return load_fleet(in, profiles);
}

std::string customer_rows(int count, int bad_line = -1) {
  std::string csv = "id,lat,lon,buckets,zone,phone\n";
  for (int line = 2; line < count + 2; ++line) {
    csv += "C" + std::to_string(line) + "," + (line == bad_line ? "abc" : "19.7581") +
           ",-72.2043,1,Avyasyon,\n";
  }
  return csv;
}

const std::vector<VehicleProfile> kProfiles{
    fixtures::profile("three_wheeler", {{"residential", 15}}, {"path"}),
    fixtures::profile("wheelbarrow", {{"residential", 4}, {"path", 4}})};

std::vector<Facility> depot_at(const GeoPoint& p) { return {{"depot", p, FacilityKind::depot}}; }

}  // namespace

TEST(LoadCustomers, MapsColumns) {
  const auto r = customers(
      "id,lat,lon,buckets,zone,phone\nC001,19.7581,-72.2043,3,Avyasyon,+509 3700 0000\n");
  ASSERT_TRUE(r.errors.empty());
  ASSERT_EQ(r.items.size(), 1u);
  const auto& c = r.items[0];
  EXPECT_EQ(c.id, "C001");
  EXPECT_DOUBLE_EQ(c.location.lat, 19.7581);
  EXPECT_DOUBLE_EQ(c.location.lon, -72.2043);
  EXPECT_EQ(c.buckets, 3);
  EXPECT_EQ(c.zone, "Avyasyon");
  EXPECT_EQ(c.phone, "+509 3700 0000");
}

TEST(LoadCustomers, BlankBucketsDefaultToOne) {
  const auto r = customers("id,lat,lon,buckets,zone,phone\nC1,19.75,-72.2,,Shada,\n");
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].buckets, 1);
  EXPECT_FALSE(r.items[0].phone.has_value());
}

TEST(LoadCustomers, ColumnOrderAndExtrasAndQuotes) {
  const auto r = customers(
      "zone,phone,service_months,buckets,lon,lat,id\n"
      "\"Cite, Nord\",,14,2,-72.2,19.75,C9\n");
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].zone, "Cite, Nord");
  EXPECT_EQ(r.items[0].service_months, 14.0);
  EXPECT_EQ(r.items[0].buckets, 2);
}

TEST(LoadCustomers, BadRowReportedByLine) {
  const auto r = customers(customer_rows(20, 7));
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].row, 7u);
  EXPECT_EQ(r.errors[0].message, "row 7: invalid latitude");
  EXPECT_EQ(r.items.size(), 19u);
}

TEST(LoadCustomers, TooManyBadRowsAbort) {
  try {
    customers(customer_rows(6, 7));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("row 7: invalid latitude"), std::string::npos);
  }
}

TEST(LoadCustomers, RejectsBadValues) {
  std::string csv = customer_rows(30);
  csv += "X1,19.7,-190,1,Z,\nX1,19.7,-72,0,Z,\nX2,19.7,-72,1,Z,\nX2,19.7,-72,1,Z,\n";
  const auto r = customers(csv);
  ASSERT_EQ(r.errors.size(), 3u);
  EXPECT_NE(r.errors[0].message.find("invalid longitude"), std::string::npos);
  EXPECT_NE(r.errors[1].message.find("buckets"), std::string::npos);
  EXPECT_NE(r.errors[2].message.find("duplicate"), std::string::npos);
  EXPECT_THROW(customers("id,lat,lon,zone\n"), ValidationError);
}

TEST(LoadFacilities, DepotAndFocalPoints) {
  std::istringstream in("id,lat,lon,kind\nD,19.76,-72.2,depot\nF1,19.77,-72.21,focal_point\n");
  const auto fs = load_facilities(in);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].kind, FacilityKind::depot);
  EXPECT_EQ(fs[1].kind, FacilityKind::focal_point);
  std::istringstream bad("id,lat,lon,kind\nD,19.76,-72.2,warehouse\n");
  EXPECT_THROW(load_facilities(bad), ValidationError);
}

TEST(LoadFleet, Accepts) {
  const auto f = fleet(
      R"([{"name":"three_wheeler","capacity_buckets":40,"profile":"three_wheeler","count":2}])",
      kProfiles);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].capacity_buckets, 40);
  EXPECT_EQ(f[0].count, 2);
  EXPECT_EQ(f[0].profile, "three_wheeler");
}

TEST(LoadFleet, UnknownProfile) {
  try {
    fleet(R"([{"name":"b","capacity_buckets":4,"profile":"bicycle"}])", kProfiles);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown profile"), std::string::npos);
  }
}

TEST(LoadFleet, EmptyFleet) {
  try {
    fleet("[]", kProfiles);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("fleet must be non-empty"), std::string::npos);
  }
  EXPECT_THROW(fleet(R"([{"name":"a","capacity_buckets":0,"profile":"wheelbarrow"}])", kProfiles),
               ValidationError);
}

TEST(BuildInstance, DepotFirstAndMatrixShape) {
  const auto net = fixtures::grid_network(3, 3, 100.0);
  std::vector<Customer> cs{at("a", net.location(3)), at("b", net.location(7))};
  const std::vector<VehicleTypeSpec> f{{"tw", 10, "three_wheeler", 1}};
  const auto inst = build_instance(net, kProfiles, cs, depot_at(net.location(5)), f, 50.0);
  ASSERT_EQ(inst.customer_count(), 2u);
  ASSERT_EQ(inst.matrices.size(), 1u);
  const auto& m = inst.matrix_for(inst.fleet[0]);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.points[0], 5);
  EXPECT_EQ(m.points[1], 3);
  EXPECT_EQ(m.points[2], 7);
  EXPECT_EQ(inst.customer_snaps[1].node, 7);
  EXPECT_EQ(m.time(0, 0), 0);
  EXPECT_GT(m.time(0, 1), 0);
}

TEST(BuildInstance, PathOnlySpurDependsOnProfile) {
  auto net = fixtures::grid_network(2, 2, 100.0);
  net.nodes[50] = fixtures::offset(net.location(4), 0.0, 80.0);
  net.edges.push_back({4, 50, haversine_m(net.location(4), net.location(50)), "path", false});
  std::vector<Customer> cs{at("spur", net.location(50)), at("corner", net.location(1))};
  const std::vector<VehicleTypeSpec> f{{"tw", 10, "three_wheeler", 1}, {"wb", 3, "wheelbarrow", 2}};
  const auto inst = build_instance(net, kProfiles, cs, depot_at(net.location(2)), f, 30.0);
  ASSERT_EQ(inst.customer_count(), 2u);
  EXPECT_TRUE(inst.excluded.empty());
  const auto& tw = inst.matrices.at("three_wheeler");
  const auto& wb = inst.matrices.at("wheelbarrow");
  EXPECT_EQ(tw.time(0, 1), kUnreachable);
  EXPECT_EQ(tw.time(1, 0), kUnreachable);
  EXPECT_TRUE(tw.reachable(0, 2));

  for (const auto& [name, m] : inst.matrices) {
    const auto& p = find_profile(kProfiles, name);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        const auto o = oracles::exhaustive_path(net, p, m.points[i], m.points[j]);
        ASSERT_EQ(m.reachable(i, j), o.reachable);
        if (o.reachable) {
          EXPECT_EQ(m.time(i, j), o.time);
        }
      }
    }
  }
  EXPECT_TRUE(wb.reachable(0, 1));
  EXPECT_FALSE(has_fatal(validate_instance(inst)));
}

TEST(BuildInstance, FarDepotFails) {
  const auto net = fixtures::grid_network(3, 3, 100.0);
  const std::vector<VehicleTypeSpec> f{{"tw", 10, "three_wheeler", 1}};
  const auto far = fixtures::offset(net.location(1), 5000.0, 0.0);
  EXPECT_THROW(build_instance(net, kProfiles, {}, depot_at(far), f, 100.0), SnapFailed);
}

TEST(BuildInstance, ExcludesUnsnappableAndUnreachable) {
  auto net = fixtures::grid_network(2, 2, 100.0);
  net.nodes[60] = fixtures::offset(net.location(1), 0.0, -2000.0);
  net.nodes[61] = fixtures::offset(net.location(1), 0.0, -2100.0);
  net.edges.push_back({60, 61, 100.0, "residential", false});
  std::vector<Customer> cs{at("far", fixtures::offset(net.location(1), 4000.0, 0.0)),
                           at("island", net.location(60)), at("ok", net.location(4))};
  const std::vector<VehicleTypeSpec> f{{"tw", 10, "three_wheeler", 1}};
  const auto inst = build_instance(net, kProfiles, cs, depot_at(net.location(1)), f, 50.0);
  ASSERT_EQ(inst.customer_count(), 1u);
  EXPECT_EQ(inst.customers[0].id, "ok");
  ASSERT_EQ(inst.excluded.size(), 2u);
  EXPECT_EQ(inst.excluded[0].id, "far");
  EXPECT_EQ(inst.excluded[1].id, "island");
}

TEST(BuildInstance, RejectsTwoDepots) {
  const auto net = fixtures::grid_network(2, 2, 100.0);
  const std::vector<VehicleTypeSpec> f{{"tw", 10, "three_wheeler", 1}};
  std::vector<Facility> two{{"d1", net.location(1), FacilityKind::depot},
                            {"d2", net.location(2), FacilityKind::depot}};
  EXPECT_THROW(build_instance(net, kProfiles, {}, two, f, 50.0), ValidationError);
}

TEST(ValidateInstance, Findings) {
  auto inst = fixtures::instance_from_costs({{{0, 5, 5}, {5, 0, 5}, {5, 5, 0}}}, {1, 2}, {40});
  EXPECT_TRUE(validate_instance(inst).empty());

  inst.customers[0].buckets = 50;
  auto f = validate_instance(inst);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::fatal);
  EXPECT_EQ(f[0].customer_id, "c1");
  EXPECT_EQ(f[0].message, "demand exceeds all capacities");
  EXPECT_TRUE(has_fatal(f));

  inst.customers[0].buckets = 1;
  inst.customer_snaps[1].snap_dist_m = 80.0;
  f = validate_instance(inst, 50.0);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::warning);
  EXPECT_EQ(f[0].customer_id, "c2");
  EXPECT_FALSE(has_fatal(f));
}

TEST(ProblemInstance, LowerBound) {
  const auto inst =
      fixtures::instance_from_costs({{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}}, {30, 20}, {40});
  EXPECT_EQ(inst.total_buckets(), 50);
  EXPECT_EQ(inst.max_capacity(), 40);
  EXPECT_EQ(inst.min_trips_lower_bound(), 2);
  const auto empty = fixtures::instance_from_costs({{{0}}}, {}, {40});
  EXPECT_EQ(empty.min_trips_lower_bound(), 1);
}

TEST(ProblemInstance, RestrictedKeepsAlignment) {
  fixtures::Rng rng(4);
  const auto inst = fixtures::random_instance(rng, {.customers = 6, .capacities = {5, 9}});
  const std::vector<std::size_t> keep{4, 1};
  const auto sub = inst.restricted_to(keep);
  ASSERT_EQ(sub.customer_count(), 2u);
  EXPECT_EQ(sub.customers[0].id, inst.customers[4].id);
  for (const auto& [name, m] : sub.matrices) {
    const auto& full = inst.matrices.at(name);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m.time(0, 1), full.time(0, 5));
    EXPECT_EQ(m.time(2, 1), full.time(2, 5));
  }
}

TEST(ProblemInstance, SerializationRoundTrip) {
  fixtures::Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    auto inst = fixtures::random_instance(rng, {.customers = k % 7, .capacities = {4, 6}});
    if (!inst.customers.empty()) inst.customers[0].phone = "+509 1";
    inst.focal_points.push_back({"f", {19.7, -72.1}, FacilityKind::focal_point});
    inst.excluded.push_back({"gone", "snap failed"});
    const auto text = serialize_instance(inst);
    const auto back = parse_instance(text);
    EXPECT_EQ(serialize_instance(back), text);
    EXPECT_EQ(back.customer_count(), inst.customer_count());
  }
}

TEST(ProblemInstance, AlignmentOnRandomTowns) {
  fixtures::Rng rng(31);
  for (int k = 0; k < 10; ++k) {
    const auto net = fixtures::random_network(rng, {.nodes = 40, .extra_edges = 30,
                                                    .classes = {"residential", "path"}});
    std::vector<Customer> cs;
    std::vector<NodeId> ids;
    for (const auto& [id, p] : net.nodes) ids.push_back(id);
    for (int i = 0; i < 8; ++i) {
      cs.push_back(at("c" + std::to_string(i), net.location(ids[(i * 7) % ids.size()])));
    }
    const std::vector<VehicleTypeSpec> f{{"tw", 10, "three_wheeler", 1},
                                         {"wb", 3, "wheelbarrow", 1}};
    const auto inst = build_instance(net, kProfiles, cs, depot_at(net.location(ids[0])), f, 20.0);
    for (const auto& [name, m] : inst.matrices) {
      ASSERT_EQ(m.size(), inst.customer_count() + 1);
      EXPECT_EQ(m.points[0], inst.depot_snap.node);
      for (std::size_t i = 0; i < inst.customer_count(); ++i) {
        EXPECT_EQ(m.points[i + 1], inst.customer_snaps[i].node);
        EXPECT_EQ(inst.customer_snaps[i].id, inst.customers[i].id);
      }
    }
    EXPECT_EQ(inst.customer_count() + inst.excluded.size(), cs.size());
  }
}
