#include <cmath>
#include <cstdio>

#include "fleetroute/export.hpp"

namespace fleetroute {

namespace {

std::string hms(Seconds s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                static_cast<long long>((s / 60) % 60), static_cast<long long>(s % 60));
  return buf;
}

std::string km(double meters) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", meters / 1000.0);
  return buf;
}

struct TripFigures {
  Seconds seconds = 0;
  double meters = 0.0;
};

// Travel from the matrices in whole seconds, whatever the solve granularity.
TripFigures measure(const ProblemInstance& inst, const Trip& trip) {
  const auto& m = inst.matrix_for(inst.fleet.at(trip.vehicle_type));
  TripFigures out;
  std::size_t prev = 0;
  for (std::size_t k = 0; k <= trip.stops.size(); ++k) {
    const std::size_t next = k < trip.stops.size() ? trip.stops[k] + 1 : 0;
    if (m.reachable(prev, next)) {
      out.seconds += m.time(prev, next);
      out.meters += m.dist(prev, next);
    }
    prev = next;
  }
  return out;
}

}  // namespace

std::string trip_change(long long trips, long long baseline_trips) {
  if (baseline_trips <= 0) return "n/a";
  const double decrease =
      (1.0 - static_cast<double>(trips) / static_cast<double>(baseline_trips)) * 100.0;
  const long long change = -std::llround(decrease);
  return (change > 0 ? "+" : "") + std::to_string(change) + "%";
}

std::string summary_report(std::span<const ZoneResult> zones,
                           std::optional<long long> baseline_trips) {
  long long trips = 0;
  long long buckets = 0;
  Seconds seconds = 0;
  double meters = 0.0;
  std::string table;
  for (const auto& z : zones) {
    for (std::size_t r = 0; r < z.solution->trips.size(); ++r) {
      const auto& trip = z.solution->trips[r];
      const auto fig = measure(*z.instance, trip);
      ++trips;
      buckets += trip.load_buckets;
      seconds += fig.seconds;
      meters += fig.meters;
      char line[256];
      std::snprintf(line, sizeof line, "%-16s %4zu  %-16s %5zu %7d  %9s %9s\n",
                    z.zone.empty() ? "-" : z.zone.c_str(), r + 1,
                    z.instance->fleet.at(trip.vehicle_type).name.c_str(),
                    trip.stops.size(), trip.load_buckets, hms(fig.seconds).c_str(),
                    km(fig.meters).c_str());
      table += line;
    }
  }

  std::string out;
  out += std::to_string(trips) + " trips, " + std::to_string(buckets) + " buckets\n";
  out += "trip count: " + std::to_string(trips) + "\n";
  out += "total travel: " + hms(seconds) + "\n";
  out += "total distance: " + km(meters) + " km\n";
  out += "buckets collected: " + std::to_string(buckets) + "\n";
  if (baseline_trips) {
    out += "trip change: " + trip_change(trips, *baseline_trips) + " (baseline " +
           std::to_string(*baseline_trips) + " trips)\n";
  }
  if (!table.empty()) {
    char header[256];
    std::snprintf(header, sizeof header, "%-16s %4s  %-16s %5s %7s  %9s %9s\n", "zone",
                  "trip", "vehicle_type", "stops", "buckets", "travel", "km");
    out += "\n";
    out += header;
    out += table;
  }
  return out;
}

std::string summary_report(const ProblemInstance& inst, const Solution& sol,
                           std::optional<long long> baseline_trips) {
  const ZoneResult zone{"", &inst, &sol};
  return summary_report(std::span<const ZoneResult>(&zone, 1), baseline_trips);
}

std::string summary_report(const ProblemInstance& inst, const Solution& sol,
                           const Solution& baseline) {
  return summary_report(inst, sol, baseline.trip_count);
}

}  // namespace fleetroute
