#!/usr/bin/env python3
"""Writes the synthetic example inputs in this directory.

A 12 x 10 street grid (~80 m blocks) with a primary road through the middle,
footway alleys, a dead-end track, a footpath pocket that only wheelbarrows
reach, and two customer zones.
Re-running produces identical files.
"""

import csv
import json
import math
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
LAT0, LON0 = 19.7570, -72.2030
STEP_M = 80.0
COLS, ROWS = 12, 10


def offset(row, col):
    dlat = row * STEP_M / 111_195.0
    dlon = col * STEP_M / (111_195.0 * math.cos(math.radians(LAT0)))
    return LAT0 + dlat, LON0 + dlon


def main():
    rng = random.Random(7)
    nodes = {}
    ways = []

    def node_id(r, c):
        return 1000 + r * COLS + c

    for r in range(ROWS):
        for c in range(COLS):
            lat, lon = offset(r, c)
            nodes[node_id(r, c)] = (round(lat, 7), round(lon, 7))

    wid = 5000
    for r in range(ROWS):
        cls = "primary" if r == ROWS // 2 else "residential"
        ways.append((wid, [node_id(r, c) for c in range(COLS)], cls, False))
        wid += 1
    for c in range(COLS):
        # odd columns are alleys between rows 2..7
        if c % 2 == 1:
            ways.append((wid, [node_id(r, c) for r in range(0, 3)], "residential", False))
            wid += 1
            ways.append((wid, [node_id(r, c) for r in range(2, 8)], "footway", False))
            wid += 1
            ways.append((wid, [node_id(r, c) for r in range(7, ROWS)], "residential", False))
            wid += 1
        else:
            ways.append((wid, [node_id(r, c) for r in range(ROWS)], "residential", c == 4))
            wid += 1

    # a dead-end track west of the grid with five houses along it
    spur = []
    for k in range(1, 6):
        nid = 9000 + k
        lat, lon = offset(3, -0.6 * k)
        nodes[nid] = (round(lat, 7), round(lon, 7))
        spur.append(nid)
    ways.append((wid, [node_id(3, 0)] + spur, "track", False))
    wid += 1

    # a footpath pocket east of the grid, wheelbarrows only
    pocket = []
    for k in range(1, 4):
        nid = 9100 + k
        lat, lon = offset(7 + 0.3 * k, COLS - 1 + 0.7 * k)
        nodes[nid] = (round(lat, 7), round(lon, 7))
        pocket.append(nid)
    ways.append((wid, [node_id(7, COLS - 1)] + pocket, "path", False))
    wid += 1

    with open(HERE / "network.osm", "w", encoding="utf-8") as f:
        f.write('<?xml version="1.0" encoding="UTF-8"?>\n<osm version="0.6" generator="generate.py">\n')
        for nid in sorted(nodes):
            lat, lon = nodes[nid]
            f.write(f'  <node id="{nid}" lat="{lat:.7f}" lon="{lon:.7f}"/>\n')
        for w, refs, cls, oneway in ways:
            f.write(f'  <way id="{w}">\n')
            for ref in refs:
                f.write(f'    <nd ref="{ref}"/>\n')
            f.write(f'    <tag k="highway" v="{cls}"/>\n')
            if oneway:
                f.write('    <tag k="oneway" v="yes"/>\n')
            f.write('  </way>\n')
        f.write('</osm>\n')

    profiles = [
        {
            "name": "three_wheeler",
            "speeds": {"primary": 25, "residential": 15, "track": 10},
            "access": {"footway": False, "path": False},
            "default_speed_kmh": 10,
        },
        {
            "name": "wheelbarrow",
            "speeds": {"primary": 4, "residential": 4, "footway": 3.5, "track": 3.5, "path": 3},
            "default_speed_kmh": 3,
        },
    ]
    (HERE / "profiles.json").write_text(json.dumps(profiles, indent=2) + "\n")

    fleet = [
        {"name": "three_wheeler", "capacity_buckets": 12, "profile": "three_wheeler", "count": 2},
        {"name": "wheelbarrow", "capacity_buckets": 3, "profile": "wheelbarrow", "count": 4},
    ]
    (HERE / "fleet.json").write_text(json.dumps(fleet, indent=2) + "\n")

    with open(HERE / "customers.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "lat", "lon", "buckets", "zone", "phone"])
        n = 0
        for zone, rows in (("Avyasyon", range(0, 5)), ("Shada", range(5, ROWS))):
            for _ in range(18):
                r = rng.choice(list(rows))
                c = rng.uniform(0, COLS - 1)
                lat, lon = offset(r + rng.uniform(-0.08, 0.08), c)
                n += 1
                phone = f"+509 3{rng.randint(1000000, 9999999)}" if rng.random() < 0.7 else ""
                w.writerow([f"C{n:03d}", f"{lat:.6f}", f"{lon:.6f}", rng.choice([1, 1, 1, 2]), zone, phone])
        for k in range(1, 6):
            lat, lon = offset(3 + 0.05, -0.6 * k)
            n += 1
            w.writerow([f"C{n:03d}", f"{lat:.6f}", f"{lon:.6f}", 1, "Avyasyon", ""])
        for k in range(1, 4):
            lat, lon = offset(7 + 0.3 * k + 0.04, COLS - 1 + 0.7 * k)
            n += 1
            w.writerow([f"C{n:03d}", f"{lat:.6f}", f"{lon:.6f}", 1, "Shada", ""])

    with open(HERE / "facilities.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "lat", "lon", "kind"])
        lat, lon = offset(ROWS // 2, COLS // 2)
        w.writerow(["depot", f"{lat:.6f}", f"{lon:.6f}", "depot"])
        lat, lon = offset(2, 2)
        w.writerow(["focal-north", f"{lat:.6f}", f"{lon:.6f}", "focal_point"])

    run = {
        "network": "network.osm",
        "profiles": "profiles.json",
        "customers": "customers.csv",
        "facilities": "facilities.csv",
        "fleet": "fleet.json",
        "out_dir": "out",
        "snap_radius_m": 150,
        "baseline_trips": 12,
        "solver": {
            "seed": 7,
            "time_limit_s": 5,
            "cluster_penalty_s": 120,
            "cluster_radius_m": 25,
            "granularity": "seconds",
        },
    }
    (HERE / "run.json").write_text(json.dumps(run, indent=2) + "\n")


if __name__ == "__main__":
    main()
