#!/usr/bin/env python3
"""Regenerates data/switzerland.csv and data/us.csv from the GeoNames city
tables bundled with the `geonamescache` package (CC BY 4.0, geonames.org).

    pip install geonamescache
    python3 tools/make_locations.py data/

Switzerland: the 154 most populous places (cities1000 table).
USA: the 996 most populous places above 40,000 inhabitants, with the
Ashburn, VA data-center hub always included and labelled "Ashbourne, VA".
"""
import csv
import json
import os
import sys
import unicodedata

import geonamescache


def fold(name):
    return "".join(
        c for c in unicodedata.normalize("NFKD", name) if not unicodedata.combining(c)
    )


def load():
    path = os.path.join(os.path.dirname(geonamescache.__file__), "data", "cities1000.json")
    with open(path, encoding="utf-8") as f:
        return list(json.load(f).values())


def write(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "lat", "lon", "population"])
        for name, lat, lon, pop in rows:
            w.writerow([name, f"{lat:.5f}", f"{lon:.5f}", pop])


def main(out_dir):
    cities = load()

    ch = sorted(
        (c for c in cities if c["countrycode"] == "CH"),
        key=lambda c: (-c["population"], c["geonameid"]),
    )[:154]
    write(
        os.path.join(out_dir, "switzerland.csv"),
        [(fold(c["name"]), c["latitude"], c["longitude"], c["population"]) for c in ch],
    )

    us = sorted(
        (c for c in cities if c["countrycode"] == "US" and c["population"] > 40000),
        key=lambda c: (-c["population"], c["geonameid"]),
    )
    ashburn = next(c for c in us if c["name"] == "Ashburn" and c["admin1code"] == "VA")
    us = [c for c in us if c is not ashburn][:995] + [ashburn]
    rows = []
    for c in us:
        label = "Ashbourne" if c is ashburn else fold(c["name"])
        rows.append((f"{label}, {c['admin1code']}", c["latitude"], c["longitude"], c["population"]))
    write(os.path.join(out_dir, "us.csv"), rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
