#!/usr/bin/env python3
"""Write data/hurdat2_sample.txt: synthetic Atlantic storms in HURDAT2 layout.

The tracks are invented. Each storm drifts west-northwest in the trades,
recurves around a random latitude and accelerates to the northeast, with its
own forward-speed history. Two seasons: 1994 holds 10 storms that pass the
default selection (20 synoptic fixes) and 1995 holds 7; each season also has
one storm too short to qualify. Some storms carry off-synoptic landfall rows.

    python3 tools/make_hurdat2_sample.py [output]
"""

import datetime as dt
import math
import random
import sys

SEED = 20130601
STORMS = 19
NAMES = [
    "ARLO", "BRISA", "CORVIN", "DELLA", "EMBER", "FARO", "GILDA", "HOLT",
    "IRIS", "JUNO", "KEELY", "LARS", "MIRA", "NOLAN", "ORLA", "PIET",
    "QUILL", "ROSSA", "SILAS",
]


def fmt_lat(lat):
    return f"{abs(lat):4.1f}{'N' if lat >= 0 else 'S'}"


def fmt_lon(lon):
    return f"{abs(lon):5.1f}{'W' if lon < 0 else 'E'}"


def status(wind):
    if wind < 34:
        return "TD"
    if wind < 64:
        return "TS"
    return "HU"


def track(rng, fixes):
    lat = rng.uniform(11.0, 17.0)
    lon = -rng.uniform(38.0, 58.0)
    recurve = rng.uniform(24.0, 31.0)
    # forward speed in degrees per 6 h, with slow and fast spells
    base = rng.uniform(1.0, 1.6)
    spells = [(rng.uniform(0, 1), rng.uniform(0.1, 0.25), rng.uniform(0.3, 1.8)) for _ in range(3)]
    peak = rng.uniform(70, 130)
    points = []
    for k in range(fixes):
        s = k / (fixes - 1)
        factor = 1.0
        for centre, width, level in spells:
            factor += (level - 1.0) * math.exp(-((s - centre) / width) ** 2)
        speed = base * factor * (1.0 + 0.5 * min(1.0, max(0.0, lat - recurve) / 10.0))
        # heading turns from WNW to NE as the storm passes the recurvature latitude
        blend = 1.0 / (1.0 + math.exp(-(lat - recurve) / 1.5))
        heading = math.radians((1 - blend) * 160.0 + blend * 30.0 + rng.uniform(-8, 8))
        wind = int(round(5 * round((25 + (peak - 25) * math.sin(math.pi * min(1.0, 1.15 * s))) / 5)))
        wind = max(wind, 25)
        pressure = int(round(1010 - 0.9 * (wind - 25)))
        points.append((lat, lon, wind, pressure))
        lat += speed * math.sin(heading) * 0.8 * max(0.2, 1.0 - max(0.0, lat - 40.0) / 15.0)
        lon += speed * math.cos(heading)
    return points


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/hurdat2_sample.txt"
    rng = random.Random(SEED)
    start = dt.datetime(1994, 6, 20)
    lines = []
    for n in range(STORMS):
        # two seasons: 11 storms in 1994, 8 in 1995; one short storm in each
        start = dt.datetime(1995, 6, 25) if n == 11 else start + dt.timedelta(days=rng.randint(3, 12))
        fixes = rng.randint(12, 19) if n in (2, 13) else rng.randint(22, 44)
        points = track(rng, fixes)
        landfall = rng.randrange(4, fixes - 2) if n % 5 == 1 else None
        rows = []
        for k, (lat, lon, wind, pressure) in enumerate(points):
            when = start + dt.timedelta(hours=6 * k)
            rows.append((when, "", lat, lon, wind, pressure))
            if k == landfall:
                nxt = points[k + 1]
                rows.append((when + dt.timedelta(hours=2, minutes=30), "L", 0.6 * lat + 0.4 * nxt[0],
                             0.6 * lon + 0.4 * nxt[1], wind, pressure))
        year = start.year
        number = sum(1 for l in lines if l.startswith("AL") and l[4:8] == str(year)) + 1
        lines.append(f"AL{number:02d}{year},{NAMES[n]:>19},{len(rows):>7},")
        for when, rec, lat, lon, wind, pressure in rows:
            radii = ", ".join(["-999"] * 12)
            lines.append(
                f"{when:%Y%m%d}, {when:%H%M}, {rec:>1}, {status(wind)}, {fmt_lat(lat)}, {fmt_lon(lon)}, "
                f"{wind:>3}, {pressure:>4}, {radii},"
            )
    with open(out, "w", encoding="ascii") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
