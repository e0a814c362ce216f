#!/usr/bin/env python3
"""Generate the synthetic town fixture: a 3x3 old-town core, four gates, a ring of
arterials and short outbound stubs at the exits, plus schedules and scenario configs.
The closed variant drops the stubs, so no street points out of the network.

Usage: make_town.py [output_dir]   (default: ../data relative to this script)
"""

import math
import sys
from pathlib import Path

CENTER = (2300.0, 1800.0)
RADII = (2300.0, 1800.0)
RING = 6
BLOCK = 30.0
GATE_OFFSET = 250.0
STUB = 100.0
CORE_SPEED = 8.3
ARTERIAL_SPEED = 13.9


def build_nodes():
    nodes = {}
    for k in range(RING):
        a = 2.0 * math.pi * k / RING
        x = CENTER[0] + RADII[0] * math.cos(a)
        y = CENTER[1] + RADII[1] * math.sin(a)
        # Even ring nodes take inflow; odd ones lead out through a stub.
        nodes[f"R{k}"] = (round(x, 3), round(y, 3), k % 2 == 0, False)
        if k % 2 == 1:
            nodes[f"T{k}"] = (round(x + STUB * math.cos(a), 3), round(y + STUB * math.sin(a), 3),
                              False, True)
    # The core sits on a cell center of the 12x10 grid near the middle.
    xs = [v[0] for v in nodes.values()]
    ys = [v[1] for v in nodes.values()]
    core = (min(xs) + 6.5 * (max(xs) - min(xs)) / 12, min(ys) + 5.5 * (max(ys) - min(ys)) / 10)
    for r in range(3):
        for c in range(3):
            x = core[0] + (c - 1) * BLOCK
            y = core[1] + (r - 1) * BLOCK
            garage = r == 1 and c == 1
            nodes[f"C{r}{c}"] = (round(x, 3), round(y, 3), garage, garage)
    # Gates sit diagonally off the core corners and collect the arterials.
    for r, c in ((0, 0), (0, 2), (2, 0), (2, 2)):
        cx, cy = nodes[f"C{r}{c}"][:2]
        d = GATE_OFFSET / math.sqrt(2.0)
        nodes[f"G{r}{c}"] = (round(cx + (c - 1) * d, 3), round(cy + (r - 1) * d, 3), False, False)
    return nodes


def build_streets(nodes):
    links = []  # (a, b, lanes, speed, stretch)
    for r in range(3):
        for c in range(3):
            if c < 2:
                links.append((f"C{r}{c}", f"C{r}{c + 1}", 1, CORE_SPEED, 1.0))
            if r < 2:
                links.append((f"C{r}{c}", f"C{r + 1}{c}", 1, CORE_SPEED, 1.0))
    gates = [n for n in nodes if n.startswith("G")]
    for g in gates:
        links.append((g, "C" + g[1:], 1, CORE_SPEED, 1.0))
    for k in range(RING):
        links.append((f"R{k}", f"R{(k + 1) % RING}", 1, ARTERIAL_SPEED, 1.05))
        rx, ry = nodes[f"R{k}"][:2]
        nearest = min(gates, key=lambda n: math.hypot(nodes[n][0] - rx, nodes[n][1] - ry))
        links.append((f"R{k}", nearest, 2, ARTERIAL_SPEED, 1.05))
    oneway = [(f"R{k}", f"T{k}", 1, ARTERIAL_SPEED, 1.0) for k in range(1, RING, 2)]
    streets = []
    for a, b, lanes, speed, stretch in links + oneway:
        ax, ay = nodes[a][:2]
        bx, by = nodes[b][:2]
        length = round(stretch * math.hypot(bx - ax, by - ay), 3)
        streets.append((f"{a}_{b}", a, b, length, lanes, speed))
        if (a, b, lanes, speed, stretch) not in oneway:
            streets.append((f"{b}_{a}", b, a, length, lanes, speed))
    return streets


def turning(nodes, streets):
    tables = {}
    for node in nodes:
        incoming = [s for s in streets if s[2] == node]
        outgoing = [s for s in streets if s[1] == node]
        rows = []
        if not outgoing:  # terminal exit
            continue
        for s_in in incoming:
            ax, ay = nodes[s_in[1]][:2]
            nx, ny = nodes[node][:2]
            din = (nx - ax, ny - ay)
            options = [s for s in outgoing if s[2] != s_in[1]]
            if not options:
                options = outgoing

            def alignment(s):
                bx, by = nodes[s[2]][:2]
                dout = (bx - nx, by - ny)
                return (din[0] * dout[0] + din[1] * dout[1]) / (
                    math.hypot(*din) * math.hypot(*dout))

            straight = max(options, key=alignment)
            weights = {s[0]: (3.0 if s is straight else 1.0) for s in options}
            total = sum(weights.values())
            for sid, w in weights.items():
                rows.append((s_in[0], sid, w / total))
        tables[node] = rows
    return tables


def write_network(path, nodes, streets, tables):
    with open(path, "w") as f:
        f.write("# synthetic town: 3x3 core with 30 m blocks, four gates, ring of arterials\n")
        f.write("[intersections]\n# id x y entry exit\n")
        for n, (x, y, entry, exit_) in nodes.items():
            f.write(f"{n} {x} {y} {int(entry)} {int(exit_)}\n")
        f.write("\n[streets]\n# id from to length lanes vmax\n")
        for s in streets:
            f.write(" ".join(str(v) for v in s) + "\n")
        for n, rows in tables.items():
            f.write(f"\n[turning {n}]\n")
            for a, b, alpha in rows:
                f.write(f"{a} {b} {alpha:.17g}\n")


def day_profile(hour):
    return (40.0 + 350.0 * math.exp(-((hour - 8.0) / 1.2) ** 2)
            + 300.0 * math.exp(-((hour - 17.0) / 1.5) ** 2))


def write_day_schedule(path, nodes):
    with open(path, "w") as f:
        f.write("# daily demand, peaks at 08:00 and 17:00\nunits veh/h\nminutes 1440\n")
        for n, (_, _, entry, exit_) in nodes.items():
            if n == "C11":
                continue
            if entry:
                for block in range(96):
                    first, last = 15 * block, 15 * block + 14
                    value = day_profile((first + 7.5) / 60.0)
                    f.write(f"{n} in {first}-{last} {value:.6g}\n")
            if exit_:
                f.write(f"{n} out 0-1439 1200\n")


def write_core_schedule(path):
    with open(path, "w") as f:
        f.write("# garage release in the core during the first hour, no exits\n")
        f.write("units veh/h\nminutes 60\nC11 in 0-59 600\n")


def write_constant_schedule(path, nodes):
    with open(path, "w") as f:
        f.write("# constant demand at every ring entry\n")
        f.write("units veh/h\nminutes 720\n")
        for n, (_, _, entry, exit_) in nodes.items():
            if n == "C11":
                continue
            if entry:
                f.write(f"{n} in 0-719 300\n")
            if exit_:
                f.write(f"{n} out 0-719 1200\n")


def closed_variant(nodes, streets):
    kept = {n: v for n, v in nodes.items() if not n.startswith("T")}
    return kept, [s for s in streets if s[1] in kept and s[2] in kept]


def write_config(path, schedule, extra, network="town.net", pad=3):
    with open(path, "w") as f:
        f.write(f"network = {network}\n")
        f.write(f"schedule = {schedule}\n")
        f.write(f"nx = 12\nny = 10\npad = {pad}\n")
        f.write("".join(f"{k} = {v}\n" for k, v in extra))


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
    out.mkdir(parents=True, exist_ok=True)
    nodes = build_nodes()
    streets = build_streets(nodes)
    write_network(out / "town.net", nodes, streets, turning(nodes, streets))
    closed_nodes, closed_streets = closed_variant(nodes, streets)
    write_network(out / "town_closed.net", closed_nodes, closed_streets,
                  turning(closed_nodes, closed_streets))
    write_day_schedule(out / "town_day.sched", nodes)
    write_core_schedule(out / "town_core.sched")
    write_constant_schedule(out / "town_const.sched", nodes)
    write_config(out / "town.cfg", "town_day.sched",
                 [("horizon", 21600), ("output", "../out/town")])
    write_config(out / "town_strict.cfg", "town_day.sched",
                 [("horizon", 21600), ("mode", "strict"), ("c_mix", 0.57),
                  ("output", "../out/town_strict")])
    write_config(out / "town_core.cfg", "town_core.sched",
                 [("horizon", 3600), ("output", "../out/town_core")],
                 network="town_closed.net", pad=8)


if __name__ == "__main__":
    main()
