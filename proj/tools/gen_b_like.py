#!/usr/bin/env python3
"""Generates the bundled b-like benchmark corpus.

Seeded sparse random instances in the style of classic 50-100 node benchmark
sets: integer edge costs 1..10, a random spanning tree plus extra edges,
terminal counts small enough that the exact solver can certify optima for
bounds.txt. Rerunning reproduces the shipped files byte for byte.
"""
import random
import os
import sys

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "b_like")

SPECS = []
sid = 1
for n, extra_factor in [(50, 0.26), (50, 1.0), (75, 0.25), (75, 0.9), (100, 0.25), (100, 0.8)]:
    for r in (9, 10, 11):
        SPECS.append((sid, n, extra_factor, r))
        sid += 1


def gen(sid, n, extra_factor, nterm):
    rng = random.Random(10_000 + sid)
    edges = {}
    order = list(range(1, n + 1))
    rng.shuffle(order)
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges[(min(a, b), max(a, b))] = rng.randint(1, 10)
    target = n - 1 + int(n * extra_factor)
    while len(edges) < target:
        a, b = rng.sample(range(1, n + 1), 2)
        key = (min(a, b), max(a, b))
        if key not in edges:
            edges[key] = rng.randint(1, 10)
    terminals = sorted(rng.sample(range(1, n + 1), nterm))
    return sorted(edges.items()), terminals


def write_stp(path, name, n, edges, terminals):
    with open(path, "w") as f:
        f.write("33D32945 STP File, STP Format Version 1.0\n\n")
        f.write("SECTION Comment\n")
        f.write('Name    "%s"\n' % name)
        f.write('Creator "bundled"\n')
        f.write('Remark  "seeded random sparse instance"\n')
        f.write("END\n\n")
        f.write("SECTION Graph\nNodes %d\nEdges %d\n" % (n, len(edges)))
        for (a, b), c in edges:
            f.write("E %d %d %d\n" % (a, b, c))
        f.write("END\n\nSECTION Terminals\nTerminals %d\n" % len(terminals))
        for t in terminals:
            f.write("T %d\n" % t)
        f.write("END\n\nEOF\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    for sid, n, extra, r in SPECS:
        name = "blike%02d" % sid
        edges, terminals = gen(sid, n, extra, r)
        write_stp(os.path.join(OUT, name + ".stp"), name, n, edges, terminals)
        print(name, "n=%d m=%d r=%d" % (n, len(edges), r))


if __name__ == "__main__":
    sys.exit(main())
