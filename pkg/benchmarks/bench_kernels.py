#!/usr/bin/env python3
"""Compare the compiled search kernel against the pure-Python twin.

Workloads:
  * the shipped 6-component network instance (full enumeration),
  * a denser 6-component variant with a larger search space,
  * a batch of 300 random ground programs.

Run: python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from genprograms import random_ground_program  # noqa: E402

from aspobj import (  # noqa: E402
    ClassRegistry, bind_params, encode_facts, enumerate_models, ground, parse_spec,
)
from aspobj.solver import available_kernels  # noqa: E402

SPEC_DIR = Path(__file__).resolve().parent.parent / "specs"


class Component:
    def __init__(self, nr_sock, ctype):
        self._n, self._t = nr_sock, ctype

    def getNrSock(self):
        return self._n

    def getType(self):
        return self._t


class Node:
    def __init__(self, c):
        self.c = c
        self.nodes = []

    def addNode(self, n):
        self.nodes.append(n)


def network_program(socks, types, nr_cables):
    registry = ClassRegistry.from_classes(
        {"Node": Node, "Component": Component},
        accessor_methods={"Component": ("getNrSock", "getType")},
        invocable_methods={"Node": ("addNode",)})
    spec = parse_spec((SPEC_DIR / "network.ospec").read_text())
    comps = [Component(s, t) for s, t in zip(socks, types)]
    universe = bind_params(spec, [comps, nr_cables], registry)
    return ground(spec, encode_facts(universe), universe)


def time_kernel(program, kernel, repeat=3):
    best = float("inf")
    models = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        models = enumerate_models(program, kernel=kernel)
        best = min(best, time.perf_counter() - t0)
    return best, len(models)


def bench_random(kernel, n_programs=300, seed=2025):
    rng = random.Random(seed)
    programs = [random_ground_program(rng, max_atoms=8, max_rules=12)
                for _ in range(n_programs)]
    t0 = time.perf_counter()
    total = sum(len(enumerate_models(p, kernel=kernel)) for p in programs)
    return time.perf_counter() - t0, total


def main():
    kernels = sorted(available_kernels(), reverse=True)  # pure first
    print(f"kernels available: {', '.join(kernels)}")
    workloads = [
        ("network (shipped instance)",
         network_program((1, 2, 2, 2, 3, 3), (1, 2, 3, 1, 2, 3), 9)),
        ("network (dense variant)",
         network_program((2, 3, 3, 2, 3, 4), (1, 2, 3, 1, 2, 3), 9)),
    ]
    header = f"{'workload':34} {'kernel':9} {'models':>7} {'time':>9}"
    print(header)
    print("-" * len(header))
    baseline = 0.0
    for name, program in workloads:
        for kernel in kernels:
            elapsed, n = time_kernel(program, kernel)
            if kernel == "pure":
                baseline = elapsed
                speedup = ""
            else:
                speedup = f"  ({baseline / elapsed:.1f}x vs pure)"
            print(f"{name:34} {kernel:9} {n:>7} {elapsed:>8.3f}s{speedup}")
    for kernel in kernels:
        elapsed, total = bench_random(kernel)
        if kernel == "pure":
            baseline = elapsed
            speedup = ""
        else:
            speedup = f"  ({baseline / elapsed:.1f}x vs pure)"
        print(f"{'300 random programs':34} {kernel:9} {total:>7} {elapsed:>8.3f}s{speedup}")


if __name__ == "__main__":
    main()
