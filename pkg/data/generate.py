"""Regenerate the bundled instance files and reference optima.

Every artifact in this directory is deterministic output of this script.

The two larger TSP instances (disc51, disc52) place nodes in strictly convex
position on a jittered circle, which makes the hull cycle (identity tour) the
provably optimal tour: any other tour contains a crossing, and uncrossing it
shortens the tour by at least the minimum quadrilateral gain.  The script
certifies that this gain exceeds the total nearest-integer rounding slack, so
the identity tour is optimal for the rounded distance matrix too; the
certified value goes into optima.txt.  Run as:

    python3 data/generate.py
"""

import math
import sys
from pathlib import Path

import numpy as np

from combopt.problems import (
    KpInstance,
    emit_kplib,
    emit_maxcut,
    emit_tsplib_euc2d,
    euc2d_matrix,
    exact_kp,
    exact_maxcut,
    exact_tsp,
    generate_random_maxcut,
    parse_tsplib,
)

HERE = Path(__file__).parent


def convex_circle_coords(n: int, radius: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    step = 2 * math.pi / n
    angles = np.arange(n) * step + rng.uniform(-0.3, 0.3, n) * step
    coords = np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])
    return np.round(coords)


def is_strictly_convex(coords: np.ndarray) -> bool:
    n = len(coords)
    for i in range(n):
        a, b, c = coords[i], coords[(i + 1) % n], coords[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if cross <= 0:
            return False
    return True


def min_uncross_gain(coords: np.ndarray) -> float:
    """min over hull-ordered quadruples a<b<c<d of
    d(a,c) + d(b,d) - d(a,b) - d(c,d): the least shortening any single
    2-opt uncrossing can achieve on these points."""
    n = len(coords)
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    worst = math.inf
    for a in range(n - 3):
        for b in range(a + 1, n - 2):
            # vectorize over (c, d): c in b+1..n-2, d in c+1..n-1
            for c in range(b + 1, n - 1):
                d = np.arange(c + 1, n)
                gain = dist[a, c] + dist[b, d] - dist[a, b] - dist[c, d]
                worst = min(worst, float(gain.min()))
    return worst


def certified_hull_instance(name: str, n: int, seed: int) -> tuple[str, float]:
    radius = 250_000.0
    coords = convex_circle_coords(n, radius, seed)
    assert is_strictly_convex(coords), f"{name}: points not strictly convex"
    gain = min_uncross_gain(coords)
    slack = float(n) + 1.0  # nearest-integer rounding moves any tour < n/2 each way
    assert gain > slack, f"{name}: uncross gain {gain:.1f} <= rounding slack {slack}"
    matrix = euc2d_matrix(coords)
    optimum = float(matrix[np.arange(n), np.roll(np.arange(n), -1)].sum())
    text = emit_tsplib_euc2d(name, coords)
    (HERE / f"{name}.tsp").write_text(text)
    print(f"{name}: n={n} optimum={optimum:.0f} (uncross gain {gain:.1f} > slack {slack})")
    return name, optimum


def small_tsp(name: str, n: int, seed: int) -> tuple[str, float]:
    rng = np.random.default_rng(seed)
    coords = np.round(rng.uniform(0, 500, (n, 2)))
    text = emit_tsplib_euc2d(name, coords)
    (HERE / f"{name}.tsp").write_text(text)
    inst = parse_tsplib(text, name)
    optimum, _ = exact_tsp(inst)
    print(f"{name}: n={n} optimum={optimum:.0f}")
    return name, optimum


def knapsack_50(name: str, capacity: int, seed: int) -> tuple[str, float]:
    rng = np.random.default_rng(seed)
    n = 50
    weights = rng.integers(100, 901, n)
    profits = weights + rng.integers(0, 201, n)
    inst = KpInstance(name, n, profits, weights, capacity)
    assert weights.sum() > 2 * capacity, "capacity should bind"
    (HERE / f"{name}.kp").write_text(emit_kplib(inst))
    optimum, _ = exact_kp(inst)
    print(f"{name}: n={n} capacity={capacity} optimum={optimum}")
    return name, float(optimum)


def maxcut_10(name: str, target_edges: int) -> tuple[str, float]:
    for seed in range(1000):
        inst = generate_random_maxcut(10, target_edges / 45.0, (1, 10), seed=seed, name=name)
        if inst.m == target_edges:
            (HERE / f"{name}.mc").write_text(emit_maxcut(inst))
            optimum, _ = exact_maxcut(inst)
            print(f"{name}: n=10 m={inst.m} optimum={optimum:.0f} (seed {seed})")
            return name, optimum
    raise RuntimeError(f"no seed yields exactly {target_edges} edges")


def main() -> int:
    optima: list[tuple[str, float]] = []
    optima.append(small_tsp("tsp7", 7, seed=107))
    optima.append(small_tsp("tsp8", 8, seed=108))
    optima.append(small_tsp("tsp9", 9, seed=109))
    optima.append(certified_hull_instance("disc51", 51, seed=151))
    optima.append(certified_hull_instance("disc52", 52, seed=152))
    optima.append(knapsack_50("kp50", capacity=11793, seed=150))
    optima.append(maxcut_10("mc10", target_edges=37))

    lines = [f"{name} {value:.12g}" for name, value in optima]
    (HERE / "optima.txt").write_text("\n".join(lines) + "\n")
    print("wrote optima.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main())
