"""Exact solvers for small instances, used as reference optima.

Size caps keep everything in the seconds range on a desktop:
enumeration for TSP up to 10 nodes, Held-Karp dynamic programming up to 18,
capacity dynamic programming for knapsack, bipartition enumeration for
maximum cut up to 20 nodes.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import SizeError
from .instances import KpInstance, McInstance, TspInstance

TSP_ENUM_CAP = 10
TSP_HELD_KARP_CAP = 18
MAXCUT_ENUM_CAP = 20
KP_DP_CELL_CAP = 50_000_000


def tsp_enumerate(instance: TspInstance) -> tuple[float, list[int]]:
    """Optimal tour by fixing node 0 and enumerating the rest."""
    n = instance.n
    if n > TSP_ENUM_CAP:
        raise SizeError(f"enumeration capped at {TSP_ENUM_CAP} nodes, got {n}")
    c = instance.cost_matrix
    if n == 1:
        return 0.0, [0]
    perms = np.array(list(itertools.permutations(range(1, n))), dtype=np.int64)
    tours = np.concatenate([np.zeros((len(perms), 1), dtype=np.int64), perms], axis=1)
    costs = c[tours[:, :-1], tours[:, 1:]].sum(axis=1) + c[tours[:, -1], tours[:, 0]]
    best = int(np.argmin(costs))
    return float(costs[best]), tours[best].tolist()


def tsp_held_karp(instance: TspInstance) -> tuple[float, list[int]]:
    """Optimal tour via subset dynamic programming."""
    n = instance.n
    if n > TSP_HELD_KARP_CAP:
        raise SizeError(f"Held-Karp capped at {TSP_HELD_KARP_CAP} nodes, got {n}")
    c = instance.cost_matrix
    if n == 1:
        return 0.0, [0]
    m = n - 1  # cities 1..n-1; city 0 is the fixed start
    size = 1 << m
    dp = np.full((size, m), np.inf)
    parent = np.full((size, m), -1, dtype=np.int64)
    for j in range(m):
        dp[1 << j, j] = c[0, j + 1]
    for mask in range(1, size):
        members = [j for j in range(m) if mask & (1 << j)]
        if len(members) < 2:
            continue
        for j in members:
            prev_mask = mask ^ (1 << j)
            prev = dp[prev_mask, :] + c[1:, j + 1]
            prev[j] = np.inf
            k = int(np.argmin(prev))
            if prev[k] < dp[mask, j]:
                dp[mask, j] = prev[k]
                parent[mask, j] = k
    full = size - 1
    totals = dp[full, :] + c[1:, 0]
    j = int(np.argmin(totals))
    value = float(totals[j])
    tour = [j + 1]
    mask = full
    while parent[mask, j] >= 0:
        k = int(parent[mask, j])
        mask ^= 1 << j
        j = k
        tour.append(j + 1)
    tour.append(0)
    tour.reverse()
    return value, tour


def exact_tsp(instance: TspInstance) -> tuple[float, list[int]]:
    """Provably optimal tour value and one optimal tour."""
    if instance.n <= TSP_ENUM_CAP:
        return tsp_enumerate(instance)
    return tsp_held_karp(instance)


def exact_kp(instance: KpInstance) -> tuple[int, list[int]]:
    """Optimal knapsack profit via dynamic programming over capacity."""
    n, cap = instance.n, int(instance.capacity)
    if n * (cap + 1) > KP_DP_CELL_CAP:
        raise SizeError(f"knapsack DP table would need {n * (cap + 1)} cells")
    w = instance.weights
    v = instance.profits
    dp = np.zeros(cap + 1, dtype=np.int64)
    keep = np.zeros((n, cap + 1), dtype=bool)
    for i in range(n):
        wi, vi = int(w[i]), int(v[i])
        if wi > cap:
            continue
        cand = dp[: cap + 1 - wi] + vi
        better = cand > dp[wi:]
        keep[i, wi:] = better
        dp[wi:] = np.where(better, cand, dp[wi:])
    items = []
    c = cap
    for i in range(n - 1, -1, -1):
        if keep[i, c]:
            items.append(i)
            c -= int(w[i])
    items.reverse()
    return int(dp[cap]), items


def exact_maxcut(instance: McInstance) -> tuple[float, list[int]]:
    """Optimal cut by enumerating bipartitions (node 0 fixed to side 0)."""
    n = instance.n
    if n > MAXCUT_ENUM_CAP:
        raise SizeError(f"maxcut enumeration capped at {MAXCUT_ENUM_CAP} nodes, got {n}")
    count = 1 << max(0, n - 1)
    codes = np.arange(count, dtype=np.uint64)
    cut = np.zeros(count)
    for u, v, w in instance.edges:
        # node 0 is fixed on side 0, so bit k encodes node k+1
        bu = np.zeros(count, dtype=bool) if u == 0 else (codes >> np.uint64(u - 1)) & np.uint64(1) == 1
        bv = np.zeros(count, dtype=bool) if v == 0 else (codes >> np.uint64(v - 1)) & np.uint64(1) == 1
        cut += w * (bu != bv)
    best = int(np.argmax(cut))
    bits = [0] + [(best >> k) & 1 for k in range(n - 1)]
    return float(cut[best]), bits
