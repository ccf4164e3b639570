"""QUBO subproblems induced by freezing all but a window of the incumbent.

The sampler module plays the role of an attached annealing backend: the main
loop formulates a small binary subproblem around the incumbent, samples it,
and merges decoded solutions back.  Subproblems are derived from the model's
problem-family tag (set by the builders); models without a recognized tag get
no subproblem queries, since translating arbitrary expression graphs to QUBO
is out of scope.

Window semantics per decision kind:

* permutations: a contiguous segment of tour positions is re-sequenced, with
  one-hot (city x position) bits;
* subsets: a pool of candidate items is re-chosen against the remaining
  capacity, with item + slack bits;
* bit arrays: a subset of nodes is re-assigned, with one bit per node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..modeling import Model
from ..qubo.core import Qubo
from ..qubo.encode import auto_penalty, kp_to_qubo, mcp_to_qubo, tsp_to_qubo
from ..state import State


@dataclass
class QmQuery:
    """A QUBO subproblem plus the mapping back to full states."""

    qubo: Qubo
    decode: Callable[[np.ndarray], State | None]
    label: str


def qm_query(model: Model, incumbent: State, window: int,
             rng: np.random.Generator) -> QmQuery | None:
    """Subproblem around ``incumbent`` with at most ``window`` free elements.

    Returns ``None`` for models without a recognized problem-family tag.
    Windows larger than the decision are clamped by the caller's config
    contract (the clamp itself happens here).
    """
    family = model.tags.get("family")
    instance = model.tags.get("instance")
    if family not in ("tsp", "kp", "mc") or instance is None:
        return None
    if family == "tsp":
        return _tsp_window(instance, incumbent, window, rng)
    if family == "kp":
        return _kp_window(instance, incumbent, window, rng)
    return _mc_window(instance, incumbent, window, rng)


def _tsp_window(instance, incumbent: State, window: int, rng) -> QmQuery:
    n = instance.n
    w = min(window, n)
    tour = incumbent.values[0]
    if w == n:
        qubo, decode = tsp_to_qubo(instance)
        return QmQuery(qubo, decode, f"tsp-full-{n}")

    p0 = int(rng.integers(0, n - w + 1))
    cities = tour[p0 : p0 + w]
    prev = int(tour[p0 - 1]) if p0 > 0 else int(tour[n - 1])
    nxt = int(tour[(p0 + w) % n])
    c = instance.cost_matrix

    coeffs: list[float] = []
    qubo = Qubo(w * w)

    def bit(a: int, q: int) -> int:
        return a * w + q

    for a in range(w):
        ca = int(cities[a])
        if c[prev, ca]:
            qubo.add(bit(a, 0), bit(a, 0), c[prev, ca])
            coeffs.append(c[prev, ca])
        if c[ca, nxt]:
            qubo.add(bit(a, w - 1), bit(a, w - 1), c[ca, nxt])
            coeffs.append(c[ca, nxt])
    for q in range(w - 1):
        for a in range(w):
            for b in range(w):
                if a != b:
                    cost = c[int(cities[a]), int(cities[b])]
                    if cost:
                        qubo.add(bit(a, q), bit(b, q + 1), cost)
                        coeffs.append(cost)
    a_pen = auto_penalty(coeffs)
    for a in range(w):
        _one_hot(qubo, [bit(a, q) for q in range(w)], a_pen)
    for q in range(w):
        _one_hot(qubo, [bit(a, q) for a in range(w)], a_pen)

    base = tour.copy()

    def decode(bits) -> State | None:
        grid = np.asarray(bits).reshape(w, w)
        if (grid.sum(axis=0) != 1).any() or (grid.sum(axis=1) != 1).any():
            return None
        order = np.argmax(grid, axis=0)
        new_tour = base.copy()
        new_tour[p0 : p0 + w] = cities[order]
        return State([new_tour])

    return QmQuery(qubo, decode, f"tsp-seg-{p0}-{w}")


def _one_hot(qubo: Qubo, indices: list[int], a: float) -> None:
    qubo.offset += a
    for t, i in enumerate(indices):
        qubo.add(i, i, -a)
        for j in indices[t + 1 :]:
            qubo.add(i, j, 2.0 * a)


def _kp_window(instance, incumbent: State, window: int, rng) -> QmQuery:
    from ..problems.instances import KpInstance

    n = instance.n
    w = min(window, n)
    inside = incumbent.values[0]
    outside = np.setdiff1d(np.arange(n), inside, assume_unique=True)
    # bias the pool toward a mix of current in/out items
    take_in = min(inside.size, w // 2)
    take_out = min(outside.size, w - take_in)
    take_in = min(inside.size, w - take_out)
    pool_in = rng.choice(inside, take_in, replace=False) if take_in else np.empty(0, np.int64)
    pool_out = rng.choice(outside, take_out, replace=False) if take_out else np.empty(0, np.int64)
    pool = np.sort(np.concatenate([pool_in, pool_out]).astype(np.int64))

    frozen_in = np.setdiff1d(inside, pool, assume_unique=False)
    remaining = max(0, int(instance.capacity) - int(instance.weights[frozen_in].sum()))
    sub = KpInstance(
        f"{instance.name}-window",
        pool.size,
        instance.profits[pool],
        instance.weights[pool],
        remaining,
    )
    qubo, sub_decode = kp_to_qubo(sub)
    cap = int(instance.capacity)
    weights = instance.weights

    def decode(bits) -> State | None:
        sub_state = sub_decode(bits)
        if sub_state is None:
            return None
        chosen = np.sort(np.concatenate([frozen_in, pool[sub_state.values[0]]]))
        if int(weights[chosen].sum()) > cap:
            return None
        return State([chosen])

    return QmQuery(qubo, decode, f"kp-pool-{pool.size}")


def _mc_window(instance, incumbent: State, window: int, rng) -> QmQuery:
    n = instance.n
    w = min(window, n)
    bits_full = incumbent.values[0]
    if w == n:
        qubo, decode = mcp_to_qubo(instance)
        return QmQuery(qubo, decode, f"mc-full-{n}")

    free = np.sort(rng.choice(n, w, replace=False))
    pos = {int(node): i for i, node in enumerate(free)}
    qubo = Qubo(w)
    for u, v, wt in instance.edges:
        fu, fv = u in pos, v in pos
        if fu and fv:
            qubo.add(pos[u], pos[u], -wt)
            qubo.add(pos[v], pos[v], -wt)
            qubo.add(pos[u], pos[v], 2.0 * wt)
        elif fu or fv:
            node, fixed = (u, v) if fu else (v, u)
            if bits_full[fixed] == 0:
                qubo.add(pos[node], pos[node], -wt)
            else:
                qubo.offset -= wt
                qubo.add(pos[node], pos[node], wt)
        elif bits_full[u] != bits_full[v]:
            qubo.offset -= wt

    base = bits_full.copy()

    def decode(bits) -> State:
        new_bits = base.copy()
        new_bits[free] = np.asarray(bits, dtype=np.int64)
        return State([new_bits])

    return QmQuery(qubo, decode, f"mc-free-{w}")
