"""Metropolis sweep kernels for the QUBO annealer.

Two interchangeable implementations of the same algorithm: a numba-compiled
kernel for speed and a pure-numpy twin used when numba is unavailable or
disabled via ``COMBOPT_NO_NUMBA=1``.  Both consume a counter-based splitmix64
random stream, so for a given seed they produce bit-identical trajectories;
``tests`` and ``benchmarks/sampler_bench.py`` rely on that equivalence.

All randomness is addressed, never stateful: uniform ``u(k)`` is a pure
function of (key, counter k), which lets the numpy twin vectorize a whole
sweep of uniforms while the numba kernel computes them one at a time.
"""

from __future__ import annotations

import math
import os

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / float(1 << 53)

_DISABLED = os.environ.get("COMBOPT_NO_NUMBA", "").lower() in ("1", "true", "yes")

if not _DISABLED:
    try:
        import numba
        from numba import njit

        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_AVAILABLE = False
else:
    NUMBA_AVAILABLE = False


def mix64(z: np.uint64) -> np.uint64:
    """splitmix64 finalizer; also vectorizes over uint64 arrays.

    Wraparound is intended; numpy only warns for scalar overflow, so the
    scalar path is wrapped in errstate.
    """
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z ^= z >> np.uint64(27)
        z *= _MIX2
        return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> np.uint64:
    """Derive an independent 64-bit key for (seed, stream)."""
    with np.errstate(over="ignore"):
        z = mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + _GOLDEN)
        return mix64(z ^ np.uint64(stream))


def uniforms(key: np.uint64, start: int, count: int) -> np.ndarray:
    """Vector of uniforms in [0, 1) for counters start..start+count-1."""
    counters = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = mix64(key + (counters + np.uint64(1)) * _GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


def random_bits(key: np.uint64, start: int, count: int) -> np.ndarray:
    counters = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = mix64(key + (counters + np.uint64(1)) * _GOLDEN)
    return (z & np.uint64(1)).astype(np.int8)


def anneal_numpy(
    h: np.ndarray,
    s: np.ndarray,
    betas: np.ndarray,
    reads: int,
    key_init: np.uint64,
    key_flip: np.uint64,
) -> tuple[np.ndarray, np.ndarray]:
    """Pure-numpy twin of :func:`anneal_numba`; same trajectories per key."""
    n = h.shape[0]
    sweeps = betas.shape[0]
    best_bits = np.zeros((reads, n), dtype=np.int8)
    best_energy = np.zeros(reads)
    exp = math.exp
    for r in range(reads):
        bits = np.zeros(n, dtype=np.int8)
        field = h.copy()
        energy = 0.0
        init = random_bits(key_init, r * n, n)
        for i in range(n):
            if init[i]:
                de = field[i]  # bit 0 -> 1
                bits[i] = 1
                energy += de
                field += s[:, i]
        best_e = energy
        best_b = bits.copy()
        for sw in range(sweeps):
            beta = betas[sw]
            us = uniforms(key_flip, (r * sweeps + sw) * n, n)
            for i in range(n):
                de = field[i] if bits[i] == 0 else -field[i]
                if de <= 0.0 or us[i] < exp(-beta * de):
                    if bits[i] == 0:
                        bits[i] = 1
                        field += s[:, i]
                    else:
                        bits[i] = 0
                        field -= s[:, i]
                    energy += de
                    if energy < best_e:
                        best_e = energy
                        best_b[:] = bits
        best_bits[r] = best_b
        best_energy[r] = best_e
    return best_bits, best_energy


if NUMBA_AVAILABLE:

    @njit(cache=True, nogil=True)
    def _mix64_nb(z):
        z = (z ^ (z >> numba.uint64(30))) * numba.uint64(0xBF58476D1CE4E5B9)
        z ^= z >> numba.uint64(27)
        z *= numba.uint64(0x94D049BB133111EB)
        return z ^ (z >> numba.uint64(31))

    @njit(cache=True, nogil=True)
    def _uniform_nb(key, counter):
        z = _mix64_nb(key + (counter + numba.uint64(1)) * numba.uint64(0x9E3779B97F4A7C15))
        return (z >> numba.uint64(11)) * (1.0 / 9007199254740992.0)

    @njit(cache=True, nogil=True)
    def _bit_nb(key, counter):
        z = _mix64_nb(key + (counter + numba.uint64(1)) * numba.uint64(0x9E3779B97F4A7C15))
        return numba.uint64(z & numba.uint64(1))

    @njit(cache=True, nogil=True)
    def anneal_numba(h, s, betas, reads, key_init, key_flip):
        n = h.shape[0]
        sweeps = betas.shape[0]
        best_bits = np.zeros((reads, n), dtype=np.int8)
        best_energy = np.zeros(reads)
        bits = np.zeros(n, dtype=np.int8)
        field = np.zeros(n)
        best_b = np.zeros(n, dtype=np.int8)
        for r in range(reads):
            for i in range(n):
                bits[i] = 0
                field[i] = h[i]
            energy = 0.0
            for i in range(n):
                if _bit_nb(key_init, numba.uint64(r * n + i)):
                    de = field[i]
                    bits[i] = 1
                    energy += de
                    for j in range(n):
                        field[j] += s[j, i]
            best_e = energy
            for i in range(n):
                best_b[i] = bits[i]
            for sw in range(sweeps):
                beta = betas[sw]
                base = numba.uint64((r * sweeps + sw) * n)
                for i in range(n):
                    if bits[i] == 0:
                        de = field[i]
                    else:
                        de = -field[i]
                    if de <= 0.0 or _uniform_nb(key_flip, base + numba.uint64(i)) < math.exp(-beta * de):
                        if bits[i] == 0:
                            bits[i] = 1
                            for j in range(n):
                                field[j] += s[j, i]
                        else:
                            bits[i] = 0
                            for j in range(n):
                                field[j] -= s[j, i]
                        energy += de
                        if energy < best_e:
                            best_e = energy
                            for j in range(n):
                                best_b[j] = bits[j]
            for j in range(n):
                best_bits[r, j] = best_b[j]
            best_energy[r] = best_e
        return best_bits, best_energy

else:
    anneal_numba = None
