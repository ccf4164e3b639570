"""Sparse QUBO container and its line-oriented text format."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, ParseError


class Qubo:
    """Upper-triangular quadratic binary objective plus a constant offset.

    ``terms`` maps ``(i, j)`` with ``i <= j`` to a nonzero coefficient;
    diagonal entries are the linear part.  Minimizing
    ``sum terms[i, j] * x_i * x_j + offset`` over bitstrings is the contract.
    """

    __slots__ = ("n", "terms", "offset")

    def __init__(self, n: int, terms: dict | None = None, offset: float = 0.0):
        if n < 0:
            raise DomainError(f"variable count must be >= 0, got {n}")
        self.n = n
        self.terms: dict[tuple[int, int], float] = {}
        self.offset = float(offset)
        if terms:
            for (i, j), c in terms.items():
                self.add(i, j, c)

    def add(self, i: int, j: int, coeff: float) -> None:
        """Accumulate a coefficient; zero-sum entries are dropped."""
        if not 0 <= i < self.n or not 0 <= j < self.n:
            raise DomainError(f"index ({i}, {j}) out of range for n={self.n}")
        coeff = float(coeff)  # numpy scalars would break the text format's repr
        if not math.isfinite(coeff):
            raise DomainError("QUBO coefficients must be finite")
        key = (i, j) if i <= j else (j, i)
        new = self.terms.get(key, 0.0) + coeff
        if new == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    @property
    def m(self) -> int:
        return len(self.terms)

    def to_dense(self) -> np.ndarray:
        """Upper-triangular coefficient matrix (diagonal holds linear terms)."""
        q = np.zeros((self.n, self.n))
        for (i, j), c in self.terms.items():
            q[i, j] = c
        return q

    def fields(self) -> tuple[np.ndarray, np.ndarray]:
        """(linear h, symmetric zero-diagonal coupling S) for samplers."""
        h = np.zeros(self.n)
        s = np.zeros((self.n, self.n))
        for (i, j), c in self.terms.items():
            if i == j:
                h[i] = c
            else:
                s[i, j] = c
                s[j, i] = c
        return h, s

    def energy(self, bits) -> float:
        b = np.asarray(bits, dtype=np.float64).reshape(-1)
        if b.size != self.n:
            raise DomainError(f"bitstring length {b.size} != n={self.n}")
        q = self.to_dense()
        return float(b @ q @ b + self.offset)

    def energies(self, batch: np.ndarray) -> np.ndarray:
        """Energies of a (reads, n) bit matrix."""
        b = np.asarray(batch, dtype=np.float64)
        q = self.to_dense()
        return np.einsum("ri,ij,rj->r", b, q, b) + self.offset

    def __eq__(self, other):
        return (
            isinstance(other, Qubo)
            and self.n == other.n
            and self.offset == other.offset
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"Qubo(n={self.n}, m={self.m}, offset={self.offset})"

    # -- text format: "p qubo n m" header, then "i j coeff" lines (0-indexed) --

    def save_text(self) -> str:
        lines = [f"c offset {self.offset!r}", f"p qubo {self.n} {self.m}"]
        for (i, j), c in sorted(self.terms.items()):
            lines.append(f"{i} {j} {c!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load_text(cls, text: str) -> "Qubo":
        offset = 0.0
        n = None
        expected = 0
        entries: list[tuple[int, int, float]] = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln:
                continue
            if ln.startswith("c"):
                parts = ln.split()
                if len(parts) == 3 and parts[1] == "offset":
                    offset = float(parts[2])
                continue
            if ln.startswith("p"):
                parts = ln.split()
                if len(parts) != 4 or parts[1] != "qubo":
                    raise ParseError(f"bad problem line: {ln!r}")
                n, expected = int(parts[2]), int(parts[3])
                continue
            parts = ln.split()
            if len(parts) != 3:
                raise ParseError(f"bad entry line: {ln!r}")
            entries.append((int(parts[0]), int(parts[1]), float(parts[2])))
        if n is None:
            raise ParseError("missing 'p qubo n m' line")
        if len(entries) != expected:
            raise ParseError(f"expected {expected} entries, got {len(entries)}")
        q = cls(n, offset=offset)
        for i, j, c in entries:
            q.add(i, j, c)
        return q
