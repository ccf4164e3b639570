"""Decision variable kinds, concrete assignments, and structural validation.

A :class:`State` assigns one value to every decision of a model:

* ``list`` decisions take a permutation of ``0..n-1``,
* ``set`` decisions a strictly increasing subset of ``0..n-1``,
* ``disjoint_lists`` / ``disjoint_bit_sets`` decisions an exact partition of
  ``0..n_vars-1`` into the declared number of parts,
* ``binary`` / ``integer`` decisions an array of bits / bounded integers.

Validation is diagnostic: it returns human-readable violation strings rather
than raising, so callers can decide whether a broken state is an error.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

LIST = "list"
SET = "set"
DISJOINT_LISTS = "disjoint_lists"
DISJOINT_BIT_SETS = "disjoint_bit_sets"
BINARY = "binary"
INTEGER = "integer"

_PARTITION_KINDS = (DISJOINT_LISTS, DISJOINT_BIT_SETS)


@dataclass(frozen=True)
class DecisionSpec:
    """Declaration of one decision variable.

    ``n`` is the element count (``n_vars`` for partition kinds). ``n_parts``
    is only meaningful for partition kinds; ``lo``/``hi`` only for integers.
    """

    kind: str
    n: int
    n_parts: int = 0
    lo: int = 0
    hi: int = 0

    def __post_init__(self):
        if self.kind not in (LIST, SET, BINARY, INTEGER) + _PARTITION_KINDS:
            raise DomainError(f"unknown decision kind {self.kind!r}")
        if self.n < 1:
            raise DomainError(f"{self.kind} needs n >= 1, got {self.n}")
        if self.kind in _PARTITION_KINDS:
            if not 1 <= self.n_parts <= self.n:
                raise DomainError(
                    f"{self.kind} needs 1 <= n_parts <= n_vars, got "
                    f"n_parts={self.n_parts}, n_vars={self.n}"
                )
        if self.kind == INTEGER and self.lo > self.hi:
            raise DomainError(f"integer bounds need lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def is_partition(self) -> bool:
        return self.kind in _PARTITION_KINDS


def _as_index_array(value) -> np.ndarray:
    return np.asarray(value, dtype=np.int64).reshape(-1)


class State:
    """A concrete assignment: one value per decision, in declaration order.

    Flat kinds are stored as 1-D int64 arrays; partition kinds as a list of
    1-D int64 arrays (one per part).
    """

    __slots__ = ("values",)

    def __init__(self, values):
        converted = []
        for v in values:
            # A list of sequences is a partition value; anything else is flat.
            if isinstance(v, (list, tuple)) and len(v) and isinstance(v[0], (list, tuple, np.ndarray)):
                converted.append([_as_index_array(part) for part in v])
            else:
                converted.append(_as_index_array(v))
        self.values = converted

    def copy(self) -> "State":
        out = State.__new__(State)
        out.values = [
            [p.copy() for p in v] if isinstance(v, list) else v.copy()
            for v in self.values
        ]
        return out

    def digest(self) -> int:
        """Deterministic 32-bit content hash, used as an ordering tie-breaker."""
        crc = 0
        for v in self.values:
            parts = v if isinstance(v, list) else [v]
            for p in parts:
                crc = zlib.crc32(p.tobytes(), crc)
            crc = zlib.crc32(b"|", crc)
        return crc

    def to_jsonable(self):
        return [
            [[int(x) for x in part] for part in v] if isinstance(v, list) else [int(x) for x in v]
            for v in self.values
        ]

    @classmethod
    def from_jsonable(cls, data) -> "State":
        return cls(data)

    def __eq__(self, other):
        if not isinstance(other, State) or len(self.values) != len(other.values):
            return NotImplemented
        for a, b in zip(self.values, other.values):
            if isinstance(a, list) != isinstance(b, list):
                return False
            if isinstance(a, list):
                if len(a) != len(b) or any(not np.array_equal(x, y) for x, y in zip(a, b)):
                    return False
            elif not np.array_equal(a, b):
                return False
        return True

    def __repr__(self):
        return f"State({self.to_jsonable()})"


def validate_value(spec: DecisionSpec, value) -> list[str]:
    """Structural violations of one decision's value; empty list when valid."""
    out: list[str] = []
    if spec.is_partition:
        if not isinstance(value, list):
            return [f"{spec.kind} value must be a list of {spec.n_parts} parts"]
        if len(value) != spec.n_parts:
            return [f"expected {spec.n_parts} parts, got {len(value)}"]
        seen = np.concatenate([np.asarray(p, dtype=np.int64).reshape(-1) for p in value]) \
            if any(len(p) for p in value) else np.empty(0, dtype=np.int64)
        if seen.size != spec.n:
            out.append(f"partition not exhaustive: covers {seen.size} of {spec.n} elements")
        if seen.size:
            if seen.min() < 0 or seen.max() >= spec.n:
                out.append(f"partition element out of range 0..{spec.n - 1}")
            elif np.unique(seen).size != seen.size:
                counts = np.bincount(seen, minlength=spec.n)
                dup = int(np.argmax(counts > 1))
                out.append(f"partition parts not disjoint: element {dup} repeated")
        return out

    arr = np.asarray(value, dtype=np.int64).reshape(-1)
    if arr.size != spec.n:
        return [f"{spec.kind} value has length {arr.size}, expected {spec.n}"]
    if spec.kind == LIST:
        counts = np.bincount(arr, minlength=spec.n) if arr.size and arr.min() >= 0 and arr.max() < spec.n else None
        if counts is None:
            out.append(f"index out of range 0..{spec.n - 1}")
        elif (counts != 1).any():
            dup = int(np.argmax(counts > 1))
            out.append(f"duplicate index {dup}: not a permutation")
    elif spec.kind == BINARY:
        if ((arr != 0) & (arr != 1)).any():
            out.append("binary value outside {0, 1}")
    elif spec.kind == INTEGER:
        if (arr < spec.lo).any() or (arr > spec.hi).any():
            out.append(f"integer value outside [{spec.lo}, {spec.hi}]")
    return out


def validate_set_value(spec: DecisionSpec, value) -> list[str]:
    """Set values have their own arity: any cardinality 0..n is allowed."""
    arr = np.asarray(value, dtype=np.int64).reshape(-1)
    out: list[str] = []
    if arr.size:
        if arr.min() < 0 or arr.max() >= spec.n:
            out.append(f"set element out of range 0..{spec.n - 1}")
        elif (np.diff(arr) <= 0).any():
            out.append("set elements must be strictly increasing (unique)")
    if arr.size > spec.n:
        out.append(f"set has {arr.size} elements, more than n={spec.n}")
    return out


def validate_state(specs: list[DecisionSpec], state: State) -> list[str]:
    """All structural violations of ``state`` against ``specs``."""
    if len(state.values) != len(specs):
        return [f"state has {len(state.values)} assignments, model has {len(specs)} decisions"]
    out: list[str] = []
    for i, (spec, value) in enumerate(zip(specs, state.values)):
        errs = validate_set_value(spec, value) if spec.kind == SET else validate_value(spec, value)
        out.extend(f"decision {i}: {e}" for e in errs)
    return out
