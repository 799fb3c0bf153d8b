"""Dense symmetric signatures indexed by colour-count vectors.

A symmetric signature of arity ``n`` over ``d`` colours depends only on how
many inputs take each colour, so it is stored as one complex value per count
vector.  Count vectors are kept in lexicographically *decreasing* order, which
for ``d=3, n=3`` reads the familiar triangle row by row::

    (3,0,0) (2,1,0) (2,0,1) (1,2,0) (1,1,1) (1,0,2) (0,3,0) ... (0,0,3)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import SignatureError

Counts = tuple[int, ...]


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance with an absolute floor.

    A residual ``r`` is accepted against a magnitude ``scale`` when
    ``|r| <= max(abs_floor, rel * scale)``.
    """

    rel: float = 1e-9
    abs_floor: float = 1e-12

    def accepts(self, residual: complex, scale: float) -> bool:
        return abs(residual) <= max(self.abs_floor, self.rel * scale)

    def close(self, a: complex, b: complex) -> bool:
        return self.accepts(a - b, max(abs(a), abs(b)))


DEFAULT_TOL = Tolerance()


def entry_count(d: int, n: int) -> int:
    """Number of count vectors of length ``d`` summing to ``n``."""
    if d < 1 or n < 0:
        raise SignatureError(f"entry_count needs d >= 1 and n >= 0, got d={d}, n={n}")
    return comb(n + d - 1, d - 1)


def _compositions(d: int, n: int) -> Iterable[Counts]:
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(d - 1, n - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def all_counts(d: int, n: int) -> tuple[Counts, ...]:
    """Every count vector for ``(d, n)`` in canonical order."""
    entry_count(d, n)
    return tuple(_compositions(d, n))


@lru_cache(maxsize=None)
def count_table(d: int, n: int) -> np.ndarray:
    """``all_counts`` as an ``(entries, d)`` integer array."""
    table = np.array(all_counts(d, n), dtype=np.int64).reshape(-1, d)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _rank_map(d: int, n: int) -> dict[Counts, int]:
    return {c: r for r, c in enumerate(all_counts(d, n))}


def rank_of_count(c: Sequence[int]) -> int:
    """Position of ``c`` in canonical order among vectors of its length and sum."""
    c = tuple(int(v) for v in c)
    if not c:
        raise SignatureError("count vector must have at least one entry")
    if any(v < 0 for v in c):
        raise SignatureError(f"count vector has a negative entry: {c}")
    d = len(c)
    remaining = sum(c)
    rank = 0
    # Skip every vector with a larger value at the first differing position.
    for k in range(d - 1):
        tail = d - k - 1
        for larger in range(remaining, c[k], -1):
            rank += entry_count(tail, remaining - larger)
        remaining -= c[k]
    return rank


def count_of_rank(d: int, n: int, r: int) -> Counts:
    """Inverse of :func:`rank_of_count` for vectors of length ``d`` and sum ``n``."""
    total = entry_count(d, n)
    if not 0 <= r < total:
        raise SignatureError(f"rank {r} out of range [0, {total}) for d={d}, n={n}")
    out = []
    remaining = n
    for k in range(d - 1):
        tail = d - k - 1
        for value in range(remaining, -1, -1):
            block = entry_count(tail, remaining - value)
            if r < block:
                out.append(value)
                remaining -= value
                break
            r -= block
    out.append(remaining)
    return tuple(out)


def histogram(assignment: Sequence[int], d: int) -> Counts:
    counts = [0] * d
    for color in assignment:
        if not 0 <= color < d:
            raise SignatureError(f"colour {color} outside domain of size {d}")
        counts[color] += 1
    return tuple(counts)


@dataclass(frozen=True, eq=False)
class Signature:
    """Immutable symmetric signature over ``domain_size`` colours."""

    domain_size: int
    arity: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise SignatureError(f"domain size must be positive, got {self.domain_size}")
        if self.arity < 0:
            raise SignatureError(f"arity must be non-negative, got {self.arity}")
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        expected = entry_count(self.domain_size, self.arity)
        if values.size != expected:
            raise SignatureError(
                f"expected {expected} values for d={self.domain_size}, "
                f"arity {self.arity}; got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            raise SignatureError("signature values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, d: int, n: int, fn) -> Signature:
        """Tabulate ``fn(counts)`` over all count vectors."""
        return cls(d, n, [fn(c) for c in all_counts(d, n)])

    def __getitem__(self, counts: Sequence[int]) -> complex:
        counts = tuple(counts)
        if len(counts) != self.domain_size or sum(counts) != self.arity:
            raise SignatureError(
                f"count vector {counts} does not fit d={self.domain_size}, arity {self.arity}"
            )
        return complex(self.values[_rank_map(self.domain_size, self.arity)[counts]])

    def evaluate(self, assignment: Sequence[int]) -> complex:
        """Value on an explicit tuple of input colours."""
        if len(assignment) != self.arity:
            raise SignatureError(f"assignment has {len(assignment)} colours, arity is {self.arity}")
        return self[histogram(assignment, self.domain_size)]

    def top(self) -> np.ndarray:
        """Values with at least ``arity - 1`` inputs on colour 0."""
        if self.arity == 0:
            raise SignatureError("an arity-0 signature has no top layer")
        return self.values[: self.domain_size].copy()

    def allclose(self, other: Signature, tol: Tolerance = DEFAULT_TOL) -> bool:
        if (self.domain_size, self.arity) != (other.domain_size, other.arity):
            return False
        diff = np.abs(self.values - other.values)
        scale = np.maximum(np.abs(self.values), np.abs(other.values))
        return bool(np.all(diff <= np.maximum(tol.abs_floor, tol.rel * scale)))

    def __repr__(self) -> str:
        return f"Signature(d={self.domain_size}, arity={self.arity}, values={self.values.tolist()})"


def evaluate(g: Signature, assignment: Sequence[int]) -> complex:
    return g.evaluate(assignment)


def power_sum_signature(
    weights: Sequence[complex], vectors: Sequence[Sequence[complex]], n: int
) -> Signature:
    """``sum_k weights[k] * vectors[k]^{tensor n}`` as a symmetric signature.

    The entry at count vector ``m`` is ``sum_k w_k prod_c vectors[k][c] ** m[c]``.
    """
    w = np.asarray(weights, dtype=np.complex128)
    vecs = np.asarray(vectors, dtype=np.complex128)
    if vecs.ndim != 2 or vecs.shape[0] != w.size:
        raise SignatureError("need one vector per weight")
    d = vecs.shape[1]
    counts = count_table(d, n)
    # (vectors, entries, colours) -> product over colours; 0**0 == 1 in numpy
    monomials = np.prod(vecs[:, None, :] ** counts[None, :, :], axis=2)
    return Signature(d, n, w @ monomials)
