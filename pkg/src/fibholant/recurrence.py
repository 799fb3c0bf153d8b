"""Depth-two linear recurrences shared by the domain-3 and domain-4 gates.

Write ``e_c`` for the unit count vector of colour ``c``.  For every base count
vector ``b`` of arity ``n - 2`` and every pair of non-zero colours
``alpha <= beta`` a gate satisfies::

    g[b + e_alpha + e_beta] = [alpha == beta] * g[b + 2 e_0]
                              + sum_gamma C(alpha, beta, gamma) * g[b + e_0 + e_gamma]

where ``gamma`` runs over the non-zero colours.  A layout assigns a named
parameter to every coefficient ``C(alpha, beta, gamma)``; several coefficients
may share a name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import NotFibonacci, SignatureError, Underdetermined
from .signature import DEFAULT_TOL, Signature, Tolerance, _rank_map, all_counts, entry_count


@dataclass(frozen=True)
class RecurrenceLayout:
    domain_size: int
    names: tuple[str, ...]
    # (alpha, beta) -> parameter name per gamma = 1..d-1
    pairs: tuple[tuple[tuple[int, int], tuple[str, ...]], ...]

    def coefficients(self, values: Mapping[str, complex]) -> np.ndarray:
        """``(pairs, d-1)`` coefficient matrix for concrete parameter values."""
        return np.array(
            [[values[name] for name in row] for _, row in self.pairs], dtype=np.complex128
        )

    def name_index(self) -> np.ndarray:
        lookup = {name: k for k, name in enumerate(self.names)}
        return np.array([[lookup[name] for name in row] for _, row in self.pairs])


@dataclass(frozen=True)
class _Instances:
    lhs: np.ndarray  # (m,)
    apex: np.ndarray  # (m,)
    diagonal: np.ndarray  # (m,) bool
    side: np.ndarray  # (m, d-1)
    pair: np.ndarray  # (m,)


@lru_cache(maxsize=None)
def _instances(layout: RecurrenceLayout, n: int) -> _Instances:
    d = layout.domain_size
    ranks = _rank_map(d, n)
    lhs, apex, diagonal, side, pair = [], [], [], [], []
    for base in all_counts(d, n - 2):
        top = list(base)
        top[0] += 2
        for p, ((alpha, beta), _) in enumerate(layout.pairs):
            low = list(base)
            low[alpha] += 1
            low[beta] += 1
            lhs.append(ranks[tuple(low)])
            apex.append(ranks[tuple(top)])
            diagonal.append(alpha == beta)
            row = []
            for gamma in range(1, d):
                mid = list(base)
                mid[0] += 1
                mid[gamma] += 1
                row.append(ranks[tuple(mid)])
            side.append(row)
            pair.append(p)
    return _Instances(
        np.array(lhs, dtype=np.int64),
        np.array(apex, dtype=np.int64),
        np.array(diagonal, dtype=bool),
        np.array(side, dtype=np.int64).reshape(-1, d - 1),
        np.array(pair, dtype=np.int64),
    )


def residuals(
    g: Signature, layout: RecurrenceLayout, values: Mapping[str, complex]
) -> tuple[np.ndarray, np.ndarray]:
    """Residual and magnitude scale of every recurrence instance of ``g``."""
    if g.arity < 2:
        return np.zeros(0, np.complex128), np.zeros(0)
    inst = _instances(layout, g.arity)
    coef = layout.coefficients(values)[inst.pair]
    v = g.values
    terms = coef * v[inst.side]
    constant = np.where(inst.diagonal, v[inst.apex], 0)
    rhs = constant + terms.sum(axis=1)
    res = v[inst.lhs] - rhs
    scale = np.abs(v[inst.lhs]) + np.abs(constant) + np.abs(terms).sum(axis=1)
    return res, scale


def satisfies(
    g: Signature,
    layout: RecurrenceLayout,
    values: Mapping[str, complex],
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    res, scale = residuals(g, layout, values)
    return bool(np.all(np.abs(res) <= np.maximum(tol.abs_floor, tol.rel * scale)))


def fit(
    gs: Sequence[Signature], layout: RecurrenceLayout, tol: Tolerance = DEFAULT_TOL
) -> dict[str, complex]:
    """Least-squares parameters from all recurrence instances of ``gs``.

    Raises :class:`Underdetermined` when the stacked system has deficient rank
    and :class:`NotFibonacci` when the best fit leaves a residual.
    """
    d = layout.domain_size
    usable = [g for g in gs if g.arity >= 2]
    for g in gs:
        if g.domain_size != d:
            raise SignatureError(f"expected domain size {d}, got {g.domain_size}")
    if not usable:
        raise Underdetermined("no signature of arity >= 2 to fit against")
    name_idx = layout.name_index()
    blocks, rhs_blocks = [], []
    for g in usable:
        inst = _instances(layout, g.arity)
        v = g.values
        block = np.zeros((inst.lhs.size, len(layout.names)), dtype=np.complex128)
        rows = np.arange(inst.lhs.size)
        cols = name_idx[inst.pair]
        for k in range(d - 1):
            np.add.at(block, (rows, cols[:, k]), v[inst.side[:, k]])
        blocks.append(block)
        rhs_blocks.append(v[inst.lhs] - np.where(inst.diagonal, v[inst.apex], 0))
    a = np.vstack(blocks)
    rhs = np.concatenate(rhs_blocks)
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        raise Underdetermined("some parameter never appears with a non-zero coefficient")
    # column scaling keeps the rank test meaningful across magnitudes
    scaled = a / norms
    sv = np.linalg.svd(scaled, compute_uv=False)
    rank = int(np.sum(sv > sv[0] * 1e-10)) if sv.size else 0
    if rank < len(layout.names):
        raise Underdetermined(
            f"recurrence system has rank {rank} < {len(layout.names)} unknowns"
        )
    sol, *_ = np.linalg.lstsq(scaled, rhs, rcond=None)
    sol = sol / norms
    residual = a @ sol - rhs
    scale = np.abs(rhs) + np.abs(a * sol).sum(axis=1)
    if not np.all(np.abs(residual) <= np.maximum(tol.abs_floor, tol.rel * scale)):
        worst = float(np.max(np.abs(residual)))
        raise NotFibonacci(f"recurrence system is inconsistent (max residual {worst:.3g})")
    return {name: complex(x) for name, x in zip(layout.names, sol)}


def complete_from_top(
    top: Sequence[complex],
    layout: RecurrenceLayout,
    values: Mapping[str, complex],
    n: int,
) -> Signature:
    """Unique arity-``n`` signature with the given top layer obeying the recurrences."""
    d = layout.domain_size
    top = np.asarray(top, dtype=np.complex128).reshape(-1)
    if n < 1:
        raise SignatureError("completion needs arity >= 1 (arity 0 has no top layer)")
    if top.size != d:
        raise SignatureError(f"expected {d} top values, got {top.size}")
    ranks = _rank_map(d, n)
    coef = layout.coefficients(values)
    pair_index = {ab: k for k, (ab, _) in enumerate(layout.pairs)}
    out = np.zeros(entry_count(d, n), dtype=np.complex128)
    out[:d] = top
    # canonical order visits entries by decreasing colour-0 count, so the
    # apex and side entries needed below are always filled first
    for r, m in enumerate(all_counts(d, n)):
        if m[0] >= n - 1:
            continue
        nonzero = [c for c in range(1, d) for _ in range(m[c])]
        alpha, beta = nonzero[0], nonzero[1]
        base = list(m)
        base[alpha] -= 1
        base[beta] -= 1
        value = 0j
        if alpha == beta:
            apex = list(base)
            apex[0] += 2
            value += out[ranks[tuple(apex)]]
        row = coef[pair_index[(alpha, beta)]]
        for gamma in range(1, d):
            mid = list(base)
            mid[0] += 1
            mid[gamma] += 1
            value += row[gamma - 1] * out[ranks[tuple(mid)]]
        out[r] = value
    return Signature(d, n, out)
