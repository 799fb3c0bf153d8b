"""Polynomial-time Holant evaluation for grids of generalized Fibonacci gates.

Every vertex starts as a gate whose dangling edges are its incident half-edges.
Edges are then restored one at a time: an edge joining two different gates
contracts them into one (:func:`merge_cross`), an edge inside a single gate
closes two of its dangling edges (:func:`merge_self`).  Because a Fibonacci
gate family is closed under both operations, every intermediate gate stays a
symmetric signature and the contraction never leaves the dense symmetric
representation.

Cost: each merge touches ``O(C(A + d - 1, d - 1) * d)`` entries for maximum
intermediate arity ``A``, so a grid costs ``O(|E| * A^(d-1) * d)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import GridError, MergeViolation, SignatureError
from .fibonacci_d3 import FibParamsD3, d3_verify_gate
from .fibonacci_d4 import FibParamsD4, d4_verify_gate
from .signature import DEFAULT_TOL, Signature, Tolerance, _rank_map, all_counts

log = logging.getLogger(__name__)

FibParams = Union[FibParamsD3, FibParamsD4]


@dataclass(frozen=True)
class SignatureGrid:
    """Multigraph with a symmetric signature on every vertex.

    ``vertices[k]`` names the signature of vertex ``k``; ``edges`` are vertex
    index pairs, self-loops and repeated pairs allowed.
    """

    domain_size: int
    signatures: Mapping[str, Signature]
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(self, domain_size, signatures, vertices, edges):
        object.__setattr__(self, "domain_size", int(domain_size))
        object.__setattr__(self, "signatures", dict(signatures))
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in edges))

    def signature_of(self, vertex: int) -> Signature:
        return self.signatures[self.vertices[vertex]]

    def degrees(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def structural_problems(self) -> list[tuple[int | None, str]]:
        """``(vertex or None, message)`` for every structural defect."""
        problems: list[tuple[int | None, str]] = []
        for name, sig in self.signatures.items():
            if sig.domain_size != self.domain_size:
                problems.append(
                    (None, f"signature {name!r} has domain {sig.domain_size}, grid has {self.domain_size}")
                )
        n = len(self.vertices)
        for k, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                problems.append((None, f"edge {k} ({u}, {v}) references a missing vertex"))
        if any(p[0] is None and "edge" in p[1] for p in problems):
            return problems
        for vertex, (name, deg) in enumerate(zip(self.vertices, self.degrees())):
            if name not in self.signatures:
                problems.append((vertex, f"unknown signature {name!r}"))
            elif self.signatures[name].arity != deg:
                problems.append(
                    (vertex, f"degree {deg} does not match arity {self.signatures[name].arity} of {name!r}")
                )
        return problems

    def disjoint_union(self, other: SignatureGrid) -> SignatureGrid:
        if other.domain_size != self.domain_size:
            raise GridError("cannot join grids over different domains")
        sigs = {f"a.{k}": v for k, v in self.signatures.items()}
        sigs.update({f"b.{k}": v for k, v in other.signatures.items()})
        offset = len(self.vertices)
        return SignatureGrid(
            self.domain_size,
            sigs,
            [f"a.{v}" for v in self.vertices] + [f"b.{v}" for v in other.vertices],
            list(self.edges) + [(u + offset, v + offset) for u, v in other.edges],
        )

    def with_edges(self, edges: Sequence[tuple[int, int]]) -> SignatureGrid:
        return SignatureGrid(self.domain_size, self.signatures, self.vertices, edges)


@dataclass(frozen=True)
class Gate:
    signature: Signature
    member_vertices: frozenset[int] = field(default_factory=frozenset)

    @property
    def dangling_count(self) -> int:
        return self.signature.arity


@dataclass
class ValidationReport:
    ok: bool
    problems: list[tuple[int | None, str]]

    def __bool__(self) -> bool:
        return self.ok


def verify_gate(g: Signature, P: FibParams, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Dispatch to the domain-specific gate check."""
    if isinstance(P, FibParamsD3):
        return d3_verify_gate(g, P, tol)
    if isinstance(P, FibParamsD4):
        return d4_verify_gate(g, P, tol)
    raise TypeError(f"unsupported parameter record {type(P).__name__}")


def params_domain(P: FibParams) -> int:
    return 3 if isinstance(P, FibParamsD3) else 4


def validate_grid(grid: SignatureGrid, P: FibParams, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    problems = grid.structural_problems()
    if grid.domain_size != params_domain(P):
        problems.append((None, f"parameters are for domain {params_domain(P)}, grid has {grid.domain_size}"))
    if problems:
        return ValidationReport(False, problems)
    verdict: dict[str, bool] = {}
    for name, sig in grid.signatures.items():
        verdict[name] = verify_gate(sig, P, tol)
    for vertex, name in enumerate(grid.vertices):
        if not verdict[name]:
            problems.append((vertex, f"signature {name!r} is not a Fibonacci gate for the given parameters"))
    return ValidationReport(not problems, problems)


@lru_cache(maxsize=None)
def _cross_tables(d: int, r: int, w: int) -> tuple[np.ndarray, np.ndarray]:
    """Rank tables for merging an arity ``r+1`` gate with an arity ``w+1`` gate."""
    f_ranks = _rank_map(d, r + 1)
    g_ranks = _rank_map(d, w + 1)
    out = all_counts(d, r + w)
    f_idx = np.empty((len(out), d), dtype=np.int64)
    g_idx = np.empty((len(out), d), dtype=np.int64)
    for row, m in enumerate(out):
        m_f, m_g = greedy_split(m, r)
        for c in range(d):
            f_idx[row, c] = f_ranks[_bump(m_f, c)]
            g_idx[row, c] = g_ranks[_bump(m_g, c)]
    return f_idx, g_idx


@lru_cache(maxsize=None)
def _self_table(d: int, n: int) -> np.ndarray:
    ranks = _rank_map(d, n)
    out = all_counts(d, n - 2)
    idx = np.empty((len(out), d), dtype=np.int64)
    for row, m in enumerate(out):
        for c in range(d):
            idx[row, c] = ranks[_bump(m, c, 2)]
    return idx


def _bump(m: Sequence[int], c: int, by: int = 1) -> tuple[int, ...]:
    out = list(m)
    out[c] += by
    return tuple(out)


def greedy_split(m: Sequence[int], r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ``m`` into ``m_f + m_g`` with ``|m_f| = r``, filling ``m_f`` from colour 0."""
    if not 0 <= r <= sum(m):
        raise SignatureError(f"cannot take {r} inputs out of {tuple(m)}")
    m_f = []
    need = r
    for v in m:
        take = min(v, need)
        m_f.append(take)
        need -= take
    return tuple(m_f), tuple(v - t for v, t in zip(m, m_f))


def all_splits(m: Sequence[int], r: int):
    """Every ``(m_f, m_g)`` with ``m_f + m_g = m`` and ``|m_f| = r``."""
    if len(m) == 1:
        if 0 <= r <= m[0]:
            yield (r,), (m[0] - r,)
        return
    for take in range(min(m[0], r), -1, -1):
        for f_rest, g_rest in all_splits(m[1:], r - take):
            yield (take,) + f_rest, (m[0] - take,) + g_rest


def cross_entry(F: Signature, G: Signature, m_f: Sequence[int], m_g: Sequence[int]) -> complex:
    """``sum_c F[m_f + e_c] * G[m_g + e_c]`` for an explicit split."""
    return sum(F[_bump(m_f, c)] * G[_bump(m_g, c)] for c in range(F.domain_size))


def merge_cross(F: Gate, G: Gate) -> Gate:
    """Join one dangling edge of ``F`` to one dangling edge of ``G``."""
    f, g = F.signature, G.signature
    if f.domain_size != g.domain_size:
        raise SignatureError("cannot merge gates over different domains")
    if f.arity < 1 or g.arity < 1:
        raise SignatureError("both gates need a dangling edge to merge")
    f_idx, g_idx = _cross_tables(f.domain_size, f.arity - 1, g.arity - 1)
    values = np.einsum("kc,kc->k", f.values[f_idx], g.values[g_idx])
    return Gate(Signature(f.domain_size, f.arity + g.arity - 2, values), F.member_vertices | G.member_vertices)


def merge_self(F: Gate) -> Gate:
    """Join two dangling edges of the same gate."""
    f = F.signature
    if f.arity < 2:
        raise SignatureError("a self merge needs at least two dangling edges")
    values = f.values[_self_table(f.domain_size, f.arity)].sum(axis=1)
    return Gate(Signature(f.domain_size, f.arity - 2, values), F.member_vertices)


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        self.parent[rb] = ra
        return ra


def min_arity_order(grid: SignatureGrid) -> list[int]:
    """Greedy edge order that always performs the merge with the smallest result."""
    uf = _UnionFind(len(grid.vertices))
    arity = {v: grid.signature_of(v).arity for v in range(len(grid.vertices))}
    remaining = list(range(len(grid.edges)))
    order = []
    while remaining:
        best_pos, best_cost = 0, None
        for pos, k in enumerate(remaining):
            u, v = grid.edges[k]
            ru, rv = uf.find(u), uf.find(v)
            cost = arity[ru] - 2 if ru == rv else arity[ru] + arity[rv] - 2
            if best_cost is None or cost < best_cost:
                best_pos, best_cost = pos, cost
        k = remaining.pop(best_pos)
        u, v = grid.edges[k]
        ru, rv = uf.find(u), uf.find(v)
        if ru == rv:
            arity[ru] -= 2
        else:
            arity[uf.union(ru, rv)] = arity[ru] + arity[rv] - 2
        order.append(k)
    return order


def holant_eval(
    grid: SignatureGrid,
    P: FibParams,
    *,
    strict: bool = False,
    order: str = "input",
    tol: Tolerance = DEFAULT_TOL,
    validate: bool = True,
    on_merge: Callable[[int, Gate], None] | None = None,
) -> complex:
    """Holant value of ``grid`` by successive gate merging.

    ``order`` is ``"input"`` (edge list order) or ``"min-arity"``.  With
    ``strict`` every intermediate gate is re-verified against ``P`` and a
    :class:`MergeViolation` is raised on the first failure.  ``on_merge`` is
    called with ``(edge_index, gate)`` after every merge.
    """
    if validate:
        report = validate_grid(grid, P, tol)
        if not report.ok:
            raise GridError("; ".join(msg if v is None else f"vertex {v}: {msg}" for v, msg in report.problems))
    n = len(grid.vertices)
    gates = {v: Gate(grid.signature_of(v), frozenset([v])) for v in range(n)}
    uf = _UnionFind(n)
    if order == "input":
        edge_order = range(len(grid.edges))
    elif order == "min-arity":
        edge_order = min_arity_order(grid)
    else:
        raise ValueError(f"unknown edge order {order!r}")
    for k in edge_order:
        u, v = grid.edges[k]
        ru, rv = uf.find(u), uf.find(v)
        if ru == rv:
            merged = merge_self(gates.pop(ru))
            root = ru
        else:
            merged = merge_cross(gates.pop(ru), gates.pop(rv))
            root = uf.union(ru, rv)
        gates[root] = merged
        if strict and not verify_gate(merged.signature, P, tol):
            raise MergeViolation(
                f"gate after edge {k} (arity {merged.dangling_count}) fails the recurrences"
            )
        if on_merge is not None:
            on_merge(k, merged)
    result = 1 + 0j
    for gate in gates.values():
        if gate.dangling_count:
            raise GridError(f"component {sorted(gate.member_vertices)} keeps {gate.dangling_count} dangling edges")
        result *= complex(gate.signature.values[0])
    log.debug("holant over %d components = %r", len(gates), result)
    return result
