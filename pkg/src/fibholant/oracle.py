"""Brute-force Holant by enumerating every edge colouring.

No Fibonacci structure is assumed: the sum over all ``d^|E|`` colourings of
the product of vertex signature values is computed directly.  Colourings are
numbered by a mixed-radix counter with edge 0 as the most significant digit
and summed in chunks of consecutive indices.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .engine import SignatureGrid
from .errors import EnumerationCapExceeded, GridError
from .signature import count_table

DEFAULT_CAP = 10**7
CHUNK = 1 << 16


def _incidence(grid: SignatureGrid) -> list[list[int]]:
    inc: list[list[int]] = [[] for _ in grid.vertices]
    for k, (u, v) in enumerate(grid.edges):
        inc[u].append(k)
        inc[v].append(k)
    return inc


def _lookup(sig, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense table over base-``(n+1)`` histogram codes -> signature value."""
    n = sig.arity
    counts = count_table(d, n)
    radix = (n + 1) ** np.arange(d - 1, -1, -1)
    table = np.zeros((n + 1) ** d, dtype=np.complex128)
    table[counts @ radix] = sig.values
    return table, radix


class _Plan:
    def __init__(self, grid: SignatureGrid) -> None:
        problems = grid.structural_problems()
        if problems:
            raise GridError("; ".join(msg for _, msg in problems))
        self.d = grid.domain_size
        self.n_edges = len(grid.edges)
        self.total = self.d**self.n_edges
        self.vertices = []
        for vertex, edges in enumerate(_incidence(grid)):
            table, radix = _lookup(grid.signature_of(vertex), self.d)
            self.vertices.append((np.array(edges, dtype=np.int64), table, radix))
        self.place = self.d ** np.arange(self.n_edges - 1, -1, -1, dtype=np.int64)

    def chunk_sum(self, start: int, stop: int) -> complex:
        idx = np.arange(start, stop, dtype=np.int64)
        colours = (idx[:, None] // self.place[None, :]) % self.d
        prod = np.ones(idx.size, dtype=np.complex128)
        for edges, table, radix in self.vertices:
            hist = np.zeros((idx.size, self.d), dtype=np.int64)
            for e in edges:
                hist[np.arange(idx.size), colours[:, e]] += 1
            prod *= table[hist @ radix]
        return complex(prod.sum())


def holant_bruteforce(
    grid: SignatureGrid,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    chunk: int = CHUNK,
) -> complex:
    """Exact-semantics Holant value; refuses when ``d^|E|`` exceeds ``cap``."""
    d, m = grid.domain_size, len(grid.edges)
    if d**m > cap:
        raise EnumerationCapExceeded(f"{d}^{m} colourings exceed the cap of {cap}")
    plan = _Plan(grid)
    bounds = [(s, min(s + chunk, plan.total)) for s in range(0, plan.total, chunk)]
    if workers <= 1:
        parts = [plan.chunk_sum(s, e) for s, e in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: plan.chunk_sum(*b), bounds))
    # chunks are added in index order regardless of how they were computed
    total = 0j
    for part in parts:
        total += part
    return total
