"""Random Fibonacci grids sharing one parameter set."""

from __future__ import annotations

import numpy as np

from .bases import random_basis, reweighted
from .engine import FibParams, SignatureGrid
from .fibonacci_d3 import d3_complete_from_top, d3_params_from_basis
from .fibonacci_d4 import d4_complete_from_top, d4_params_from_basis
from .signature import power_sum_signature


def basis_params(basis) -> FibParams:
    if len(basis.weights) == 3:
        return d3_params_from_basis(basis)
    return d4_params_from_basis(basis)


def random_degree_sequence(
    rng: np.random.Generator, n_vertices: int, max_arity: int, max_edges: int
) -> list[int]:
    while True:
        deg = rng.integers(1, max_arity + 1, size=n_vertices)
        if deg.sum() % 2 == 0 and deg.sum() <= 2 * max_edges:
            return deg.tolist()


def configuration_edges(rng: np.random.Generator, degrees: list[int]) -> list[tuple[int, int]]:
    """Random pairing of half-edges; self-loops and parallel edges may appear."""
    stubs = [v for v, k in enumerate(degrees) for _ in range(k)]
    rng.shuffle(stubs)
    return [(int(stubs[i]), int(stubs[i + 1])) for i in range(0, len(stubs), 2)]


def random_gate(basis, P: FibParams, n: int, rng: np.random.Generator):
    """Either a reweighted power sum or a completion from random top values."""
    d = len(basis.weights)
    if rng.random() < 0.5:
        b = reweighted(basis, rng)
        return power_sum_signature(b.weights, b.vectors, n)
    top = rng.normal(size=d) + 1j * rng.normal(size=d)
    complete = d3_complete_from_top if d == 3 else d4_complete_from_top
    return complete(top, P, n)


def random_fibonacci_grid(
    d: int,
    rng: np.random.Generator,
    *,
    min_vertices: int = 2,
    max_vertices: int = 6,
    max_arity: int = 4,
    max_edges: int = 8,
    basis=None,
) -> tuple[SignatureGrid, FibParams]:
    """Small random grid whose vertex signatures share one basis's parameters."""
    basis = basis if basis is not None else random_basis(d, rng)
    P = basis_params(basis)
    n_vertices = int(rng.integers(min_vertices, max_vertices + 1))
    degrees = random_degree_sequence(rng, n_vertices, max_arity, max_edges)
    sigs = {f"v{v}": random_gate(basis, P, k, rng) for v, k in enumerate(degrees)}
    grid = SignatureGrid(d, sigs, list(sigs), configuration_edges(rng, degrees))
    return grid, P


def random_regular_grid(
    d: int, n_vertices: int, degree: int, rng: np.random.Generator, basis=None
) -> tuple[SignatureGrid, FibParams]:
    """``degree``-regular multigraph with one shared generated signature."""
    if n_vertices * degree % 2:
        raise ValueError("a regular multigraph needs an even number of half-edges")
    basis = basis if basis is not None else random_basis(d, rng)
    P = basis_params(basis)
    sig = power_sum_signature(basis.weights, basis.vectors, degree)
    edges = configuration_edges(rng, [degree] * n_vertices)
    return SignatureGrid(d, {"g": sig}, ["g"] * n_vertices, edges), P
