from __future__ import annotations

import itertools

import numpy as np
import pytest

from fibholant import OrthoTripleD3, SignatureGrid, d3_generate, d4_generate
from fibholant.fibonacci_d4 import HADAMARD

B3_VALUES = [3, 1, -1, 3, -1, 5, 1, -1, 5, -7]


def tensor_power_value(weights, vectors, assignment) -> complex:
    """Independent route: sum_k w_k prod_i v_k[colour_i] on an explicit assignment."""
    return sum(w * np.prod([vec[c] for c in assignment]) for w, vec in zip(weights, vectors))


def naive_holant(grid: SignatureGrid) -> complex:
    """Pure-Python enumeration used to cross-check the vectorised oracle."""
    incident = [[] for _ in grid.vertices]
    for k, (u, v) in enumerate(grid.edges):
        incident[u].append(k)
        incident[v].append(k)
    total = 0j
    for colours in itertools.product(range(grid.domain_size), repeat=len(grid.edges)):
        term = 1 + 0j
        for vertex, edges in enumerate(incident):
            term *= grid.signature_of(vertex).evaluate([colours[e] for e in edges])
        total += term
    return total


@pytest.fixture
def b3():
    return OrthoTripleD3.from_columns(1, -2, -1, 0, 1, 1)


@pytest.fixture
def b3_prime():
    return OrthoTripleD3.from_columns(-2, 1, 0, -1, 1, 1)


@pytest.fixture
def b3_sig(b3):
    return d3_generate(b3, 3)


@pytest.fixture
def h4():
    return HADAMARD


@pytest.fixture
def h4_sig():
    return d4_generate(HADAMARD, 3)


@pytest.fixture
def triple_edge_b3(b3_sig):
    return SignatureGrid(3, {"b3": b3_sig}, ["b3", "b3"], [(0, 1)] * 3)


@pytest.fixture
def triple_edge_h4(h4_sig):
    return SignatureGrid(4, {"h4": h4_sig}, ["h4", "h4"], [(0, 1)] * 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
