"""Seeded random orthogonal bases for generators, tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .fibonacci_d3 import OrthoTripleD3
from .fibonacci_d4 import OrthoQuadD4


def bilinear_gram_schmidt(raw: np.ndarray) -> np.ndarray:
    """Rows made pairwise orthogonal under ``u . v = sum u_k v_k`` (no conjugation)."""
    out = []
    for vec in np.asarray(raw, dtype=np.complex128):
        for u in out:
            vec = vec - (vec @ u) * u
        norm = np.sqrt(vec @ vec + 0j)
        if abs(norm) < 1e-8:
            raise ValueError("isotropic vector during orthogonalization")
        out.append(vec / norm)
    return np.array(out)


def random_orthogonal_vectors(
    d: int,
    rng: np.random.Generator,
    complex_entries: bool = True,
    min_lead: float = 0.3,
    max_entry: float = 4.0,
) -> np.ndarray:
    """``d`` mutually orthogonal rows with first coordinate 1.

    Candidates whose leading coordinates are tiny (before rescaling) or whose
    rescaled entries exceed ``max_entry`` are redrawn to keep tests well
    conditioned.
    """
    while True:
        raw = rng.normal(size=(d, d))
        if complex_entries:
            raw = raw + 1j * rng.normal(size=(d, d))
        try:
            rows = bilinear_gram_schmidt(raw)
        except ValueError:
            continue
        lead = rows[:, 0]
        if np.min(np.abs(lead)) < min_lead * np.max(np.abs(rows)):
            continue
        rows = rows / lead[:, None]
        if np.max(np.abs(rows)) > max_entry:
            continue
        rows[:, 0] = 1
        return rows


def random_weights(d: int, rng: np.random.Generator, complex_entries: bool = True) -> np.ndarray:
    mag = rng.uniform(0.5, 1.5, size=d)
    if not complex_entries:
        return mag * rng.choice([-1.0, 1.0], size=d)
    return mag * np.exp(2j * np.pi * rng.uniform(size=d))


def _freeze(arr: np.ndarray) -> tuple:
    return tuple(tuple(complex(v) for v in row) for row in arr)


def random_triple(rng: np.random.Generator, complex_entries: bool = True) -> OrthoTripleD3:
    vecs = random_orthogonal_vectors(3, rng, complex_entries)
    w = random_weights(3, rng, complex_entries)
    return OrthoTripleD3(tuple(complex(v) for v in w), _freeze(vecs))


def random_quad(rng: np.random.Generator, complex_entries: bool = True) -> OrthoQuadD4:
    vecs = random_orthogonal_vectors(4, rng, complex_entries)
    w = random_weights(4, rng, complex_entries)
    return OrthoQuadD4(tuple(complex(v) for v in w), _freeze(vecs))


def random_basis(d: int, rng: np.random.Generator, complex_entries: bool = True):
    if d == 3:
        return random_triple(rng, complex_entries)
    if d == 4:
        return random_quad(rng, complex_entries)
    raise ValueError(f"orthogonal bases are only provided for d in (3, 4), got {d}")


def reweighted(basis, rng: np.random.Generator, complex_entries: bool = True):
    """Same vectors, fresh random weights (hence the same gate parameters)."""
    w = tuple(complex(v) for v in random_weights(len(basis.weights), rng, complex_entries))
    return type(basis)(w, basis.vectors)
