"""Generalized Fibonacci gates on four colours (R, G, B, W).

Ten parameters ``a, b, c, d, e, f, h, i, j, p`` drive six recurrences per base
count vector ``b`` of arity ``n - 2``::

    g[b + 2G]    = g[b + 2R] + a g[b+R+G] + b g[b+R+B] + c g[b+R+W]
    g[b + 2B]    = g[b + 2R] + d g[b+R+G] + e g[b+R+B] + f g[b+R+W]
    g[b + 2W]    = g[b + 2R] + h g[b+R+G] + i g[b+R+B] + j g[b+R+W]
    g[b + G + B] =             b g[b+R+G] + d g[b+R+B] + p g[b+R+W]
    g[b + G + W] =             c g[b+R+G] + p g[b+R+B] + h g[b+R+W]
    g[b + B + W] =             p g[b+R+G] + f g[b+R+B] + i g[b+R+W]
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import recurrence
from .errors import InvalidParams, NotFibonacci, SignatureError
from .fibonacci_d3 import _check_orthogonal
from .signature import DEFAULT_TOL, Signature, Tolerance, power_sum_signature

NAMES = ("a", "b", "c", "d", "e", "f", "h", "i", "j", "p")

LAYOUT = recurrence.RecurrenceLayout(
    domain_size=4,
    names=NAMES,
    pairs=(
        ((1, 1), ("a", "b", "c")),
        ((2, 2), ("d", "e", "f")),
        ((3, 3), ("h", "i", "j")),
        ((1, 2), ("b", "d", "p")),
        ((1, 3), ("c", "p", "h")),
        ((2, 3), ("p", "f", "i")),
    ),
)


@dataclass(frozen=True)
class FibParamsD4:
    a: complex
    b: complex
    c: complex
    d: complex
    e: complex
    f: complex
    h: complex
    i: complex
    j: complex
    p: complex

    def as_dict(self) -> dict[str, complex]:
        return {fld.name: getattr(self, fld.name) for fld in fields(self)}

    def constraint_residuals(self) -> list[tuple[complex, float]]:
        """Residual and scale of the three quadratic relations and the cubic in ``p``."""
        a, b, c, d, e, f, h, i, j, p = (getattr(self, n) for n in NAMES)
        out = []
        for lhs, rhs in (
            ((a * d, b * e, c * f, 1), (b * b, d * d, p * p)),
            ((d * h, e * i, f * j, 1), (f * f, i * i, p * p)),
            ((h * a, i * b, j * c, 1), (h * h, c * c, p * p)),
            ((p**3, -(b * i + c * f + d * h + 1) * p, b * f * h, c * d * i), ()),
        ):
            out.append((sum(lhs) - sum(rhs), sum(map(abs, lhs)) + sum(map(abs, rhs))))
        return out

    def side_residuals(self) -> list[tuple[complex, float]]:
        a, b, c, d, e, f, h, i, j, p = (getattr(self, n) for n in NAMES)
        out = []
        for lhs, rhs in (
            ((a * p, b * f, c * i), (b * c, d * p, p * h)),
            ((b * h, d * i, p * j), (c * p, p * f, h * i)),
            ((c * d, p * e, h * f), (b * p, d * f, p * i)),
        ):
            out.append((sum(lhs) - sum(rhs), sum(map(abs, lhs)) + sum(map(abs, rhs))))
        return out


@dataclass(frozen=True)
class OrthoQuadD4:
    """Weights and four vectors ``(1, t1, t2, t3), ...`` that are pairwise orthogonal."""

    weights: tuple[complex, complex, complex, complex]
    vectors: tuple[tuple[complex, complex, complex, complex], ...]

    def matrix(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=np.complex128)

    def check(self, tol: Tolerance = DEFAULT_TOL) -> None:
        _check_orthogonal(self.weights, self.vectors, 4, tol)


HADAMARD = OrthoQuadD4(
    weights=(1, 1, 1, 1),
    vectors=((1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)),
)


def _as_params(P) -> FibParamsD4:
    if isinstance(P, FibParamsD4):
        return P
    return FibParamsD4(*P)


def d4_check_params(P: FibParamsD4, tol: Tolerance = DEFAULT_TOL) -> bool:
    return all(tol.accepts(r, s) for r, s in _as_params(P).constraint_residuals())


def d4_check_side_relations(P: FibParamsD4, tol: Tolerance = DEFAULT_TOL) -> bool:
    return all(tol.accepts(r, s) for r, s in _as_params(P).side_residuals())


def d4_generate(B: OrthoQuadD4, n: int, tol: Tolerance = DEFAULT_TOL) -> Signature:
    if n < 1:
        raise SignatureError("generated signatures need arity >= 1")
    B.check(tol)
    return power_sum_signature(B.weights, B.vectors, n)


def d4_params_from_basis(B: OrthoQuadD4, tol: Tolerance = DEFAULT_TOL) -> FibParamsD4:
    """Parameters read off the vectors themselves.

    Each vector ``(1, u, v, w)`` must satisfy ``u^2 = 1 + a u + b v + c w``,
    ``u v = b u + d v + p w`` and the four analogous products; the 24 equations
    are solved jointly.  No generated signature is involved.
    """
    B.check(tol)
    vecs = B.matrix()
    idx = {n: k for k, n in enumerate(NAMES)}
    rows, rhs = [], []
    for (alpha, beta), names in LAYOUT.pairs:
        for vec in vecs:
            row = np.zeros(len(NAMES), dtype=np.complex128)
            for gamma, name in enumerate(names, start=1):
                row[idx[name]] += vec[gamma]
            rows.append(row)
            rhs.append(vec[alpha] * vec[beta] - (1 if alpha == beta else 0))
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return FibParamsD4(*(complex(v) for v in sol))


def _require_domain(g: Signature) -> None:
    if g.domain_size != 4:
        raise SignatureError(f"domain-4 gate check on a domain-{g.domain_size} signature")


def d4_verify_gate(g: Signature, P: FibParamsD4, tol: Tolerance = DEFAULT_TOL) -> bool:
    _require_domain(g)
    P = _as_params(P)
    if not d4_check_params(P, tol):
        return False
    return recurrence.satisfies(g, LAYOUT, P.as_dict(), tol)


def d4_fit_params(gs: Sequence[Signature], tol: Tolerance = DEFAULT_TOL) -> FibParamsD4:
    for g in gs:
        _require_domain(g)
    P = FibParamsD4(**recurrence.fit(gs, LAYOUT, tol))
    if not d4_check_params(P, tol):
        raise NotFibonacci("fitted parameters violate the quadratic/cubic constraints")
    return P


def d4_complete_from_top(
    top: Sequence[complex], P: FibParamsD4, n: int, tol: Tolerance = DEFAULT_TOL
) -> Signature:
    P = _as_params(P)
    if not d4_check_params(P, tol):
        raise InvalidParams("parameters violate the quadratic/cubic constraints")
    return recurrence.complete_from_top(top, LAYOUT, P.as_dict(), n)
