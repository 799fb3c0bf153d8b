"""Generalized Fibonacci gates on three colours (R, G, B).

A gate with parameters ``(s, x, y, t)`` satisfies, for every base count vector
``b`` of arity ``n - 2``::

    g[b + 2G]    = g[b + 2R] + s g[b + R + G] + x g[b + R + B]
    g[b + G + B] =             x g[b + R + G] + y g[b + R + B]
    g[b + 2B]    = g[b + 2R] + y g[b + R + G] + t g[b + R + B]

with the constraint ``s y + x t + 1 = x^2 + y^2``.  Signatures of the form
``p (1,a,b)^n + q (1,c,d)^n + r (1,e,f)^n`` over a bilinearly orthogonal
triple are gates with parameters depending only on the vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import recurrence
from .errors import BasisError, InvalidParams, NotFibonacci, SignatureError
from .signature import DEFAULT_TOL, Signature, Tolerance, power_sum_signature

LAYOUT = recurrence.RecurrenceLayout(
    domain_size=3,
    names=("s", "x", "y", "t"),
    pairs=(
        ((1, 1), ("s", "x")),
        ((1, 2), ("x", "y")),
        ((2, 2), ("y", "t")),
    ),
)


@dataclass(frozen=True)
class FibParamsD3:
    s: complex
    x: complex
    y: complex
    t: complex

    def as_dict(self) -> dict[str, complex]:
        return {"s": self.s, "x": self.x, "y": self.y, "t": self.t}

    def constraint_residual(self) -> tuple[complex, float]:
        s, x, y, t = self.s, self.x, self.y, self.t
        residual = s * y + x * t + 1 - x * x - y * y
        scale = abs(s * y) + abs(x * t) + 1 + abs(x) ** 2 + abs(y) ** 2
        return residual, scale


@dataclass(frozen=True)
class OrthoTripleD3:
    """Weights and vectors ``(1, a, b), (1, c, d), (1, e, f)``."""

    weights: tuple[complex, complex, complex]
    vectors: tuple[tuple[complex, complex, complex], ...]

    @classmethod
    def from_columns(cls, a, b, c, d, e, f, weights=(1, 1, 1)) -> OrthoTripleD3:
        return cls(tuple(weights), ((1, a, b), (1, c, d), (1, e, f)))

    def matrix(self) -> np.ndarray:
        """3x3 array with the vectors as rows."""
        return np.asarray(self.vectors, dtype=np.complex128)

    def check(self, tol: Tolerance = DEFAULT_TOL) -> None:
        _check_orthogonal(self.weights, self.vectors, 3, tol)


def _check_orthogonal(weights, vectors, d: int, tol: Tolerance) -> None:
    vecs = np.asarray(vectors, dtype=np.complex128)
    w = np.asarray(weights, dtype=np.complex128)
    if vecs.shape != (d, d) or w.shape != (d,):
        raise BasisError(f"need {d} weights and {d} vectors of length {d}")
    if not np.all(np.isfinite(vecs)) or not np.all(np.isfinite(w)):
        raise BasisError("basis entries must be finite")
    if np.any(vecs[:, 0] != 1):
        raise BasisError("every basis vector must have first coordinate 1")
    if np.any(w == 0):
        raise BasisError("weights must be non-zero")
    for i in range(d):
        for j in range(i + 1, d):
            dot = vecs[i] @ vecs[j]
            scale = float(np.abs(vecs[i]) @ np.abs(vecs[j]))
            if not tol.accepts(dot, scale):
                raise BasisError(f"vectors {i} and {j} are not orthogonal (dot = {dot:.3g})")


def _as_params(P) -> FibParamsD3:
    if isinstance(P, FibParamsD3):
        return P
    return FibParamsD3(*P)


def d3_check_params(P: FibParamsD3, tol: Tolerance = DEFAULT_TOL) -> bool:
    residual, scale = _as_params(P).constraint_residual()
    return tol.accepts(residual, scale)


def d3_params_from_basis(B: OrthoTripleD3, tol: Tolerance = DEFAULT_TOL) -> FibParamsD3:
    B.check(tol)
    (_, a, b), (_, c, d), (_, e, f) = (tuple(complex(v) for v in vec) for vec in B.vectors)
    ace, bdf = a * c * e, b * d * f
    return FibParamsD3(s=ace + a + c + e, x=-bdf, y=-ace, t=bdf + b + d + f)


def d3_generate(B: OrthoTripleD3, n: int, tol: Tolerance = DEFAULT_TOL) -> Signature:
    if n < 1:
        raise SignatureError("generated signatures need arity >= 1")
    B.check(tol)
    return power_sum_signature(B.weights, B.vectors, n)


def _require_domain(g: Signature) -> None:
    if g.domain_size != 3:
        raise SignatureError(f"domain-3 gate check on a domain-{g.domain_size} signature")


def d3_verify_gate(g: Signature, P: FibParamsD3, tol: Tolerance = DEFAULT_TOL) -> bool:
    _require_domain(g)
    P = _as_params(P)
    if not d3_check_params(P, tol):
        return False
    return recurrence.satisfies(g, LAYOUT, P.as_dict(), tol)


def d3_fit_params(gs: Sequence[Signature], tol: Tolerance = DEFAULT_TOL) -> FibParamsD3:
    """Parameters shared by all ``gs``; see :func:`recurrence.fit` for errors."""
    for g in gs:
        _require_domain(g)
    P = FibParamsD3(**recurrence.fit(gs, LAYOUT, tol))
    if not d3_check_params(P, tol):
        raise NotFibonacci("fitted parameters violate s*y + x*t + 1 = x^2 + y^2")
    return P


def d3_complete_from_top(
    top: Sequence[complex], P: FibParamsD3, n: int, tol: Tolerance = DEFAULT_TOL
) -> Signature:
    P = _as_params(P)
    if not d3_check_params(P, tol):
        raise InvalidParams("parameters violate s*y + x*t + 1 = x^2 + y^2")
    return recurrence.complete_from_top(top, LAYOUT, P.as_dict(), n)


@dataclass(frozen=True)
class BasisReport:
    """Outcome of basis recovery.

    ``roots`` is the multiset of second coordinates ``{a, c, e}``.  ``matrix``
    holds the recovered vectors as rows when the third coordinates could be
    solved for; otherwise it is ``None`` and ``diagnostic`` says why.
    """

    roots: tuple[complex, complex, complex]
    matrix: np.ndarray | None
    diagnostic: str | None

    @property
    def degenerate(self) -> bool:
        return self.matrix is None


def _cluster_roots(roots: np.ndarray, merge_rel: float = 1e-6) -> list[complex]:
    """Snap numerically split repeated roots onto their common mean."""
    roots = [complex(r) for r in roots]
    out = list(roots)
    used = [False] * len(roots)
    for i in range(len(roots)):
        if used[i]:
            continue
        group = [i]
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[i] - roots[j]) <= merge_rel * max(1.0, abs(roots[i])):
                group.append(j)
        mean = sum(roots[k] for k in group) / len(group)
        for k in group:
            used[k] = True
            out[k] = mean
    return sorted(out, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def cubic_coefficients(P: FibParamsD3) -> tuple[complex, complex, complex]:
    """``(Y, Z, X)`` of ``z^3 - Y z^2 + Z z - X`` whose roots are ``a, c, e``."""
    P = _as_params(P)
    s, x, y = P.s, P.x, P.y
    X = -y
    Y = s + y
    Z = -x * x - y * y + (s + y) * y - 1
    return Y, Z, X


def d3_recover_basis(P: FibParamsD3, tol: Tolerance = DEFAULT_TOL) -> BasisReport:
    P = _as_params(P)
    if not d3_check_params(P, tol):
        raise InvalidParams("parameters violate s*y + x*t + 1 = x^2 + y^2")
    Y, Z, X = cubic_coefficients(P)
    a, c, e = _cluster_roots(np.roots([1, -Y, Z, -X]))
    bd, bf, df = -1 - a * c, -1 - a * e, -1 - c * e
    small = 1e-9 * max(1.0, abs(a), abs(c), abs(e)) ** 2
    if min(abs(bd), abs(bf), abs(df)) <= small or abs(P.x) <= small:
        return BasisReport(
            (a, c, e),
            None,
            "a product of third coordinates vanishes (bd, bf or df = 0); "
            "third coordinates are not determined by the parameters",
        )
    # b*d*f = -x fixes the sign left open by b^2 = (bd)(bf)/(df)
    b = -(bd * bf) / P.x
    d, f = bd / b, bf / b
    matrix = np.array([[1, a, b], [1, c, d], [1, e, f]], dtype=np.complex128)
    diagnostic = None
    loose = Tolerance(rel=1e-6, abs_floor=1e-9)
    if not loose.close(b * b * df, bd * bf) or not loose.close(b + d + f - P.x, P.t):
        diagnostic = "recovered third coordinates are inconsistent with the parameters"
    return BasisReport((a, c, e), matrix, diagnostic)
