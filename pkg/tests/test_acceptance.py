"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single ``PASS``/``FAIL`` line.  Run on its own with

    python3 -m pytest tests/test_acceptance.py -v

or as a script (``python3 tests/test_acceptance.py``) for just the report.
"""

from __future__ import annotations

import itertools
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from fibholant import (
    MergeViolation,
    SignatureGrid,
    Tolerance,
    d3_check_params,
    d3_complete_from_top,
    d3_generate,
    d3_params_from_basis,
    d3_recover_basis,
    d4_check_params,
    d4_check_side_relations,
    d4_complete_from_top,
    d4_fit_params,
    d4_generate,
    holant_bruteforce,
    holant_eval,
    verify_gate,
)
from fibholant.bases import random_basis, random_triple, random_quad
from fibholant.generators import basis_params, random_fibonacci_grid, random_regular_grid
from fibholant.io import parse_grid, parse_params

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
SEED = 20240601
GRIDS_PER_DOMAIN = 200


def rel_err(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    capture = _CAPTURE.get("manager")
    if capture is not None:
        with capture.global_and_fixture_disabled():
            print(line)
    else:
        print(line)


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _uncaptured(request):
    _CAPTURE["manager"] = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _CAPTURE.pop("manager", None)


@lru_cache(maxsize=None)
def criterion_grids() -> tuple:
    """The shared random grids of criteria 1 and 3 (seeded, built once)."""
    rng = np.random.default_rng(SEED)
    grids = []
    for d in (3, 4):
        for _ in range(GRIDS_PER_DOMAIN):
            grid, P = random_fibonacci_grid(
                d, rng, min_vertices=2, max_vertices=6, max_arity=4, max_edges=8
            )
            grids.append((d, grid, P))
    return tuple(grids)


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    worst = {3: 0.0, 4: 0.0}
    counts = {3: 0, 4: 0}
    for d, grid, P in criterion_grids():
        err = rel_err(holant_eval(grid, P), holant_bruteforce(grid))
        worst[d] = max(worst[d], err)
        counts[d] += 1
    elapsed = time.perf_counter() - start
    ok = min(counts.values()) >= 200 and max(worst.values()) <= 1e-8 and elapsed < 60
    report(
        1,
        ok,
        f"grids d3={counts[3]} d4={counts[4]}, worst relative error "
        f"d3={worst[3]:.2e} d4={worst[4]:.2e}, {elapsed:.1f} s",
    )
    assert ok


def test_criterion_2_fixture_exactness():
    def load(name):
        return parse_grid((FIXTURES / name).read_text())

    b3 = load("b3_triple_edge.json")
    two_b3 = b3.disjoint_union(b3)
    b3_params = parse_params((FIXTURES / "b3_params.json").read_text())
    h4_params = parse_params((FIXTURES / "h4_params.json").read_text())
    cases = [
        ("triple-edge B3", b3, b3_params, 251),
        ("triple-edge H4", load("h4_triple_edge.json"), h4_params, 256),
        ("two B3 copies", two_b3, b3_params, 63001),
        ("unary edge", load("unary_edge.json"), None, 6),
    ]
    worst = 0.0
    for _, grid, P, expected in cases:
        worst = max(worst, rel_err(holant_bruteforce(grid), expected))
        if P is not None:
            worst = max(worst, rel_err(holant_eval(grid, P), expected))
    ok = worst <= 1e-10
    report(2, ok, f"251 / 256 / 63001 / 6 by oracle and engine, worst relative error {worst:.1e}")
    assert ok


def test_criterion_3_merge_preservation():
    merges = 0
    violations = 0
    for _, grid, P in criterion_grids():
        def record(edge, gate):
            nonlocal merges, violations
            merges += 1
            if not verify_gate(gate.signature, P):
                violations += 1

        try:
            holant_eval(grid, P, strict=True, on_merge=record)
        except MergeViolation:
            violations += 1
    ok = violations == 0 and merges > 0
    report(3, ok, f"{merges} intermediate gates verified in strict mode, {violations} violations")
    assert ok


def test_criterion_4_constraint_identities():
    rng = np.random.default_rng(SEED + 4)
    d3_tol, d4_tol = Tolerance(rel=1e-9), Tolerance(rel=1e-8)
    d3_bad = 0
    d3_worst = 0.0
    for _ in range(500):
        P = d3_params_from_basis(random_triple(rng))
        residual, scale = P.constraint_residual()
        d3_worst = max(d3_worst, abs(residual) / scale)
        d3_bad += not d3_check_params(P, d3_tol)
    d4_bad = 0
    d4_worst = 0.0
    for _ in range(500):
        B = random_quad(rng)
        P = d4_fit_params([d4_generate(B, 2), d4_generate(B, 3)], d4_tol)
        rows = P.constraint_residuals() + P.side_residuals()
        d4_worst = max(d4_worst, max(abs(r) / s for r, s in rows))
        d4_bad += not (d4_check_params(P, d4_tol) and d4_check_side_relations(P, d4_tol))
    ok = d3_bad == 0 and d4_bad == 0
    report(
        4,
        ok,
        f"500 triples: worst scaled residual {d3_worst:.1e}, {d3_bad} failures; "
        f"500 fitted quadruples: worst {d4_worst:.1e}, {d4_bad} failures",
    )
    assert ok


def _multiset_error(found, expected) -> float:
    if len(found) != len(expected):
        return float("inf")
    return min(
        max(abs(f - e) for f, e in zip(perm, expected))
        for perm in itertools.permutations(found)
    )


def test_criterion_5_recovery_round_trip():
    rng = np.random.default_rng(SEED + 5)
    tried = 0
    worst = 0.0
    while tried < 200:
        B = random_triple(rng)
        a, c, e = (complex(v[1]) for v in B.vectors)
        if min(abs(a - c), abs(a - e), abs(c - e)) < 1e-3:
            continue
        tried += 1
        found = d3_recover_basis(d3_params_from_basis(B)).roots
        worst = max(worst, _multiset_error(list(found), [a, c, e]))
    fixture = d3_recover_basis(parse_params((FIXTURES / "b3_params.json").read_text()))
    fixture_err = _multiset_error(list(fixture.roots), [1, 1, -1])
    ok = worst <= 1e-6 and fixture_err <= 1e-6 and fixture.degenerate and bool(fixture.diagnostic)
    report(
        5,
        ok,
        f"{tried} triples, worst root error {worst:.1e}; (0,0,1,-1) gives "
        f"{sorted(round(r.real, 9) for r in fixture.roots)} with diagnostic {fixture.diagnostic!r}",
    )
    assert ok


def test_criterion_6_completion_round_trip():
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    checked = 0
    for d, max_arity, generate, complete in (
        (3, 8, d3_generate, d3_complete_from_top),
        (4, 6, d4_generate, d4_complete_from_top),
    ):
        for _ in range(20):
            B = random_basis(d, rng)
            P = basis_params(B)
            for n in range(1, max_arity + 1):
                g = generate(B, n)
                h = complete(g.values[:d], P, n)
                scale = np.maximum(1.0, np.abs(g.values))
                worst = max(worst, float(np.max(np.abs(h.values - g.values) / scale)))
                checked += 1
    ok = worst <= 1e-9
    report(6, ok, f"{checked} signatures (d3 arity <= 8, d4 arity <= 6), worst relative error {worst:.1e}")
    assert ok


def closed_form(grid: SignatureGrid, basis) -> complex:
    """Holant of a one-signature power-sum grid, per connected component."""
    vecs = np.asarray(basis.vectors, dtype=np.complex128)
    w = np.asarray(basis.weights, dtype=np.complex128)
    norms = np.einsum("kc,kc->k", vecs, vecs)
    parent = list(range(len(grid.vertices)))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in grid.edges:
        parent[find(u)] = find(v)
    total = 1 + 0j
    for root in {find(v) for v in range(len(grid.vertices))}:
        n_v = sum(find(v) == root for v in range(len(grid.vertices)))
        n_e = sum(find(u) == root for u, _ in grid.edges)
        total *= np.sum(w**n_v * norms**n_e)
    return complex(total)


def test_criterion_7_polynomial_scaling():
    rng = np.random.default_rng(SEED + 7)
    basis = random_basis(3, rng, complex_entries=False)
    grid, P = random_regular_grid(3, 100, 3, rng, basis=basis)
    start = time.perf_counter()
    value = holant_eval(grid, P)
    elapsed = time.perf_counter() - start
    spread = 0.0
    for _ in range(5):
        perm = rng.permutation(len(grid.edges))
        shuffled = holant_eval(grid.with_edges([grid.edges[i] for i in perm]), P)
        spread = max(spread, abs(shuffled - value) / max(1.0, abs(value)))
    exact = closed_form(grid, basis)
    closed_err = abs(value - exact) / max(1.0, abs(exact))
    ok = (
        len(grid.vertices) == 100
        and len(grid.edges) == 150
        and np.isfinite(value)
        and elapsed < 5
        and spread <= 1e-6
    )
    report(
        7,
        ok,
        f"100 vertices / 150 edges in {elapsed:.2f} s, order spread {spread:.1e} over 5 "
        f"permutations, closed-form relative gap {closed_err:.1e}",
    )
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
