"""Randomised consistency suite behind ``fibholant selfcheck``."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .engine import Gate, all_splits, cross_entry, holant_eval, merge_cross, verify_gate
from .generators import random_fibonacci_grid, random_gate, basis_params, random_regular_grid
from .bases import random_basis
from .oracle import holant_bruteforce
from .signature import DEFAULT_TOL, Tolerance, all_counts


@dataclass
class CheckSummary:
    grids: int = 0
    merges: int = 0
    merge_violations: int = 0
    worst_oracle_error: float = 0.0
    worst_order_error: float = 0.0
    split_checks: int = 0
    worst_split_error: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "grids": self.grids,
            "merges": self.merges,
            "merge_violations": self.merge_violations,
            "worst_oracle_error": self.worst_oracle_error,
            "worst_order_error": self.worst_order_error,
            "split_checks": self.split_checks,
            "worst_split_error": self.worst_split_error,
            "failures": self.failures,
        }


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def split_spread(F: Gate, G: Gate) -> float:
    """Largest relative disagreement of a cross merge over all feasible splits."""
    f, g = F.signature, G.signature
    r, w = f.arity - 1, g.arity - 1
    worst = 0.0
    for m in all_counts(f.domain_size, r + w):
        vals = [cross_entry(f, g, mf, mg) for mf, mg in all_splits(m, r)]
        ref = vals[0]
        worst = max(worst, max(_rel(v, ref) for v in vals))
    return worst


def run_selfcheck(
    seed: int = 0,
    count: int = 50,
    domains: tuple[int, ...] = (3, 4),
    tol: Tolerance = DEFAULT_TOL,
    oracle_tol: float = 1e-8,
) -> CheckSummary:
    rng = np.random.default_rng(seed)
    out = CheckSummary()
    for d in domains:
        for k in range(count):
            grid, P = random_fibonacci_grid(d, rng)
            out.grids += 1

            def record(edge: int, gate: Gate) -> None:
                out.merges += 1
                if not verify_gate(gate.signature, P, tol):
                    out.merge_violations += 1

            value = holant_eval(grid, P, tol=tol, on_merge=record)
            err = _rel(value, holant_bruteforce(grid))
            out.worst_oracle_error = max(out.worst_oracle_error, err)
            if err > oracle_tol:
                out.failures.append(f"d={d} grid {k}: engine/oracle relative gap {err:.3g}")
            perm = rng.permutation(len(grid.edges))
            shuffled = holant_eval(grid.with_edges([grid.edges[i] for i in perm]), P, tol=tol)
            out.worst_order_error = max(out.worst_order_error, _rel(shuffled, value))

            # split invariance on a random cross merge of total arity <= 6
            basis = random_basis(d, rng)
            Q = basis_params(basis)
            a, b = (int(v) for v in rng.integers(1, 4, size=2))
            F = Gate(random_gate(basis, Q, a, rng))
            G = Gate(random_gate(basis, Q, b, rng))
            spread = split_spread(F, G)
            out.split_checks += 1
            out.worst_split_error = max(out.worst_split_error, spread)
            if spread > 1e-9:
                out.failures.append(f"d={d}: cross merge depends on the split ({spread:.3g})")
            if not verify_gate(merge_cross(F, G).signature, Q, tol):
                out.merge_violations += 1
    if out.merge_violations:
        out.failures.append(f"{out.merge_violations} intermediate gates failed verification")
    if out.worst_order_error > oracle_tol:
        out.failures.append(f"edge order changed the result by {out.worst_order_error:.3g}")
    return out


def run_bench(seed: int, domain: int, sizes: list[int], degree: int = 3) -> list[dict]:
    """Engine vs oracle timings on random regular grids (real bases)."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        basis = random_basis(domain, rng, complex_entries=False)
        grid, P = random_regular_grid(domain, n, degree, rng, basis=basis)
        t0 = time.perf_counter()
        value = holant_eval(grid, P)
        engine_s = time.perf_counter() - t0
        row = {"vertices": n, "edges": len(grid.edges), "engine_seconds": engine_s, "holant": value}
        if domain ** len(grid.edges) <= 10**6:
            t0 = time.perf_counter()
            row["oracle"] = holant_bruteforce(grid)
            row["oracle_seconds"] = time.perf_counter() - t0
        else:
            row["oracle"] = None
            row["oracle_seconds"] = None
        rows.append(row)
    return rows
