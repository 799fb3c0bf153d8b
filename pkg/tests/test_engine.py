import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibholant import (
    FibParamsD3,
    FibParamsD4,
    Gate,
    GridError,
    MergeViolation,
    Signature,
    SignatureError,
    SignatureGrid,
    holant_bruteforce,
    holant_eval,
    merge_cross,
    merge_self,
    validate_grid,
    verify_gate,
)
from fibholant.engine import all_splits, cross_entry, greedy_split
from fibholant.generators import random_fibonacci_grid
from fibholant.signature import all_counts

B3_PARAMS = FibParamsD3(0, 0, 1, -1)
H4_PARAMS = FibParamsD4(*[0] * 9, 1)
ALL_DISTINCT = Signature.from_function(3, 3, lambda c: 1 if c == (1, 1, 1) else 0)
seeds = st.integers(0, 2**32 - 1)


def test_validate_triple_edge(triple_edge_b3):
    assert validate_grid(triple_edge_b3, B3_PARAMS).ok


def test_validate_degree_mismatch(b3_sig):
    grid = SignatureGrid(3, {"b3": b3_sig}, ["b3", "b3", "b3"], [(0, 1), (0, 1), (0, 2), (1, 2)])
    report = validate_grid(grid, B3_PARAMS)
    assert not report.ok
    assert any(v == 2 and "degree 2" in msg for v, msg in report.problems)


def test_validate_not_fibonacci():
    grid = SignatureGrid(3, {"ad": ALL_DISTINCT}, ["ad", "ad"], [(0, 1)] * 3)
    report = validate_grid(grid, B3_PARAMS)
    assert not report.ok
    assert {v for v, _ in report.problems} == {0, 1}
    with pytest.raises(GridError):
        holant_eval(grid, B3_PARAMS)


def test_validate_domain_mismatch(triple_edge_b3):
    assert not validate_grid(triple_edge_b3, H4_PARAMS).ok


def test_merge_cross_b3_top(b3_sig):
    H = merge_cross(Gate(b3_sig), Gate(b3_sig))
    assert H.dangling_count == 4
    assert H.signature[4, 0, 0] == 9 + 1 + 1 == 11
    # brute force over the shared edge colour
    for m in all_counts(3, 4):
        mf, mg = greedy_split(m, 2)
        expected = sum(
            b3_sig.evaluate(_assign(mf) + [c]) * b3_sig.evaluate(_assign(mg) + [c]) for c in range(3)
        )
        assert H.signature[m] == expected


def _assign(counts):
    return [c for c, k in enumerate(counts) for _ in range(k)]


def test_merge_cross_unary_inner_product():
    u = Gate(Signature(3, 1, [1, 2, 3]))
    v = Gate(Signature(3, 1, [1, 1, 1]))
    H = merge_cross(u, v)
    assert H.dangling_count == 0 and H.signature.values.tolist() == [6]


def test_merge_cross_split_invariance_example(b3_sig):
    a = cross_entry(b3_sig, b3_sig, (2, 0, 0), (0, 1, 1))
    b = cross_entry(b3_sig, b3_sig, (1, 1, 0), (1, 0, 1))
    assert a == b


def test_merge_cross_needs_dangling_edges():
    with pytest.raises(SignatureError):
        merge_cross(Gate(Signature(3, 0, [1])), Gate(Signature(3, 1, [1, 1, 1])))


def test_greedy_split():
    assert greedy_split((1, 2, 1), 2) == ((1, 1, 0), (0, 1, 1))
    assert sorted(all_splits((1, 1), 1)) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    with pytest.raises(SignatureError):
        greedy_split((1, 0), 2)


def test_merge_self_fixtures(b3_sig, h4_sig):
    assert merge_self(Gate(b3_sig)).signature.values.tolist() == [11, 7, -9]
    assert merge_self(Gate(h4_sig)).signature.values.tolist() == [16, 0, 0, 0]
    with pytest.raises(SignatureError):
        merge_self(Gate(Signature(3, 1, [1, 2, 3])))


def test_merge_self_matches_triangle_numbering(rng):
    # 1-based reading order of an arity-4 triangle: F1 .. F15
    F = rng.normal(size=15)
    H = merge_self(Gate(Signature(3, 4, F))).signature.values.real
    f = dict(enumerate(F, start=1))
    expected = [
        f[1] + f[4] + f[6],
        f[2] + f[7] + f[9],
        f[3] + f[8] + f[10],
        f[4] + f[11] + f[13],
        f[5] + f[12] + f[14],
        f[6] + f[13] + f[15],
    ]
    assert H == pytest.approx(expected)


def test_merge_self_domain4_top(rng):
    F = Signature(4, 3, rng.normal(size=20))
    H = merge_self(Gate(F)).signature
    assert H.values[0] == pytest.approx(F[3, 0, 0, 0] + F[1, 2, 0, 0] + F[1, 0, 2, 0] + F[1, 0, 0, 2])


def test_holant_examples(triple_edge_b3, triple_edge_h4):
    assert holant_eval(triple_edge_b3, B3_PARAMS) == pytest.approx(251)
    assert holant_eval(triple_edge_h4, H4_PARAMS) == pytest.approx(256)
    both = triple_edge_b3.disjoint_union(triple_edge_b3)
    assert holant_eval(both, B3_PARAMS) == pytest.approx(63001)


def test_holant_empty_grid():
    assert holant_eval(SignatureGrid(3, {}, [], []), B3_PARAMS) == 1


def test_holant_with_self_loops(b3_sig):
    grid = SignatureGrid(3, {"b3": b3_sig}, ["b3", "b3"], [(0, 0), (0, 1), (1, 1)])
    assert holant_eval(grid, B3_PARAMS, strict=True) == pytest.approx(holant_bruteforce(grid))


def test_strict_mode_catches_broken_gates(rng):
    junk = Signature(3, 3, rng.normal(size=10))
    grid = SignatureGrid(3, {"junk": junk}, ["junk", "junk"], [(0, 1)] * 3)
    with pytest.raises(MergeViolation):
        holant_eval(grid, B3_PARAMS, strict=True, validate=False)


def test_unknown_order(triple_edge_b3):
    with pytest.raises(ValueError):
        holant_eval(triple_edge_b3, B3_PARAMS, order="random")


def _rel(a, b):
    return abs(a - b) / max(1, abs(b))


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([3, 4]))
def test_engine_matches_oracle(seed, d):
    grid, P = random_fibonacci_grid(d, np.random.default_rng(seed))
    assert _rel(holant_eval(grid, P), holant_bruteforce(grid)) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([3, 4]))
def test_intermediate_gates_stay_fibonacci(seed, d):
    grid, P = random_fibonacci_grid(d, np.random.default_rng(seed))
    seen = []
    holant_eval(grid, P, on_merge=lambda k, g: seen.append(verify_gate(g.signature, P)))
    assert all(seen) and len(seen) == len(grid.edges)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([3, 4]))
def test_edge_order_invariance(seed, d):
    rng = np.random.default_rng(seed)
    grid, P = random_fibonacci_grid(d, rng)
    base = holant_eval(grid, P)
    perm = rng.permutation(len(grid.edges))
    shuffled = grid.with_edges([grid.edges[k] for k in perm])
    assert _rel(holant_eval(shuffled, P), base) <= 1e-8
    assert _rel(holant_eval(grid, P, order="min-arity"), base) <= 1e-8


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([3, 4]))
def test_disjoint_union_multiplies(seed, d):
    rng = np.random.default_rng(seed)
    g1, P = random_fibonacci_grid(d, rng, max_edges=5)
    # a second grid over the same signatures, hence the same parameters
    g2 = g1.with_edges(list(reversed(g1.edges)))
    joint = g1.disjoint_union(g2)
    assert _rel(holant_eval(joint, P), holant_eval(g1, P) * holant_eval(g2, P)) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([3, 4]), st.integers(1, 3), st.integers(1, 3))
def test_split_invariance_random_gates(seed, d, a, b):
    from fibholant.bases import random_basis
    from fibholant.generators import basis_params, random_gate

    rng = np.random.default_rng(seed)
    basis = random_basis(d, rng)
    P = basis_params(basis)
    F, G = random_gate(basis, P, a, rng), random_gate(basis, P, b, rng)
    H = merge_cross(Gate(F), Gate(G)).signature
    for m in all_counts(d, a + b - 2):
        for mf, mg in all_splits(m, a - 1):
            assert _rel(cross_entry(F, G, mf, mg), H[m]) <= 1e-9
