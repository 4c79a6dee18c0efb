from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from lipfree import (
    FreeVector,
    LipFunction,
    free_norm,
    free_norm_lp,
    free_norm_tree,
    godard_embed,
    lip_norm,
    molecule,
    pairing,
    realize,
    transport_norm,
)
from lipfree.freespace import edge_flows
from lipfree.transport import solve_transport

from oracles import brute_force_transport, nx_tree_metric, random_metric


def _dirac(M, label):
    return FreeVector.dirac(M, M.index(label))


def _random_vector(rng, M, lo=-5, hi=5):
    return FreeVector({i: Fraction(rng.randint(lo, hi), rng.randint(1, 3))
                       for i in M.points() if i != M.base and rng.random() < 0.8})


def test_lip_norm_examples(M3, U3):
    for M in (M3, U3):
        f = LipFunction(M.dist[M.base])
        assert lip_norm(M, f) == 1
    assert lip_norm(M3, LipFunction((0, 0, 0))) == 0
    assert lip_norm(M3, LipFunction((0, 1, 0))) == 1


def test_free_norm_examples(M3, path3):
    for M in (M3, path3):
        for x in M.points():
            assert free_norm(M, FreeVector.dirac(M, x)) == M.d(M.base, x)
    assert free_norm(M3, _dirac(M3, "a") - _dirac(M3, "b")) == 1
    a = FreeVector({1: 1, 2: 1})
    assert brute_force_transport(path3.dist, a.masses(path3)) == 3
    assert free_norm(path3, a) == 3
    assert free_norm(M3, FreeVector()) == 0


def test_zero_vector_has_empty_plan(M3):
    res = transport_norm(M3, FreeVector())
    assert res.value == 0 and res.plan == []


def test_tree_norm_examples(M3, U3, path3, star):
    T = realize(path3)
    assert edge_flows(T, _dirac(path3, "2")) == [1, 1]
    assert godard_embed(T, _dirac(path3, "2")) == [1, 1]
    assert free_norm_tree(T, _dirac(path3, "2")) == 2

    T = realize(M3)
    # edges (0,s), (a,s), (b,s)
    assert edge_flows(T, _dirac(M3, "a") - _dirac(M3, "b")) == [0, 1, -1]
    assert free_norm_tree(T, _dirac(M3, "a") - _dirac(M3, "b")) == 1
    assert godard_embed(T, _dirac(M3, "a")) == [Fraction(1, 2), Fraction(1, 2), 0]
    assert len(T.edges) == 3 > M3.n - 1

    T = realize(U3)
    assert free_norm_tree(T, _dirac(U3, "a")) == 2 == U3.d(0, 1)

    T = realize(star)
    coords = godard_embed(T, _dirac(star, "y"))
    assert [c for c in coords if c] == [1]


def test_pairing_examples(M3):
    d0 = LipFunction(M3.dist[0])
    assert pairing(M3, _dirac(M3, "a"), d0) == 1
    assert pairing(M3, _dirac(M3, "a") - _dirac(M3, "b"), LipFunction((0, 1, 0))) == 1
    assert pairing(M3, FreeVector(), d0) == 0


def test_transport_rejects_unbalanced():
    with pytest.raises(ValueError):
        solve_transport([1], [2], lambda i, j: 1)


def test_transport_against_brute_force_small():
    # two sources, two sinks where the greedy nearest match is not optimal
    dist = [[0, 1, 2, 10], [1, 0, 1, 9], [2, 1, 0, 8], [10, 9, 8, 0]]
    sol = solve_transport([1, 1], [1, 1], lambda i, j: dist[[0, 1][i]][[2, 3][j]])
    assert sol.cost == brute_force_transport(dist, [1, 1, -1, -1]) == 11


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6))
def test_lp_equals_brute_force_on_any_metric(seed, n):
    rng = random.Random(seed)
    M = random_metric(rng, n)
    a = _random_vector(rng, M)
    assert free_norm(M, a) == brute_force_transport(M.dist, a.masses(M))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7))
def test_flow_simplex_equals_transport(seed, n):
    rng = random.Random(seed)
    M = random_metric(rng, n)
    a = _random_vector(rng, M)
    assert free_norm_lp(M, a) == free_norm(M, a)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_lp_equals_tree_norm(seed, n):
    rng = random.Random(seed)
    M = nx_tree_metric(rng, n)
    T = realize(M)
    for _ in range(5):
        a = _random_vector(rng, M)
        assert free_norm(M, a) == free_norm_tree(T, a)
        assert sum(abs(c) for c in godard_embed(T, a)) == free_norm(M, a)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 9))
def test_dual_certificate(seed, n):
    rng = random.Random(seed)
    M = random_metric(rng, n)
    a = _random_vector(rng, M)
    res = transport_norm(M, a)
    assert lip_norm(M, res.dual) <= 1
    assert res.dual.values[M.base] == 0
    assert pairing(M, a, res.dual) == res.value
    assert sum(m * M.d(x, y) for x, y, m in res.plan) == res.value


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 8), st.fractions(min_value=-4, max_value=4, max_denominator=6))
def test_norm_axioms(seed, n, s):
    rng = random.Random(seed)
    M = random_metric(rng, n)
    a, b = _random_vector(rng, M), _random_vector(rng, M)
    assert free_norm(M, a * s) == abs(s) * free_norm(M, a)
    assert free_norm(M, a + b) <= free_norm(M, a) + free_norm(M, b)
    f = LipFunction(tuple(Fraction(rng.randint(-9, 9), 2) for _ in range(n))).rebased(M.base)
    assert abs(pairing(M, a, f)) <= free_norm(M, a) * lip_norm(M, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 8))
def test_molecules_have_norm_one(seed, n):
    M = random_metric(random.Random(seed), n)
    for x in M.points():
        for y in M.points():
            if x != y:
                assert free_norm(M, molecule(M, x, y)) == 1
