import itertools
import math
from fractions import Fraction

import pytest

from hurwitz.oracle import (
    BudgetExceeded,
    FactorizationTask,
    PolyCache,
    hurwitz_number,
    hurwitz_number_lambda,
    hurwitz_poly,
    hurwitz_poly_lambda,
    polys_by_cycle_type,
)
from hurwitz.permgroup import CycleType, Transposition, cycle_type, product, transpositions
from hurwitz.spectral import tree_poly
from hurwitz.wring import WPolynomial, monomial


def naive_polys(n, m):
    """Straight itertools.product over tuples, products built from Permutation objects."""
    out = {}
    for tup in itertools.product(transpositions(n), repeat=m):
        lam = cycle_type(product([Transposition(i, j, n) for i, j in tup], n))
        mono = monomial({e: tup.count(e) for e in set(tup)})
        bucket = out.setdefault(lam, {})
        bucket[mono] = bucket.get(mono, 0) + 1
    return {lam: WPolynomial(n, b) for lam, b in out.items()}


@pytest.mark.parametrize("n,m", [(2, 0), (2, 3), (3, 2), (3, 4), (4, 3)])
def test_enumeration_matches_naive_product(n, m):
    assert polys_by_cycle_type(n, m) == naive_polys(n, m)


def test_p12_is_w_cubed():
    assert hurwitz_poly(2, 1) == WPolynomial.var(1, 2, 2) ** 3


def test_p03_is_twice_tree_poly():
    assert hurwitz_poly(3, 0) == 2 * tree_poly(3)


def test_h13():
    assert hurwitz_number(3, 1) == 9


@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_h_g2_is_one_half(g):
    assert hurwitz_number(2, g) == Fraction(1, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_minimal_factorizations_count(n):
    # each of the (n-1)! n-cycles has n^(n-2) minimal transposition factorizations
    assert hurwitz_poly(n, 0).evaluate(1) == math.factorial(n - 1) * n ** (n - 2)


def test_parity_zero():
    # an even number of transpositions cannot give a transposition in S_3
    assert hurwitz_poly_lambda(CycleType([2, 1]), 0).evaluate(1) == 27
    assert FactorizationTask(3, CycleType([2, 1]), 2).parity_ok is False
    assert polys_by_cycle_type(3, 2).get(CycleType([2, 1])) is None


def test_lambda_identity_class():
    # n=2, lambda=(1,1), g=0: two transpositions with trivial product
    assert hurwitz_number_lambda([1, 1], 0) == Fraction(1, 2)
    with pytest.raises(ValueError):
        hurwitz_poly_lambda([1, 1], -2)


def test_disconnected_genus_allowed():
    # lambda=(1,1,1): g=-2 is the empty product, g=-1 has m=2 (t t for each t)
    assert hurwitz_poly_lambda([1, 1, 1], -2) == 1
    P = hurwitz_poly_lambda([1, 1, 1], -1)
    assert P == sum((WPolynomial.var(i, j, 3) ** 2 for i, j in transpositions(3)), WPolynomial.zero(3))


def test_trivial_group():
    assert hurwitz_poly(1, 0) == 1
    assert polys_by_cycle_type(1, 2) == {}


def test_task_shapes():
    t = FactorizationTask.for_cycle(4, 1)
    assert (t.m, t.leaves) == (5, 6 ** 5)
    assert FactorizationTask.for_type(CycleType([2, 2]), 0).m == 4


def test_budget_refusal():
    with pytest.raises(BudgetExceeded) as info:
        hurwitz_poly(9, 3)
    assert info.value.estimate == 36 ** 14
    with pytest.raises(BudgetExceeded):
        hurwitz_poly(3, 1, budget=80)


def test_workers_do_not_change_the_result():
    assert polys_by_cycle_type(4, 3, workers=2) == polys_by_cycle_type(4, 3)


def test_cache_round_trip(tmp_path):
    cache = PolyCache(tmp_path)
    P = hurwitz_poly(3, 1, cache=cache)
    assert (tmp_path / "oracle_n3_m4.json").exists()
    assert hurwitz_poly(3, 1, cache=cache) == P
    assert cache.get(3, 4)[CycleType([3])] == P


def test_invariance_under_relabeling():
    P = hurwitz_poly(4, 0)
    for perm in itertools.permutations(range(1, 5)):
        assert P.relabel(perm) == P


def test_degree_and_total_count():
    P = hurwitz_poly(3, 1)
    assert P.is_homogeneous(4)
    total = sum(p.evaluate(1) for p in polys_by_cycle_type(3, 4).values())
    assert total == math.comb(3, 2) ** 4
