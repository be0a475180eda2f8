import itertools

import pytest
from hypothesis import given, strategies as st

from hurwitz.permgroup import (
    CycleType,
    Permutation,
    Transposition,
    compose,
    conjugate,
    cycle_type,
    is_n_cycle,
    product,
    transpositions,
)


def perms(n):
    return st.permutations(list(range(1, n + 1))).map(Permutation)


def naive_apply(seq, x):
    # seq[0] acts first
    for p in seq:
        x = p(x)
    return x


def test_parse_and_str_round_trip():
    p = Permutation.parse("(1 2 3)(4 5)")
    assert p.images == (2, 3, 1, 5, 4)
    assert Permutation.parse(str(p)) == p
    assert Permutation.parse("()", 3) == Permutation.identity(3)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Permutation.parse("(1 2")
    with pytest.raises(ValueError):
        Permutation.parse("(1 1)")


def test_compose_applies_right_factor_first():
    a = Permutation.parse("(1 2)", 3)
    b = Permutation.parse("(2 3)", 3)
    ab = compose(a, b)
    for x in (1, 2, 3):
        assert ab(x) == a(b(x))
    assert ab == Permutation.parse("(1 2 3)")
    assert a * b == ab


def test_product_order():
    # tau_2 tau_1 along the path 1-2-3 is a 3-cycle
    t1, t2 = Transposition(1, 2, 3), Transposition(2, 3, 3)
    p = product([t1, t2], 3)
    assert is_n_cycle(p)
    assert all(p(x) == naive_apply([t1, t2], x) for x in (1, 2, 3))


def test_triple_edge_product_is_transposition():
    t = Transposition(1, 2, 2)
    assert product([t, t, t], 2) == t


def test_transposition_basics():
    t = Transposition(3, 1, 4)
    assert t.pair == (1, 3)
    assert t * t == Permutation.identity(4)
    with pytest.raises(ValueError):
        Transposition(2, 2, 3)
    assert transpositions(4) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_cycle_type():
    assert cycle_type(Permutation.parse("(1 3)(2 5 4)", 6)) == CycleType([3, 2, 1])
    lam = CycleType.parse("2,1,1")
    assert (lam.n, lam.s) == (4, 3)
    assert CycleType.parse("1,2,1") == lam


def test_cycles_listing():
    p = Permutation.parse("(2 4)", 4)
    assert p.cycles() == [(2, 4)]
    assert sorted(p.cycles(include_fixed=True)) == [(1,), (2, 4), (3,)]


@given(perms(5), perms(5), perms(5))
def test_associativity(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(perms(6))
def test_inverse(p):
    assert compose(p, p.inverse()) == Permutation.identity(6)
    assert compose(p.inverse(), p) == Permutation.identity(6)


@given(perms(6), perms(6))
def test_conjugation_preserves_cycle_type(p, q):
    assert cycle_type(conjugate(p, q)) == cycle_type(p)


@given(st.lists(st.sampled_from(transpositions(5)), max_size=8))
def test_parity_of_transposition_products(pairs):
    p = product([Transposition(i, j, 5) for i, j in pairs], 5)
    lam = cycle_type(p)
    assert (lam.n - lam.s) % 2 == len(pairs) % 2


def test_cycle_type_counts_match_class_sizes():
    # class sizes n!/z_lambda summed over S_4
    counts = {}
    for images in itertools.permutations(range(1, 5)):
        lam = cycle_type(Permutation(images))
        counts[lam] = counts.get(lam, 0) + 1
    assert counts == {
        CycleType([1, 1, 1, 1]): 1,
        CycleType([2, 1, 1]): 6,
        CycleType([2, 2]): 3,
        CycleType([3, 1]): 8,
        CycleType([4]): 6,
    }
