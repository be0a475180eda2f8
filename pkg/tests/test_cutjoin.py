import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hurwitz.cutjoin import (
    PSeries,
    aut_partition,
    apply_L,
    build_H,
    genus_of,
    verify_cutjoin,
    w_derivative_sum,
)
from hurwitz.oracle import hurwitz_number_lambda, hurwitz_poly_lambda
from hurwitz.wring import monomial

def w12(k):
    return monomial({(1, 2): k})


def test_aut_partition():
    assert aut_partition([1, 1]) == 2
    assert aut_partition([2, 1, 1, 1]) == 6
    assert aut_partition([3]) == 1


def test_build_H_small_terms():
    H = build_H(2, 3)
    assert H.coefficient(w12(3), [2]) == Fraction(1, 12)
    assert H.coefficient(w12(2), [1, 1]) == Fraction(1, 4)
    assert H.coefficient((), [1]) == 1
    assert H.coefficient((), [1, 1]) == Fraction(1, 2)
    Ha = build_H(2, 3, normalization="aut")
    assert Ha.coefficient(w12(2), [1, 1]) == Fraction(1, 8)
    assert Ha.coefficient(w12(3), [2]) == Fraction(1, 12)


def test_build_H_bounds():
    H = build_H(3, 4)
    assert all(n <= 3 and m <= 4 for n, m in H.blocks())
    with pytest.raises(ValueError):
        PSeries({((), (2, 2)): 1}, n_max=3)
    with pytest.raises(ValueError):
        build_H(2, 3, normalization="z")


def test_round_trip_extraction():
    H = build_H(3, 4)
    for lam in ([3], [2, 1], [1, 1, 1]):
        s = len(lam)
        for m in range(5):
            g = genus_of(3, m, s)
            if g.denominator != 1:
                continue
            P = hurwitz_poly_lambda(lam, int(g))
            block = PSeries({k: c for k, c in H.terms.items() if k[1] == tuple(sorted(lam)) and sum(e for _, e in k[0]) == m})
            assert block.p_polynomial(lam, 3) * (6 * math.factorial(m)) == P


def test_at_beta_matches_classical_numbers():
    H = build_H(3, 4)
    for (m, lam), c in H.at_beta().items():
        n, s = sum(lam), len(lam)
        g = genus_of(n, m, s)
        assert g.denominator == 1
        assert c == hurwitz_number_lambda(lam, int(g)) / math.factorial(m)


def test_L_on_single_terms():
    assert apply_L(PSeries({((), (2,)): 1})) == PSeries({((), (1, 1)): 1})
    assert apply_L(PSeries({((), (1, 1)): 1})) == PSeries({((), (2,)): 1})
    assert len(apply_L(PSeries({((), (1,)): 1}))) == 0


def test_L_on_p3():
    # cut: 3 p1 p2 (ordered pairs (1,2), (2,1) each with 3/2)
    assert apply_L(PSeries({((), (3,)): 1})) == PSeries({((), (1, 2)): 3})


p_monos = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(lambda p: tuple(sorted(p)))


@given(st.dictionaries(p_monos, st.integers(-5, 5), max_size=5))
def test_L_conserves_weight(terms):
    S = PSeries({((), p): c for p, c in terms.items()})
    weights = {sum(p) for (_, p) in S.terms}
    for (_, p) in apply_L(S).terms:
        assert sum(p) in weights


def test_w_derivative():
    S = PSeries({(w12(3), (2,)): Fraction(1, 12)})
    assert w_derivative_sum(S) == PSeries({(w12(2), (2,)): Fraction(1, 4)})


@pytest.mark.parametrize("n_max,m_max", [(2, 3), (2, 4), (3, 4), (4, 5)])
def test_cutjoin_holds(n_max, m_max):
    rep = verify_cutjoin(n_max, m_max)
    assert rep.ok, rep.to_json()
    assert len(rep.blocks_checked) == n_max * m_max


def test_cutjoin_with_aut_normalization_fails():
    # dividing once more by |Aut lambda| double-counts the class symmetry
    rep = verify_cutjoin(2, 4, normalization="aut")
    assert not rep.ok
    (w, p), lhs, rhs = rep.mismatches[0]
    assert (w, p, lhs, rhs) == ((), (2,), Fraction(1, 2), Fraction(1, 4))


def test_report_json():
    data = verify_cutjoin(2, 3).to_json()
    assert data["check"] is True and data["first_mismatch"] is None
