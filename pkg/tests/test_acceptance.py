"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
under output capture) or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
from fractions import Fraction

import pytest

from hurwitz.oracle import hurwitz_number, hurwitz_poly
from hurwitz.spectral import (
    R_part,
    bernoulli,
    closed_form,
    collected_R,
    collected_r,
    eval_sumsign,
    hurwitz_closed,
    positivity_scan,
    tree_poly,
    union_violations,
)
from hurwitz.surfaces import MultiGraph, connected_multigraphs, faces_vs_cycles, verify_spiders
from hurwitz.wring import project, spider
from hurwitz.cutjoin import verify_cutjoin

DIV_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (5, 1)]  # (n, g)

_oracle = {}


def P(n, g):
    if (n, g) not in _oracle:
        _oracle[(n, g)] = hurwitz_poly(n, g)
    return _oracle[(n, g)]


_emit = print


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    """Print the criterion lines past pytest's output capture."""
    global _emit

    def show(line):
        with capsys.disabled():
            print("\n" + line)

    _emit = show
    yield
    _emit = print


def report(k, ok, detail):
    _emit(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
    assert ok, detail


def test_criterion_01_divisibility():
    bad = [(n, g) for n, g in DIV_CASES if P(n, g) != closed_form(n, g)]
    report(1, not bad, f"P_(g,n) = (n+2g-1)! T_n R_(g,n) for (n,g) in {DIV_CASES}" + (f"; differs at {bad}" if bad else ""))


def test_criterion_02_genus_zero():
    bad = [n for n in range(1, 6) if P(n, 0) != math.factorial(n - 1) * tree_poly(n)]
    counts = [int(tree_poly(n).evaluate(1)) for n in range(1, 8)]
    ok_counts = counts == [n ** max(n - 2, 0) for n in range(1, 8)]
    report(2, not bad and ok_counts, f"P_(0,n) = (n-1)! T_n for n <= 5; T_n(1) = {counts} for n <= 7")


def test_criterion_03_hurwitz_numbers():
    bad = [(n, g) for n, g in DIV_CASES if hurwitz_closed(g, n) != hurwitz_number(n, g)]
    h13 = hurwitz_closed(1, 3)
    h2 = [hurwitz_closed(g, 2) for g in range(4)]
    ok = not bad and h13 == 9 and all(h == Fraction(1, 2) for h in h2)
    report(3, ok, f"closed h_(g,n) = enumerated h_(g,n) on the criterion-1 set; h_(1,3) = {h13}; h_(g,2) = {[str(h) for h in h2]}")


def test_criterion_04_spider_coefficients():
    got = []
    ok = True
    for g in (1, 2):
        X = spider(2 * g)
        C = collected_R(g, 2 * g + 1)[X]
        c = collected_r(g, 2 * g + 1)[X]
        ok &= C == Fraction(1, 2 ** (2 * g) * (2 * g + 1)) and c == bernoulli(2 * g) / (2 * g)
        got.append(f"g={g}: R {C}, r {c}")
    report(4, ok, "X_2g coefficients " + "; ".join(got))


def test_criterion_05_unions():
    problems = [p for g in (1, 2) for n in range(2, 6) for p in union_violations(g, n)]
    report(5, not problems, "disconnected graphs: 0 in r_g, multiplicative in R_g (g <= 2, n <= 5)"
           + (f"; {problems[:3]}" if problems else ""))


def test_criterion_06_projection():
    bad = [(g, n) for g in (1, 2) for n in range(3, 6) if project(R_part(g, n)) != R_part(g, n - 1)]
    report(6, not bad, "project(R_(g,n)) = R_(g,n-1) for g <= 2, 2 <= n <= 5" + (f"; fails at {bad}" if bad else ""))


def test_criterion_07_spiders():
    reports = []
    for G in connected_multigraphs(5, loops=True, min_edges=1):
        if G.betti() in (2, 4):
            reports.append(verify_spiders(G))
    bad = [r.summary() for r in reports if not r.check]
    theta = verify_spiders(MultiGraph.parse("1-2;1-2;1-2"))
    bq1 = verify_spiders(MultiGraph.parse("1-1;1-1"))
    bq2 = verify_spiders(MultiGraph.parse("1-1;1-1;1-1;1-1"))
    named = (theta.n_decorations == 6 and theta.decoration_sum == Fraction(1, 2)
             and (theta.one_faced, theta.emb) == (2, 4)
             and (bq1.one_faced, bq1.emb) == (2, 6)
             and (bq2.one_faced, bq2.emb) == (1008, 5040))
    report(7, not bad and named, f"{len(reports) - len(bad)}/{len(reports)} graphs with <= 5 edges, b1 in {{2,4}}; "
           f"{theta.summary()}; bouquets {bq1.one_faced}/{bq1.emb}, {bq2.one_faced}/{bq2.emb}")


def test_criterion_08_faces_cycles():
    graphs = numberings = 0
    bad = []
    for G in connected_multigraphs(6, loops=False, min_edges=1):
        graphs += 1
        for num in itertools.permutations(range(1, G.n_edges + 1)):
            numberings += 1
            rep = faces_vs_cycles(G, num)
            if not rep.ok:
                bad.append((str(G), num, rep.problems[:1]))
    report(8, not bad, f"faces <-> cycles on {graphs} graphs, {numberings} numberings" + (f"; {bad[:2]}" if bad else ""))


def test_criterion_09_cutjoin():
    main = verify_cutjoin(3, 4)
    stretch = verify_cutjoin(4, 5)
    report(9, main.ok and stretch.ok,
           f"cut-and-join exact on (n_max, m_max) = (3, 4) [{main.lhs_terms} terms] "
           f"and (4, 5) [{stretch.lhs_terms} terms]")


def test_criterion_10_eigenvalues():
    rng = random.Random(20240601)
    worst = worst_k = 0.0
    samples = 0
    for n, g in [(3, 1), (4, 1)]:
        exact = P(n, g)
        for _ in range(100):
            vals = {(i, j): Fraction(rng.randint(1, 100), rng.randint(1, 100))
                    for i in range(1, n + 1) for j in range(i + 1, n + 1)}
            rep = eval_sumsign(g, n, vals, exact=exact)
            worst = max(worst, rep.rel_error)
            worst_k = max(worst_k, rep.kirchhoff_rel_error)
            samples += 1
    report(10, worst < 1e-8 and worst_k < 1e-8,
           f"{samples} random points: max rel. error {worst:.2e} (formula), {worst_k:.2e} (sigma product vs n T_n)")


def test_criterion_11_positivity():
    rep = positivity_scan(2, 5)
    detail = f"{rep.checked} coefficients of R_g (g <= 2, n <= 5)"
    if rep.ok:
        detail += ": all positive"
    else:
        detail += f": counterexamples {[(g, n, str(G), str(c)) for g, n, G, c in rep.negatives]}"
    report(11, rep.ok, detail)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
