"""Brute-force Hurwitz polynomials.

Every ordered tuple (tau_1, ..., tau_m) of transpositions of S_n is visited;
the right-to-left product tau_m ... tau_1 is classified by cycle type at the
leaf and the monomial w(tau_1) ... w(tau_m) is added to the matching bucket.
Nothing is pruned, so the count of leaves is exactly C(n, 2)**m.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .permgroup import CycleType, cycle_type_of_images, transpositions
from .wring import Monomial, WPolynomial

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int, what: str = "enumeration"):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{what} needs {estimate} leaf visits, budget is {budget}")


@dataclass(frozen=True)
class FactorizationTask:
    n: int
    target: Union[str, CycleType]  # "n-cycle" or a cycle type
    m: int

    @classmethod
    def for_cycle(cls, n: int, g: int) -> "FactorizationTask":
        return cls(n, "n-cycle", n + 2 * g - 1)

    @classmethod
    def for_type(cls, lam: CycleType, g: int) -> "FactorizationTask":
        lam = CycleType(lam)
        return cls(lam.n, lam, lam.n + 2 * g - 2 + lam.s)

    @property
    def cycle_type(self) -> CycleType:
        return CycleType([self.n]) if self.target == "n-cycle" else self.target

    @property
    def parity_ok(self) -> bool:
        return self.m >= 0 and (self.m - (self.n - self.cycle_type.s)) % 2 == 0

    @property
    def leaves(self) -> int:
        return math.comb(self.n, 2) ** self.m


def leaf_count(n: int, m: int) -> int:
    return math.comb(n, 2) ** m


def _enumerate(n: int, m: int, prefix: tuple[int, ...] = ()) -> dict[CycleType, dict[tuple, int]]:
    """Exponent-vector counts of all m-tuples, bucketed by cycle type of the product.

    The tuple is chosen from its last factor inwards so that extending the
    product is a right multiplication, i.e. a swap of two image positions.
    ``prefix`` fixes the first chosen indices (used to split work).
    """
    pairs = transpositions(n)
    k = len(pairs)
    images = list(range(1, n + 1))
    counts = [0] * k
    buckets: dict[CycleType, dict[tuple, int]] = {}

    def apply(t):
        i, j = pairs[t]
        images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
        counts[t] += 1

    def undo(t):
        i, j = pairs[t]
        images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
        counts[t] -= 1

    def leaf():
        ct = cycle_type_of_images(images)
        bucket = buckets.setdefault(ct, {})
        key = tuple(counts)
        bucket[key] = bucket.get(key, 0) + 1

    def dfs(depth):
        if depth == m:
            leaf()
            return
        for t in range(k):
            apply(t)
            dfs(depth + 1)
            undo(t)

    for t in prefix:
        apply(t)
    dfs(len(prefix))
    return buckets


def _merge(into: dict, part: dict) -> None:
    for ct, bucket in part.items():
        dst = into.setdefault(ct, {})
        for key, c in bucket.items():
            dst[key] = dst.get(key, 0) + c


def _to_poly(n: int, bucket: dict[tuple, int]) -> WPolynomial:
    pairs = transpositions(n)
    terms: dict[Monomial, Fraction] = {}
    for key, c in bucket.items():
        m = tuple((pairs[t], e) for t, e in enumerate(key) if e)
        terms[m] = Fraction(c)
    return WPolynomial(n, terms)


def polys_by_cycle_type(n: int, m: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> dict[CycleType, WPolynomial]:
    """Sum of w(tau_1)...w(tau_m) over all m-tuples, grouped by the product's cycle type."""
    if n < 1 or m < 0:
        raise ValueError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    k = math.comb(n, 2)
    leaves = k**m
    if leaves > budget:
        raise BudgetExceeded(leaves, budget)
    if k == 0:
        # S_1: only the empty tuple exists
        return {CycleType([1]): WPolynomial.constant(n)} if m == 0 else {}
    if workers > 1 and m >= 1:
        buckets: dict = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_enumerate, [n] * k, [m] * k, [(t,) for t in range(k)]):
                _merge(buckets, part)
    else:
        buckets = _enumerate(n, m)
    log.debug("enumerated %d tuples for n=%d, m=%d", leaves, n, m)
    return {ct: _to_poly(n, b) for ct, b in sorted(buckets.items())}


class PolyCache:
    """On-disk memo of oracle polynomials keyed by (n, m) as JSON files."""

    def __init__(self, directory: Union[str, os.PathLike]):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def _path(self, n: int, m: int) -> Path:
        return self.dir / f"oracle_n{n}_m{m}.json"

    def get(self, n: int, m: int):
        p = self._path(n, m)
        if not p.exists():
            return None
        data = json.loads(p.read_text())
        return {CycleType.parse(k): WPolynomial.from_json(v) for k, v in data.items()}

    def put(self, n: int, m: int, polys: dict[CycleType, WPolynomial]) -> None:
        data = {",".join(map(str, ct)): P.to_json() for ct, P in polys.items()}
        self._path(n, m).write_text(json.dumps(data))


def _polys(n, m, budget, workers, cache):
    if cache is not None:
        hit = cache.get(n, m)
        if hit is not None:
            return hit
    polys = polys_by_cycle_type(n, m, budget=budget, workers=workers)
    if cache is not None:
        cache.put(n, m, polys)
    return polys


def hurwitz_poly_lambda(lam, g: int, budget: int = DEFAULT_BUDGET, workers: int = 1,
                        cache: PolyCache | None = None) -> WPolynomial:
    """P_{g,lambda}: tuples of n+2g-2+s transpositions whose product has cycle type lambda.

    Any integer ``g`` is accepted as long as the tuple length is nonnegative;
    covers need not be connected.
    """
    task = FactorizationTask.for_type(lam, g)
    if task.m < 0:
        raise ValueError(f"g={g} gives a negative number of transpositions for {tuple(task.target)}")
    if not task.parity_ok:
        return WPolynomial.zero(task.n)
    if task.leaves > budget:
        raise BudgetExceeded(task.leaves, budget)
    polys = _polys(task.n, task.m, budget, workers, cache)
    return polys.get(task.cycle_type, WPolynomial.zero(task.n))


def hurwitz_poly(n: int, g: int, budget: int = DEFAULT_BUDGET, workers: int = 1,
                 cache: PolyCache | None = None) -> WPolynomial:
    """P_{g,n}: the sum over genus g factorizations of an n-cycle."""
    if n < 1:
        raise ValueError("n must be positive")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return hurwitz_poly_lambda(CycleType([n]), g, budget=budget, workers=workers, cache=cache)


def hurwitz_number(n: int, g: int, **kw) -> Fraction:
    return Fraction(hurwitz_poly(n, g, **kw).evaluate(1)) / math.factorial(n)


def hurwitz_number_lambda(lam, g: int, **kw) -> Fraction:
    lam = CycleType(lam)
    return Fraction(hurwitz_poly_lambda(lam, g, **kw).evaluate(1)) / math.factorial(lam.n)
