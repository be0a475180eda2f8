"""Truncated Hurwitz w-generating function and the cut-and-join equation.

    H(w; p) = sum_{g, lambda} 1/m! * P_{g,lambda}(w)/n! * p_lambda,
    m = n + 2g - 2 + s,

truncated to p-weight n <= n_max and w-degree m <= m_max.  A term is keyed
by (w-monomial, sorted tuple of p-indices).  The equation checked is

    sum_{i<j} dH/dw_ij = L H,
    L = 1/2 sum_{k,l>=1} ((k+l) p_k p_l d/dp_{k+l} + k l p_{k+l} d^2/dp_k dp_l).

P_{g,lambda} already sums over the whole conjugacy class, so the coefficient
of p_lambda must not be divided again by |Aut lambda|: with that extra factor
the two sides disagree as soon as L maps between partitions with different
automorphism counts (e.g. p_1^2 -> p_2).  ``normalization="aut"`` builds that
variant anyway, for comparison.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .oracle import DEFAULT_BUDGET, polys_by_cycle_type
from .wring import Monomial, WPolynomial, mono_degree, mono_str

PMono = tuple[int, ...]
Key = tuple[Monomial, PMono]


def aut_partition(lam: Iterable[int]) -> int:
    """Number of permutations of the parts fixing the partition."""
    return math.prod(math.factorial(c) for c in Counter(lam).values())


def p_weight(p: PMono) -> int:
    return sum(p)


class PSeries:
    """Finite sum of coef * w^a * p_{k1} ... p_{ks} with exact coefficients."""

    __slots__ = ("terms", "n_max", "m_max")

    def __init__(self, terms: dict[Key, Fraction] | None = None, n_max: int | None = None, m_max: int | None = None):
        self.n_max = n_max
        self.m_max = m_max
        self.terms: dict[Key, Fraction] = {}
        for (w, p), c in (terms or {}).items():
            if c:
                key = (w, tuple(sorted(p)))
                self.terms[key] = self.terms.get(key, 0) + Fraction(c)
        self.terms = {k: c for k, c in self.terms.items() if c}
        for (w, p) in self.terms:
            if n_max is not None and p_weight(p) > n_max:
                raise ValueError(f"term p{p} exceeds p-weight bound {n_max}")
            if m_max is not None and mono_degree(w) > m_max:
                raise ValueError(f"term of w-degree {mono_degree(w)} exceeds bound {m_max}")

    def __eq__(self, other):
        return isinstance(other, PSeries) and self.terms == other.terms

    def __sub__(self, other: "PSeries") -> "PSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) - c
        return PSeries(out)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, w: Monomial, p: Iterable[int]) -> Fraction:
        return self.terms.get((w, tuple(sorted(p))), Fraction(0))

    def block(self, n: int, m: int) -> "PSeries":
        """Terms with p-weight n and w-degree m."""
        return PSeries({(w, p): c for (w, p), c in self.terms.items() if p_weight(p) == n and mono_degree(w) == m})

    def blocks(self) -> set[tuple[int, int]]:
        return {(p_weight(p), mono_degree(w)) for (w, p) in self.terms}

    def truncate(self, n_max: int | None = None, m_max: int | None = None) -> "PSeries":
        return PSeries(
            {
                (w, p): c
                for (w, p), c in self.terms.items()
                if (n_max is None or p_weight(p) <= n_max) and (m_max is None or mono_degree(w) <= m_max)
            },
            n_max,
            m_max,
        )

    def p_polynomial(self, lam: Iterable[int], n: int) -> WPolynomial:
        """The w-polynomial multiplying p_lambda, viewed in C_n[w]."""
        lam = tuple(sorted(lam))
        return WPolynomial(n, {w: c for (w, p), c in self.terms.items() if p == lam})

    def at_beta(self) -> dict[tuple[int, PMono], Fraction]:
        """Set every w_ij = beta: coefficient of beta^m p_lambda, keyed by (m, lambda)."""
        out: dict[tuple[int, PMono], Fraction] = {}
        for (w, p), c in self.terms.items():
            key = (mono_degree(w), p)
            out[key] = out.get(key, 0) + c
        return {k: c for k, c in out.items() if c}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, p), c in sorted(self.terms.items(), key=lambda t: (p_weight(t[0][1]), mono_degree(t[0][0]), t[0])):
            ps = "*".join(f"p{k}" for k in p)
            parts.append(f"({c})*{mono_str(w)}*{ps}")
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [
            {"w": [[i, j, k] for (i, j), k in w], "p": list(p), "coeff": str(c)}
            for (w, p), c in sorted(self.terms.items())
        ]


NORMALIZATIONS = ("class", "aut")


def build_H(n_max: int, m_max: int, budget: int = DEFAULT_BUDGET, workers: int = 1,
            normalization: str = "class") -> PSeries:
    """Exact truncation of H from brute-force P_{g,lambda} for |lambda| <= n_max, m <= m_max.

    ``normalization="class"`` gives p_lambda the coefficient P_{g,lambda}/(m! n!);
    ``"aut"`` divides further by |Aut lambda|.
    """
    if n_max < 1 or m_max < 0:
        raise ValueError("need n_max >= 1 and m_max >= 0")
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    terms: dict[Key, Fraction] = {}
    for n in range(1, n_max + 1):
        for m in range(0, m_max + 1):
            for lam, P in polys_by_cycle_type(n, m, budget=budget, workers=workers).items():
                aut = aut_partition(lam) if normalization == "aut" else 1
                scale = Fraction(1, math.factorial(m) * math.factorial(n) * aut)
                for w, c in P.terms.items():
                    terms[(w, tuple(lam))] = c * scale
    return PSeries(terms, n_max, m_max)


def genus_of(n: int, m: int, s: int) -> Fraction:
    """g from m = n + 2g - 2 + s (may be negative for disconnected covers)."""
    return Fraction(m - n - s + 2, 2)


def apply_L(S: PSeries) -> PSeries:
    """Apply the cut-and-join operator termwise."""
    out: dict[Key, Fraction] = {}

    def add(w, p, c):
        key = (w, tuple(sorted(p)))
        out[key] = out.get(key, 0) + c

    for (w, p), c in S.terms.items():
        cnt = Counter(p)
        # cut: (k+l) p_k p_l d/dp_{k+l}, ordered pairs (k, l)
        for j, cj in cnt.items():
            rest = list(p)
            rest.remove(j)
            for k in range(1, j):
                add(w, rest + [k, j - k], c * Fraction(j * cj, 2))
        # join: k l p_{k+l} d^2/dp_k dp_l, ordered pairs (k, l)
        for k in cnt:
            for l in cnt:
                if k == l:
                    mult = cnt[k] * (cnt[k] - 1)
                else:
                    mult = cnt[k] * cnt[l]
                if not mult:
                    continue
                rest = list(p)
                rest.remove(k)
                rest.remove(l)
                add(w, rest + [k + l], c * Fraction(k * l * mult, 2))
    return PSeries(out, S.n_max, S.m_max)


def w_derivative_sum(S: PSeries) -> PSeries:
    """sum_{i<j} d/dw_ij applied termwise."""
    out: dict[Key, Fraction] = {}
    for (w, p), c in S.terms.items():
        for t, (e, k) in enumerate(w):
            lowered = w[:t] + (((e, k - 1),) if k > 1 else ()) + w[t + 1:]
            key = (lowered, p)
            out[key] = out.get(key, 0) + c * k
    return PSeries(out, S.n_max, S.m_max)


@dataclass
class CutJoinReport:
    n_max: int
    m_max: int
    ok: bool
    normalization: str
    blocks_checked: list[tuple[int, int]]
    lhs_terms: int
    rhs_terms: int
    mismatches: list[tuple[Key, Fraction, Fraction]] = field(default_factory=list)

    def to_json(self) -> dict:
        first = None
        if self.mismatches:
            (w, p), a, b = self.mismatches[0]
            first = {"w": mono_str(w), "p": list(p), "lhs": str(a), "rhs": str(b)}
        return {
            "n_max": self.n_max,
            "m_max": self.m_max,
            "normalization": self.normalization,
            "check": self.ok,
            "blocks": [list(b) for b in self.blocks_checked],
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "first_mismatch": first,
        }


def verify_cutjoin(n_max: int, m_max: int, budget: int = DEFAULT_BUDGET, workers: int = 1,
                   H: PSeries | None = None, normalization: str = "class") -> CutJoinReport:
    """Compare both sides of the cut-and-join equation block by block.

    The left side lowers the w-degree by one, so blocks are compared for
    w-degree m <= m_max - 1.
    """
    if H is None:
        H = build_H(n_max, m_max, budget=budget, workers=workers, normalization=normalization)
    lhs = w_derivative_sum(H).truncate(n_max, m_max - 1)
    rhs = apply_L(H).truncate(n_max, m_max - 1)
    blocks = [(n, m) for n in range(1, n_max + 1) for m in range(0, m_max)]
    mismatches = []
    for n, m in blocks:
        a, b = lhs.block(n, m), rhs.block(n, m)
        for key in sorted(set(a.terms) | set(b.terms)):
            ca, cb = a.terms.get(key, Fraction(0)), b.terms.get(key, Fraction(0))
            if ca != cb:
                mismatches.append((key, ca, cb))
    return CutJoinReport(n_max, m_max, not mismatches, normalization, blocks, len(lhs), len(rhs), mismatches)
