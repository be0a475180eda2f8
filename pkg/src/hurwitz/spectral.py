"""Closed-form side: Bernoulli numbers, the weighted Laplacian A_n, tree
polynomials, the trace/log/exp construction of R_{g,n}, and the numeric
eigenvalue check.

    phi(t)     = sinh(t/2) / (t/2)
    r_{g,n}    = B_2g / ((2g)! 2g) * Tr A_n^(2g)          (g >= 1)
    R_{g,n}    = degree-2g part of exp(sum_g r_{g,n})
    P_{g,n}    = (n+2g-1)! T_n R_{g,n}
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .wring import WPolynomial, edge_var, monomial

# ---------------------------------------------------------------------------
# Bernoulli numbers and univariate series


@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, k + 1):
        # sum_{j=0}^{m} C(m+1, j) B_j = 0
        B.append(-sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return tuple(B)


def bernoulli(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > 1 and k % 2:
        return Fraction(0)
    return _bernoulli_table(k)[k]


class UniSeries:
    """Truncated power series with exact coefficients c_0 .. c_order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = [Fraction(c) for c in coeffs]
        if order is not None:
            coeffs = (coeffs + [Fraction(0)] * (order + 1))[: order + 1]
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "UniSeries") -> "UniSeries":
        N = min(self.order, other.order)
        return UniSeries([self[k] + other[k] for k in range(N + 1)])

    def __sub__(self, other: "UniSeries") -> "UniSeries":
        N = min(self.order, other.order)
        return UniSeries([self[k] - other[k] for k in range(N + 1)])

    def __mul__(self, other) -> "UniSeries":
        if not isinstance(other, UniSeries):
            return UniSeries([c * Fraction(other) for c in self.coeffs])
        N = min(self.order, other.order)
        return UniSeries([sum(self[i] * other[k - i] for i in range(k + 1)) for k in range(N + 1)])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniSeries":
        result = UniSeries([1], self.order)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, UniSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"UniSeries({[str(c) for c in self.coeffs]})"

    def scale(self, a) -> "UniSeries":
        """f(t) -> f(a t)."""
        a = Fraction(a)
        return UniSeries([c * a**k for k, c in enumerate(self.coeffs)])

    def derivative(self) -> "UniSeries":
        return UniSeries([k * self.coeffs[k] for k in range(1, len(self.coeffs))] or [0])

    def log(self) -> "UniSeries":
        """ln f for f(0) = 1, via f g' = f'."""
        if self[0] != 1:
            raise ValueError("log needs constant term 1")
        N = self.order
        df = self.derivative()
        dg = [Fraction(0)] * N
        for k in range(N):
            dg[k] = df[k] - sum(self[i] * dg[k - i] for i in range(1, k + 1))
        return UniSeries([0] + [dg[k] / (k + 1) for k in range(N)])

    def exp(self) -> "UniSeries":
        """exp f for f(0) = 0, via g' = f' g."""
        if self[0] != 0:
            raise ValueError("exp needs constant term 0")
        N = self.order
        g = [Fraction(1)] + [Fraction(0)] * N
        for k in range(1, N + 1):
            g[k] = sum(j * self[j] * g[k - j] for j in range(1, k + 1)) / k
        return UniSeries(g)


def phi_series(order: int) -> UniSeries:
    """sinh(t/2)/(t/2) = sum_p (t/2)^(2p) / (2p+1)!."""
    return UniSeries(
        [Fraction(1, 2**k * math.factorial(k + 1)) if k % 2 == 0 else 0 for k in range(order + 1)]
    )


def log_phi_series(order: int) -> UniSeries:
    """ln phi(t) = sum_{g>=1} B_2g / ((2g)! 2g) t^(2g)."""
    c = [Fraction(0)] * (order + 1)
    for k in range(2, order + 1, 2):
        c[k] = bernoulli(k) / (math.factorial(k) * k)
    return UniSeries(c)


# ---------------------------------------------------------------------------
# symbolic matrices


class SymbolicMatrix:
    """Square matrix of WPolynomial entries over a fixed C_n[w]."""

    def __init__(self, n: int, entries: Sequence[Sequence[WPolynomial]]):
        self.n = n
        self.entries = [list(row) for row in entries]
        self.size = len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        N = self.size
        rows = []
        for i in range(N):
            row = []
            for j in range(N):
                acc = WPolynomial.zero(self.n)
                for k in range(N):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return SymbolicMatrix(self.n, rows)

    def trace(self) -> WPolynomial:
        acc = WPolynomial.zero(self.n)
        for i in range(self.size):
            acc = acc + self.entries[i][i]
        return acc

    def is_symmetric(self) -> bool:
        return all(self.entries[i][j] == self.entries[j][i] for i in range(self.size) for j in range(i))

    def minor(self, drop_row: int, drop_col: int) -> "SymbolicMatrix":
        return SymbolicMatrix(
            self.n,
            [[x for j, x in enumerate(row) if j != drop_col] for i, row in enumerate(self.entries) if i != drop_row],
        )

    def det(self) -> WPolynomial:
        """Cofactor expansion along successive rows, memoized on the remaining column set."""
        N = self.size
        memo: dict[frozenset, WPolynomial] = {}

        def sub(cols: tuple[int, ...]) -> WPolynomial:
            r = N - len(cols)
            if not cols:
                return WPolynomial.constant(self.n)
            key = frozenset(cols)
            if key in memo:
                return memo[key]
            acc = WPolynomial.zero(self.n)
            for pos, c in enumerate(cols):
                a = self.entries[r][c]
                if not a:
                    continue
                term = a * sub(cols[:pos] + cols[pos + 1:])
                acc = acc + (term if pos % 2 == 0 else -term)
            memo[key] = acc
            return acc

        return sub(tuple(range(N)))

    def evaluate(self, values) -> list[list]:
        return [[x.evaluate(values) for x in row] for row in self.entries]


def laplacian(n: int) -> SymbolicMatrix:
    """A_n: diagonal sum_j w_ij, off-diagonal -w_ij."""
    if n < 1:
        raise ValueError("n must be positive")
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                row.append(sum((WPolynomial.var(i, k, n) for k in range(1, n + 1) if k != i), WPolynomial.zero(n)))
            else:
                row.append(-WPolynomial.var(i, j, n))
        rows.append(row)
    return SymbolicMatrix(n, rows)


# ---------------------------------------------------------------------------
# tree polynomials


def pruefer_decode(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree on 1..n with Pruefer sequence ``seq`` (length n-2)."""
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(v for v in range(1, n + 1) if degree[v] == 1)
        edges.append(edge_var(leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = (v for v in range(1, n + 1) if degree[v] == 1)
    edges.append(edge_var(u, w))
    return edges


def labeled_trees(n: int):
    """Yield the edge lists of all n**(n-2) labeled trees on 1..n."""
    if n == 1:
        yield []
        return
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        yield pruefer_decode(seq, n)


KIRCHHOFF_MAX_N = 6


def tree_poly(n: int, method: str = "auto") -> WPolynomial:
    """T_n(w), the sum of edge monomials over labeled trees on n vertices.

    ``kirchhoff`` takes the symbolic determinant of A_n without its first row
    and column; ``pruefer`` sums over decoded Pruefer sequences.  ``auto``
    picks kirchhoff up to n = 6.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if method == "auto":
        method = "kirchhoff" if n <= KIRCHHOFF_MAX_N else "pruefer"
    if method == "kirchhoff":
        if n == 1:
            return WPolynomial.constant(1)
        return laplacian(n).minor(0, 0).det()
    if method == "pruefer":
        terms: dict = {}
        for edges in labeled_trees(n):
            m = monomial((e, 1) for e in edges)
            terms[m] = terms.get(m, 0) + 1
        return WPolynomial(n, terms)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# traces, r and R


@lru_cache(maxsize=64)
def _laplacian_power(n: int, k: int) -> SymbolicMatrix:
    if k == 1:
        return laplacian(n)
    half = k // 2
    return _laplacian_power(n, half) @ _laplacian_power(n, k - half)


@lru_cache(maxsize=64)
def trace_power(n: int, k: int) -> WPolynomial:
    """Tr A_n^k."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return laplacian(n).trace()
    X = _laplacian_power(n, k // 2)
    Y = _laplacian_power(n, k - k // 2)
    acc = WPolynomial.zero(n)
    for i in range(n):
        for j in range(n):
            a, b = X[i, j], Y[j, i]
            if a and b:
                acc = acc + a * b
    return acc


def r_coefficient(g: int) -> Fraction:
    """B_2g / ((2g)! 2g)."""
    return bernoulli(2 * g) / (math.factorial(2 * g) * 2 * g)


@lru_cache(maxsize=64)
def r_part(g: int, n: int) -> WPolynomial:
    """Degree-2g part r_{g,n} of Tr ln phi(A_n); the series starts at g = 1."""
    if g < 1:
        raise ValueError("r_{g,n} is defined for g >= 1 (r_0 = 0)")
    return trace_power(n, 2 * g) * r_coefficient(g)


def _multisets(g: int, max_part: int | None = None):
    """Partitions of g as nonincreasing tuples."""
    if g == 0:
        yield ()
        return
    for first in range(min(g, max_part or g), 0, -1):
        for rest in _multisets(g - first, first):
            yield (first,) + rest


def R_terms(g: int, n: int) -> list[tuple[tuple[int, ...], Fraction, WPolynomial]]:
    """Summands of R_{g,n}: (partition of g, 1/prod mult!, prod r_{g_i,n})."""
    out = []
    for parts in _multisets(g):
        weight = Fraction(1, math.prod(math.factorial(parts.count(p)) for p in set(parts)))
        poly = WPolynomial.constant(n)
        for p in parts:
            poly = poly * r_part(p, n)
        out.append((parts, weight, poly))
    return out


@lru_cache(maxsize=64)
def R_part(g: int, n: int) -> WPolynomial:
    """Degree-2g part R_{g,n} of exp(sum_h r_{h,n}), summed over partitions of g."""
    if g < 0:
        raise ValueError("g must be nonnegative")
    acc = WPolynomial.zero(n)
    for _, weight, poly in R_terms(g, n):
        acc = acc + poly * weight
    return acc


def closed_form(n: int, g: int) -> WPolynomial:
    """(n+2g-1)! T_n R_{g,n}."""
    return tree_poly(n) * R_part(g, n) * math.factorial(n + 2 * g - 1)


@dataclass
class DivReport:
    n: int
    g: int
    ok: bool
    oracle: WPolynomial
    closed: WPolynomial
    diff: WPolynomial = field(repr=False)

    def summary(self) -> str:
        verdict = "equal" if self.ok else f"DIFFER in {len(self.diff)} monomials"
        return f"P_{{{self.g},{self.n}}}: oracle ({len(self.oracle)} monomials) vs closed form: {verdict}"


def verify_div(g: int, n: int, **oracle_kw) -> DivReport:
    """Compare the enumerated P_{g,n} with (n+2g-1)! T_n R_{g,n} exactly."""
    from .oracle import hurwitz_poly

    P = hurwitz_poly(n, g, **oracle_kw)
    Q = closed_form(n, g)
    diff = P - Q
    return DivReport(n, g, not diff, P, Q, diff)


def rho(g: int, n: int) -> Fraction:
    """Coefficient of w^(2g) in phi(n w)^(n-1)."""
    if g < 0 or n < 1:
        raise ValueError("need g >= 0 and n >= 1")
    series = phi_series(2 * g).scale(n) ** (n - 1)
    return series[2 * g]


def hurwitz_closed(g: int, n: int) -> Fraction:
    """h_{g,n} = (n+2g-1)!/n! * n^(n-2) * rho_{g,n}."""
    return Fraction(math.factorial(n + 2 * g - 1), math.factorial(n)) * Fraction(n) ** (n - 2) * rho(g, n)


# ---------------------------------------------------------------------------
# numeric eigenvalue check


class EigenWarning(UserWarning):
    pass


def jacobi_eigenvalues(M: Sequence[Sequence[float]], tol: float = 1e-12, max_sweeps: int = 100) -> list[float]:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = [[float(x) for x in row] for row in M]
    N = len(a)
    for i in range(N):
        for j in range(i):
            if abs(a[i][j] - a[j][i]) > 1e-12 * (1 + abs(a[i][j])):
                raise ValueError("matrix is not symmetric")
    scale = max((abs(x) for row in a for x in row), default=0.0) or 1.0
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i][j] ** 2 for i in range(N) for j in range(N) if i != j))
        if off <= tol * scale:
            break
        for p in range(N - 1):
            for q in range(p + 1, N):
                if a[p][q] == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2 * a[p][q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                for k in range(N):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(N):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return sorted(a[i][i] for i in range(N))


@dataclass
class SumSignReport:
    n: int
    g: int
    sigmas: list[float]
    value: float
    exact: Fraction
    rel_error: float
    sigma_product: float
    n_tree: Fraction
    kirchhoff_rel_error: float

    def ok(self, tol: float = 1e-8) -> bool:
        return self.rel_error < tol and self.kirchhoff_rel_error < tol


def sumsign_value(sigmas: Sequence[float], m: int) -> float:
    """(1/n) sum over signs of eps_1..eps_{n-1} (sum eps_i sigma_i / 2)^m, with n = len + 1."""
    total = 0.0
    for eps in itertools.product((1, -1), repeat=len(sigmas)):
        sign = math.prod(eps)
        total += sign * (sum(e * s for e, s in zip(eps, sigmas)) / 2) ** m
    return total / (len(sigmas) + 1)


def eval_sumsign(g: int, n: int, values, exact: WPolynomial | None = None, **oracle_kw) -> SumSignReport:
    """Evaluate P_{g,n} at ``values`` through the eigenvalues of A_n and compare.

    ``values`` maps (i, j) to positive numbers (or is a scalar / callable, as in
    :meth:`WPolynomial.evaluate`).  ``exact`` defaults to the oracle polynomial.
    """
    import warnings

    if n < 2:
        raise ValueError("n must be at least 2")
    if exact is None:
        from .oracle import hurwitz_poly

        exact = hurwitz_poly(n, g, **oracle_kw)
    A = laplacian(n).evaluate(values)
    eig = jacobi_eigenvalues(A)
    zero_idx = min(range(n), key=lambda k: abs(eig[k]))
    sigmas = [x for k, x in enumerate(eig) if k != zero_idx]
    spread = max(abs(x) for x in eig) or 1.0
    if any(abs(sigmas[i] - sigmas[j]) < 1e-9 * spread for i in range(len(sigmas)) for j in range(i)):
        warnings.warn("repeated eigenvalues of A_n", EigenWarning, stacklevel=2)
    value = sumsign_value(sigmas, n + 2 * g - 1)
    exact_value = Fraction(exact.evaluate(values))
    rel = abs(value - float(exact_value)) / max(abs(float(exact_value)), 1e-300)
    nT = n * Fraction(tree_poly(n).evaluate(values))
    sp = math.prod(sigmas)
    krel = abs(sp - float(nT)) / max(abs(float(nT)), 1e-300)
    return SumSignReport(n, g, sigmas, value, exact_value, rel, sp, nT, krel)


# ---------------------------------------------------------------------------
# graph expansions of r_g and R_g


def collected_r(g: int, n: int):
    from .wring import collect

    return collect(r_part(g, n))


def collected_R(g: int, n: int):
    from .wring import collect

    return collect(R_part(g, n))


@dataclass
class PositivityReport:
    g_max: int
    n_max: int
    checked: int
    negatives: list = field(default_factory=list)  # (g, n, GraphClass, coefficient)

    @property
    def ok(self) -> bool:
        return not self.negatives


def positivity_scan(g_max: int, n_max: int) -> PositivityReport:
    """Look for non-positive graph coefficients of R_g, 1 <= g <= g_max, n <= n_max."""
    report = PositivityReport(g_max, n_max, 0)
    for g in range(1, g_max + 1):
        for n in range(2, n_max + 1):
            for G, c in collected_R(g, n).items():
                report.checked += 1
                if c <= 0:
                    report.negatives.append((g, n, G, c))
    return report


def union_violations(g: int, n: int) -> list[str]:
    """Disconnected graphs whose r_g coefficient is nonzero, or whose R_g
    coefficient is not the product of the R-coefficients of its components."""
    from .wring import disjoint_union

    problems = []
    r = collected_r(g, n)
    for G, c in r.items():
        if not G.is_connected():
            problems.append(f"r_{g}: disconnected {G} has coefficient {c}")

    lower = {h: collected_R(h, n) for h in range(1, g + 1)}

    def component_coeff(C):
        if C.n_edges % 2:
            return Fraction(0)
        return lower[C.n_edges // 2][C]

    R = lower[g]
    for G, c in R.items():
        comps = G.components()
        if len(comps) > 1:
            expected = math.prod((component_coeff(C) for C in comps), start=Fraction(1))
            if expected != c:
                problems.append(f"R_{g}: {G} has {c}, components give {expected}")

    # unions of connected pieces absent from the support must vanish
    connected = [(h, C, cc) for h in lower for C, cc in lower[h].items() if C.is_connected()]

    def unions(remaining, start, picked):
        if remaining == 0:
            if len(picked) > 1:
                yield picked
            return
        for idx in range(start, len(connected)):
            h, C, _ = connected[idx]
            if h <= remaining:
                yield from unions(remaining - h, idx, picked + [idx])

    for picked in unions(g, 0, []):
        graphs = [connected[i][1] for i in picked]
        if sum(G.v for G in graphs) > n:
            continue
        U = disjoint_union(*graphs)
        expected = math.prod((connected[i][2] for i in picked), start=Fraction(1))
        if R[U] != expected:
            problems.append(f"R_{g}: union {U} has {R[U]}, components give {expected}")
    return problems


SIGN_RULES = ("literal", "simple")


def predicted_sign(G, g: int, rule: str = "literal") -> int:
    """Sign of the r_g coefficient of G predicted from its cycle edges.

    ``literal``: (-1)^b with b the number of multigraph edges lying on a cycle.
    ``simple``: sign(B_2g) * (-1)^b' with b' counted after merging parallel edges.
    """
    from .wring import cycle_edge_count

    if rule == "literal":
        return (-1) ** cycle_edge_count(G)
    if rule == "simple":
        s = 1 if bernoulli(2 * g) > 0 else -1
        return s * (-1) ** cycle_edge_count(G, simple=True)
    raise ValueError(f"rule must be one of {SIGN_RULES}")


def sign_violations(g: int, n: int, rule: str = "literal") -> list[tuple]:
    """Graphs of collected r_g on n vertices whose coefficient sign disagrees with the rule."""
    return [(G, c) for G, c in sorted(collected_r(g, n).items())
            if (1 if c > 0 else -1) != predicted_sign(G, g, rule)]
