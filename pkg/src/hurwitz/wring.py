"""Polynomials in edge variables w_ij = w_ji and unlabeled graph classes.

A monomial is a sorted tuple of ``((i, j), exponent)`` with ``i < j``.  A
loopless multigraph class ``G`` stands for the family of polynomials

    G_n(w) = (1/|Aut G|) * sum over injective labelings of prod_e w_e,

and ``GraphSeries`` (rational combinations of classes) model the algebra of
such families.  ``collect`` is the inverse of ``expand`` on symmetric input.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

Edge = tuple[int, int]
Monomial = tuple[tuple[Edge, int], ...]

ONE: Monomial = ()


def edge_var(i: int, j: int) -> Edge:
    if i == j:
        raise ValueError(f"no variable w_{i}{i}")
    return (i, j) if i < j else (j, i)


def monomial(factors: Union[Mapping[Edge, int], Iterable[tuple[Edge, int]]]) -> Monomial:
    """Build a canonical monomial from (edge, exponent) pairs; repeated edges add up."""
    acc: dict[Edge, int] = {}
    items = factors.items() if isinstance(factors, Mapping) else factors
    for e, k in items:
        if k < 0:
            raise ValueError("negative exponent")
        if k:
            e = edge_var(*e)
            acc[e] = acc.get(e, 0) + k
    return tuple(sorted(acc.items()))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for e, k in b:
        acc[e] = acc.get(e, 0) + k
    return tuple(sorted(acc.items()))


def mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


def mono_vertices(m: Monomial) -> set[int]:
    return {x for (e, _) in m for x in e}


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(f"w{i},{j}" + (f"^{k}" if k > 1 else "") for (i, j), k in m)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class WPolynomial:
    """Exact-rational polynomial in the variables w_ij, 1 <= i < j <= n."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        self.n = n
        self.terms: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                for (i, j), _ in m:
                    if not 1 <= i < j <= n:
                        raise ValueError(f"w{i},{j} is not a variable of C_{n}[w]")
                self.terms[m] = self.terms.get(m, Fraction(0)) + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def _raw(cls, n: int, terms: dict[Monomial, Fraction]) -> "WPolynomial":
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    @classmethod
    def constant(cls, n: int, c=1) -> "WPolynomial":
        return cls(n, {ONE: c})

    @classmethod
    def var(cls, i: int, j: int, n: int) -> "WPolynomial":
        return cls(n, {((edge_var(i, j), 1),): 1})

    @classmethod
    def zero(cls, n: int) -> "WPolynomial":
        return cls._raw(n, {})

    def _coerce(self, other) -> "WPolynomial":
        if isinstance(other, WPolynomial):
            if other.n != self.n:
                raise ValueError(f"ambient size mismatch: {self.n} vs {other.n}")
            return other
        return WPolynomial.constant(self.n, _as_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return WPolynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return WPolynomial._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, WPolynomial):
            c = _as_fraction(other)
            if not c:
                return WPolynomial.zero(self.n)
            return WPolynomial._raw(self.n, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return WPolynomial._raw(self.n, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / _as_fraction(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = WPolynomial.constant(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, WPolynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def degrees(self) -> set[int]:
        return {mono_degree(m) for m in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (degree is None or ds == {degree})

    def homogeneous_part(self, degree: int) -> "WPolynomial":
        return WPolynomial._raw(self.n, {m: c for m, c in self.terms.items() if mono_degree(m) == degree})

    def evaluate(self, values=1):
        """Substitute numbers for the variables.

        ``values`` is a scalar (all w_ij equal), a mapping ``(i, j) -> value``
        or a callable ``(i, j) -> value``.
        """
        if isinstance(values, Mapping):
            get = lambda e: values[e] if e in values else values[(e[1], e[0])]
        elif callable(values):
            get = lambda e: values(*e)
        else:
            get = lambda e: values
        total = 0
        for m, c in self.terms.items():
            t = c
            for e, k in m:
                t = t * get(e) ** k
            total = total + t
        return total

    def relabel(self, perm: Sequence[int]) -> "WPolynomial":
        """Apply the vertex relabeling ``x -> perm[x - 1]``."""
        out = {}
        for m, c in self.terms.items():
            out[monomial((edge_var(perm[i - 1], perm[j - 1]), k) for (i, j), k in m)] = c
        return WPolynomial._raw(self.n, out)

    def with_n(self, n: int) -> "WPolynomial":
        """Same polynomial viewed in a different ambient ring (no variable dropped)."""
        return WPolynomial(n, self.terms)

    def __repr__(self):
        return f"WPolynomial(n={self.n}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (mono_degree(m), m)):
            c = self.terms[m]
            if m == ONE:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono_str(m))
            elif c == -1:
                parts.append("-" + mono_str(m))
            else:
                parts.append(f"{c}*{mono_str(m)}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"monomial": [[i, j, k] for (i, j), k in m], "coeff": str(c)}
                for m, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Union[str, dict]) -> "WPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        terms: dict[Monomial, Fraction] = {}
        for t in data["terms"]:
            m = monomial(((i, j), k) for i, j, k in t["monomial"])
            terms[m] = terms.get(m, 0) + Fraction(t["coeff"])
        return cls(int(data["n"]), terms)


def project(P: WPolynomial) -> WPolynomial:
    """Set w_{1n} = ... = w_{n-1,n} = 0 and view the result in C_{n-1}[w]."""
    if P.n < 2:
        raise ValueError("projection needs n >= 2")
    n = P.n
    return WPolynomial._raw(n - 1, {m: c for m, c in P.terms.items() if all(e[1] != n for e, _ in m)})


# ---------------------------------------------------------------------------
# canonical forms of small multigraphs


def _refine_colors(v: int, edges: Sequence[Edge]) -> list[int]:
    """Colour refinement; colours are ranks of isomorphism-invariant signatures."""
    adj: list[dict[int, int]] = [{} for _ in range(v)]
    loops = [0] * v
    for a, b in edges:
        if a == b:
            loops[a] += 1
        else:
            adj[a][b] = adj[a].get(b, 0) + 1
            adj[b][a] = adj[b].get(a, 0) + 1
    sig = [(sum(adj[x].values()) + 2 * loops[x], loops[x]) for x in range(v)]
    ranks = sorted(set(sig))
    colors = [ranks.index(s) for s in sig]
    while True:
        sig = [
            (colors[x], tuple(sorted((colors[y], k) for y, k in adj[x].items())))
            for x in range(v)
        ]
        ranks = sorted(set(sig))
        new = [ranks.index(s) for s in sig]
        if len(ranks) == len(set(colors)):
            return new
        colors = new


def canonical_edges(v: int, edges: Iterable[Edge]) -> tuple[tuple[Edge, ...], int]:
    """Canonical sorted edge list of a multigraph on vertices 0..v-1.

    Returns the lexicographically minimal edge tuple over all relabelings that
    respect the refined colour classes, and the number of vertex permutations
    attaining it (the order of the vertex automorphism group).  Loops allowed.
    """
    edges = [tuple(sorted(e)) for e in edges]
    for a, b in edges:
        if not (0 <= a < v and 0 <= b < v):
            raise ValueError(f"edge {(a, b)} outside 0..{v - 1}")
    colors = _refine_colors(v, edges)
    cells: dict[int, list[int]] = {}
    for x in range(v):
        cells.setdefault(colors[x], []).append(x)
    order = sorted(cells)
    slots = []
    start = 0
    for c in order:
        slots.append((cells[c], list(range(start, start + len(cells[c])))))
        start += len(cells[c])

    best = None
    count = 0
    label = [0] * v
    for choice in itertools.product(*(itertools.permutations(targets) for _, targets in slots)):
        for (members, _), targets in zip(slots, choice):
            for x, t in zip(members, targets):
                label[x] = t
        form = tuple(sorted(
            (label[a], label[b]) if label[a] <= label[b] else (label[b], label[a]) for a, b in edges
        ))
        if best is None or form < best:
            best, count = form, 1
        elif form == best:
            count += 1
    return (best if best is not None else ()), count


def _edge_multiplicities(edges: Iterable[Edge]) -> dict[Edge, int]:
    mult: dict[Edge, int] = {}
    for e in edges:
        mult[e] = mult.get(e, 0) + 1
    return mult


@dataclass(frozen=True, order=True)
class GraphClass:
    """Isomorphism class of a loopless multigraph with ``v`` vertices.

    ``edges`` is the canonical zero-based edge tuple; build instances through
    :func:`canonicalize` or :meth:`parse`, not the constructor.
    """

    v: int
    edges: tuple[Edge, ...]

    @classmethod
    def parse(cls, text: str, v: int | None = None) -> "GraphClass":
        """Read the ``"1-2;1-2;2-3"`` format (one-based vertex labels)."""
        edges = parse_edge_list(text)
        return canonicalize(edges, v)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def multiplicities(self) -> dict[Edge, int]:
        return _edge_multiplicities(self.edges)

    def components(self) -> list["GraphClass"]:
        parent = list(range(self.v))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        groups: dict[int, list[int]] = {}
        for x in range(self.v):
            groups.setdefault(find(x), []).append(x)
        out = []
        for verts in groups.values():
            idx = {x: k for k, x in enumerate(verts)}
            sub = [(idx[a], idx[b]) for a, b in self.edges if a in idx]
            out.append(_from_zero_based(len(verts), sub))
        return sorted(out)

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def __str__(self):
        if not self.edges:
            return f"<{self.v} isolated vertices>"
        return ";".join(f"{a + 1}-{b + 1}" for a, b in self.edges)


def parse_edge_list(text: str) -> list[Edge]:
    """Parse ``"1-2;1-2;2-3"`` into one-based pairs; loops appear as ``"1-1"``."""
    edges = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.strip()
        if not chunk or chunk.startswith("#"):
            continue
        try:
            a, b = (int(x) for x in chunk.split("-"))
        except ValueError:
            raise ValueError(f"bad edge {chunk!r}; expected 'i-j'") from None
        if a < 1 or b < 1:
            raise ValueError(f"vertex labels are one-based: {chunk!r}")
        edges.append((a, b))
    return edges


def _from_zero_based(v: int, edges: Sequence[Edge]) -> GraphClass:
    form, _ = canonical_edges(v, edges)
    return GraphClass(v, form)


def canonicalize(edges: Iterable[Edge], v: int | None = None) -> GraphClass:
    """Canonical class of a labeled loopless multigraph given by one-based pairs.

    Without ``v`` the vertex set is the set of endpoints (relabeled in order);
    with ``v`` the vertices are 1..v and isolated ones are kept.
    """
    edges = [tuple(e) for e in edges]
    for a, b in edges:
        if a == b:
            raise ValueError(f"loop at vertex {a}: graph classes are loopless")
    if v is None:
        verts = sorted({x for e in edges for x in e})
    else:
        verts = list(range(1, v + 1))
        if any(x > v for e in edges for x in e):
            raise ValueError(f"edge endpoint exceeds v={v}")
    idx = {x: k for k, x in enumerate(verts)}
    return _from_zero_based(len(verts), [(idx[a], idx[b]) for a, b in edges])


def vertex_aut_count(G: GraphClass) -> int:
    return canonical_edges(G.v, G.edges)[1]


def aut_count(G: GraphClass) -> int:
    """|Aut G| counted on half-edges: vertex automorphisms times prod_e (m_e)!."""
    return vertex_aut_count(G) * math.prod(math.factorial(k) for k in G.multiplicities().values())


def expand(G: GraphClass, n: int) -> WPolynomial:
    """The polynomial G_n(w); zero when G has more than n vertices."""
    if n < 1:
        raise ValueError("n must be positive")
    if G.v > n:
        return WPolynomial.zero(n)
    counts: dict[Monomial, int] = {}
    for lab in itertools.permutations(range(1, n + 1), G.v):
        m = monomial((edge_var(lab[a], lab[b]), 1) for a, b in G.edges)
        counts[m] = counts.get(m, 0) + 1
    aut = aut_count(G)
    return WPolynomial._raw(n, {m: Fraction(c, aut) for m, c in counts.items()})


def monomial_class(m: Monomial) -> GraphClass:
    """Class of the support graph of a monomial (isolated vertices dropped)."""
    return canonicalize([e for e, k in m for _ in range(k)])


class GraphSeries:
    """Finite rational combination of graph classes."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GraphClass, object] | None = None):
        self.terms: dict[GraphClass, Fraction] = {}
        for G, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                self.terms[G] = self.terms.get(G, 0) + c
        self.terms = {G: c for G, c in self.terms.items() if c}

    def __getitem__(self, G: GraphClass) -> Fraction:
        return self.terms.get(G, Fraction(0))

    def __iter__(self):
        return iter(sorted(self.terms))

    def __len__(self):
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def __add__(self, other: "GraphSeries") -> "GraphSeries":
        out = dict(self.terms)
        for G, c in other.terms.items():
            out[G] = out.get(G, 0) + c
        return GraphSeries(out)

    def __neg__(self):
        return GraphSeries({G: -c for G, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = _as_fraction(c)
        return GraphSeries({G: v * c for G, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GraphSeries) and self.terms == other.terms

    def expand(self, n: int) -> WPolynomial:
        total = WPolynomial.zero(n)
        for G, c in self.terms.items():
            total = total + expand(G, n) * c
        return total

    def __repr__(self):
        return "GraphSeries({" + ", ".join(f"'{G}': {c}" for G, c in self.items()) + "})"

    def to_json(self) -> list[dict]:
        return [{"edges": _one_based(G), "v": G.v, "coeff": str(c)} for G, c in self.items()]

    @classmethod
    def from_json(cls, data: Union[str, list]) -> "GraphSeries":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({GraphClass.parse(t["edges"], t.get("v")): Fraction(t["coeff"]) for t in data})


def _one_based(G: GraphClass) -> str:
    return ";".join(f"{a + 1}-{b + 1}" for a, b in G.edges)


class NotInvariantError(ValueError):
    """Raised by :func:`collect` when the input is not S_n-invariant."""


def collect(P: WPolynomial) -> GraphSeries:
    """Rewrite an S_n-invariant polynomial as a combination of graph classes."""
    series: dict[GraphClass, Fraction] = {}
    for m, c in P.terms.items():
        G = monomial_class(m)
        if G in series:
            continue
        series[G] = c * math.prod(math.factorial(k) for _, k in m)
    result = GraphSeries(series)
    residual = P - result.expand(P.n)
    if residual:
        sample = next(iter(residual.terms))
        raise NotInvariantError(
            f"polynomial is not S_{P.n}-invariant; residual has {len(residual)} terms, e.g. {mono_str(sample)}"
        )
    return result


def symmetrize(P: WPolynomial) -> WPolynomial:
    """Sum of all S_n relabelings of ``P`` (used to build invariant test inputs)."""
    total = WPolynomial.zero(P.n)
    for perm in itertools.permutations(range(1, P.n + 1)):
        total = total + P.relabel(perm)
    return total


def path_graph(k: int) -> GraphClass:
    """Path with ``k`` edges."""
    return canonicalize([(i, i + 1) for i in range(1, k + 1)])


def spider(k: int) -> GraphClass:
    """The star tree X_k with ``k`` legs."""
    return canonicalize([(1, i) for i in range(2, k + 2)])


def multi_edge(k: int) -> GraphClass:
    return canonicalize([(1, 2)] * k)


def disjoint_union(*graphs: GraphClass) -> GraphClass:
    edges = []
    offset = 0
    for G in graphs:
        edges += [(a + offset, b + offset) for a, b in G.edges]
        offset += G.v
    return _from_zero_based(offset, edges)


def cycle_edge_count(G: GraphClass, simple: bool = False) -> int:
    """Number of edges lying on at least one cycle (i.e. non-bridges).

    With ``simple=True`` parallel edges are first merged, so a multiple edge
    alone does not form a cycle.
    """
    edges = sorted(set(G.edges)) if simple else G.edges
    count = 0
    for k, (a, b) in enumerate(edges):
        parent = list(range(G.v))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for t, (c, d) in enumerate(edges):
            if t != k:
                parent[find(c)] = find(d)
        if find(a) == find(b):
            count += 1
    return count
