"""Embedded graphs as rotation systems.

Edge ``k`` of a :class:`MultiGraph` owns half-edges ``2k`` and ``2k + 1``;
the twin of ``h`` is ``h ^ 1``.  A rotation system gives, at every vertex, a
cyclic order of its half-edges.  Faces are the orbits of

    h  ->  next(twin(h))

and the genus follows from V - E + F = 2 - 2g.  With the rotation of an edge
numbering (increasing numbers around each vertex) this convention walks each
face so that the descents of edge numbers mark the cycles of the product of
the edge transpositions.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .permgroup import Permutation, product, Transposition
from .wring import GraphClass, canonical_edges, canonicalize, parse_edge_list


class EnumerationBudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"rotation enumeration needs {estimate} systems, budget is {budget}")


DEFAULT_BUDGET = 10**7


class MultiGraph:
    """Multigraph on vertices 0..v-1; loops and parallel edges allowed."""

    __slots__ = ("v", "edges", "_at", "_around")

    def __init__(self, v: int, edges: Iterable[tuple[int, int]]):
        self.v = v
        self.edges = tuple((int(a), int(b)) for a, b in edges)
        for a, b in self.edges:
            if not (0 <= a < v and 0 <= b < v):
                raise ValueError(f"edge {(a, b)} outside 0..{v - 1}")
        self._at = [x for e in self.edges for x in e]
        self._around = [[] for _ in range(v)]
        for h, x in enumerate(self._at):
            self._around[x].append(h)

    @classmethod
    def parse(cls, text: str, v: int | None = None) -> "MultiGraph":
        """Read the ``"1-2;1-2;2-3"`` format; ``"1-1"`` is a loop."""
        edges = parse_edge_list(text)
        if v is None:
            v = max((x for e in edges for x in e), default=1)
        return cls(v, [(a - 1, b - 1) for a, b in edges])

    @classmethod
    def from_class(cls, G: GraphClass) -> "MultiGraph":
        return cls(G.v, G.edges)

    def __str__(self):
        return ";".join(f"{a + 1}-{b + 1}" for a, b in self.edges)

    def __repr__(self):
        return f"MultiGraph({self.v}, {list(self.edges)})"

    def to_json(self) -> dict:
        return {
            "v": self.v,
            "edges": [[a + 1, b + 1] for a, b in self.edges],
            "halfedges": {str(h): self._at[h] + 1 for h in range(len(self._at))},
        }

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_halfedges(self) -> int:
        return len(self._at)

    def at(self, h: int) -> int:
        return self._at[h]

    @staticmethod
    def twin(h: int) -> int:
        return h ^ 1

    def around(self, x: int) -> list[int]:
        return list(self._around[x])

    def degree(self, x: int) -> int:
        return len(self._around[x])

    def has_loops(self) -> bool:
        return any(a == b for a, b in self.edges)

    def components(self) -> int:
        parent = list(range(self.v))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        return len({find(x) for x in range(self.v)})

    def is_connected(self) -> bool:
        return self.components() == 1

    def betti(self) -> int:
        return self.n_edges - self.v + self.components()

    def canonical_key(self) -> tuple:
        return (self.v, canonical_edges(self.v, self.edges)[0])

    def graph_class(self) -> GraphClass:
        if self.has_loops():
            raise ValueError("graph classes are loopless")
        return GraphClass(self.v, canonical_edges(self.v, self.edges)[0])


class RotationSystem:
    """``next[h]`` is the successor of half-edge ``h`` around its vertex."""

    __slots__ = ("next",)

    def __init__(self, nxt: Sequence[int]):
        self.next = tuple(nxt)

    @classmethod
    def from_orders(cls, G: MultiGraph, orders: dict[int, Sequence[int]]) -> "RotationSystem":
        nxt = [-1] * G.n_halfedges
        for x in range(G.v):
            cyc = list(orders.get(x, G.around(x)))
            if sorted(cyc) != sorted(G.around(x)):
                raise ValueError(f"order at vertex {x} must list exactly its half-edges")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                nxt[a] = b
        return cls(nxt)

    def check(self, G: MultiGraph) -> None:
        for x in range(G.v):
            hs = G.around(x)
            if not hs:
                continue
            seen = [hs[0]]
            h = self.next[hs[0]]
            while h != hs[0]:
                seen.append(h)
                h = self.next[h]
                if len(seen) > len(hs):
                    break
            if sorted(seen) != sorted(hs):
                raise ValueError(f"rotation at vertex {x} is not a single cycle on its half-edges")

    def __eq__(self, other):
        return isinstance(other, RotationSystem) and self.next == other.next

    def __hash__(self):
        return hash(self.next)

    def __repr__(self):
        return f"RotationSystem({list(self.next)})"


def face_cycles(G: MultiGraph, rot: RotationSystem) -> list[list[int]]:
    nxt = rot.next
    seen = [False] * G.n_halfedges
    faces = []
    for start in range(G.n_halfedges):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = nxt[h ^ 1]
        faces.append(cyc)
    return faces or [[]]


def faces(G: MultiGraph, rot: RotationSystem) -> tuple[list[list[int]], int]:
    """Face cycles (lists of half-edges) and the genus of the embedding."""
    if not G.is_connected():
        raise ValueError("face tracing needs a connected graph")
    fc = face_cycles(G, rot)
    chi = G.v - G.n_edges + len(fc)
    return fc, (2 - chi) // 2


def _count_faces(nxt: list[int], n_half: int) -> int:
    seen = bytearray(n_half)
    f = 0
    for start in range(n_half):
        if seen[start]:
            continue
        f += 1
        h = start
        while not seen[h]:
            seen[h] = 1
            h = nxt[h ^ 1]
    return f or 1


def emb_count(G: MultiGraph) -> int:
    """prod over vertices of (deg - 1)!."""
    return math.prod(math.factorial(max(G.degree(x) - 1, 0)) for x in range(G.v))


def rotation_systems(G: MultiGraph) -> Iterator[RotationSystem]:
    """All rotation systems; each vertex anchors its smallest half-edge."""
    for nxt in _rotation_arrays(G):
        yield RotationSystem(nxt)


def _rotation_arrays(G: MultiGraph) -> Iterator[list[int]]:
    per_vertex = []
    for x in range(G.v):
        hs = G.around(x)
        if hs:
            per_vertex.append([(hs[0],) + p for p in itertools.permutations(hs[1:])])
    nxt = [-1] * G.n_halfedges
    for choice in itertools.product(*per_vertex):
        for cyc in choice:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                nxt[a] = b
        yield nxt


def face_distribution(G: MultiGraph, budget: int = DEFAULT_BUDGET) -> Counter:
    """Number of rotation systems with each face count."""
    if not G.is_connected():
        raise ValueError("embeddings are defined for connected graphs")
    total = emb_count(G)
    if total > budget:
        raise EnumerationBudgetExceeded(total, budget)
    dist: Counter = Counter()
    for nxt in _rotation_arrays(G):
        dist[_count_faces(nxt, G.n_halfedges)] += 1
    return dist


def one_faced_count(G: MultiGraph, budget: int = DEFAULT_BUDGET) -> int:
    return face_distribution(G, budget)[1]


# ---------------------------------------------------------------------------
# numberings


def embedding_of_numbering(G: MultiGraph, numbering: Sequence[int]) -> RotationSystem:
    """Rotation with half-edges in increasing order of their edge numbers.

    ``numbering[k]`` is the number (1..E) given to edge ``k``.
    """
    if G.has_loops():
        raise ValueError("numbering embeddings need a loopless graph")
    if sorted(numbering) != list(range(1, G.n_edges + 1)):
        raise ValueError("numbering must be a bijection onto 1..E")
    return RotationSystem.from_orders(
        G, {x: sorted(G.around(x), key=lambda h: numbering[h >> 1]) for x in range(G.v)}
    )


def numbering_product(G: MultiGraph, numbering: Sequence[int]) -> Permutation:
    """Product of the edge transpositions, edge numbered 1 acting first (one-based vertices)."""
    order = sorted(range(G.n_edges), key=lambda k: numbering[k])
    return product([Transposition(G.edges[k][0] + 1, G.edges[k][1] + 1, G.v) for k in order], G.v)


@dataclass
class CyclesEmbReport:
    ok: bool
    faces: list[list[int]]
    marked: list[list[int]]
    sigma_cycles: list[tuple[int, ...]]
    problems: list[str] = field(default_factory=list)


def faces_vs_cycles(G: MultiGraph, numbering: Sequence[int]) -> CyclesEmbReport:
    """Check the faces <-> cycles correspondence for one edge numbering.

    Walking a face, a corner is marked when the edge arriving there has a
    larger number than the edge leaving it, or when the vertex has valency 1.
    Every vertex must be marked exactly once, every face must carry a mark,
    and the marks of a face, in walking order, must form a cycle of the
    product (one-based vertex labels in the report).
    """
    if not G.is_connected():
        raise ValueError("graph must be connected")
    rot = embedding_of_numbering(G, numbering)
    sigma = numbering_product(G, numbering)
    fc = face_cycles(G, rot)
    marked = []
    for face in fc:
        marks = []
        for t, h_in in enumerate(face):
            h_out = face[(t + 1) % len(face)]
            x = G.at(h_out)
            if numbering[h_in >> 1] > numbering[h_out >> 1] or G.degree(x) == 1:
                marks.append(x + 1)
        marked.append(marks)

    problems = []
    counts = Counter(x for marks in marked for x in marks)
    for x in range(1, G.v + 1):
        if counts[x] != 1:
            problems.append(f"vertex {x} marked {counts[x]} times")
    for k, marks in enumerate(marked):
        if not marks:
            problems.append(f"face {k} carries no mark")
        for a, b in zip(marks, marks[1:] + marks[:1]):
            if sigma(a) != b:
                problems.append(f"face {k}: sigma({a}) = {sigma(a)}, face order gives {b}")
    cycles = sigma.cycles(include_fixed=True)
    if len(cycles) != len(fc):
        problems.append(f"{len(fc)} faces but {len(cycles)} cycles")
    return CyclesEmbReport(not problems, fc, marked, cycles, problems)


def one_faced_numbering_count(G: MultiGraph) -> int:
    """Number of edge numberings whose embedding has a single face."""
    if G.has_loops() or not G.is_connected():
        raise ValueError("need a connected loopless graph")
    if G.betti() % 2:
        return 0
    E = G.n_edges
    count = 0
    for perm in itertools.permutations(range(1, E + 1)):
        rot = embedding_of_numbering(G, perm)
        if _count_faces(list(rot.next), G.n_halfedges) == 1:
            count += 1
    return count


# ---------------------------------------------------------------------------
# skeleton, long graphs, subdivision


def _require_cycles(G: MultiGraph) -> None:
    if not G.is_connected():
        raise ValueError("graph must be connected")
    if G.betti() < 2:
        raise ValueError(f"need at least 2 independent cycles, first Betti number is {G.betti()}")


def skeleton(G: MultiGraph) -> tuple[MultiGraph, list[int]]:
    """Prune valency-1 vertices repeatedly; returns the skeleton and its vertex list in G."""
    _require_cycles(G)
    alive_e = set(range(G.n_edges))
    alive_v = set(range(G.v))
    deg = [G.degree(x) for x in range(G.v)]
    changed = True
    while changed:
        changed = False
        for x in list(alive_v):
            if deg[x] == 1:
                k = next(k for k in alive_e if x in G.edges[k])
                a, b = G.edges[k]
                alive_e.discard(k)
                deg[a] -= 1
                deg[b] -= 1
                alive_v.discard(x)
                changed = True
    verts = sorted(alive_v)
    idx = {x: i for i, x in enumerate(verts)}
    return MultiGraph(len(verts), [(idx[G.edges[k][0]], idx[G.edges[k][1]]) for k in sorted(alive_e)]), verts


def essential_vertices(G: MultiGraph) -> set[int]:
    """Vertices of G with valency >= 3 in the skeleton."""
    S, verts = skeleton(G)
    return {verts[i] for i in range(S.v) if S.degree(i) >= 3}


def is_long(G: MultiGraph) -> bool:
    _require_cycles(G)
    if G.has_loops():
        return False
    ess = essential_vertices(G)
    return not any(a in ess and b in ess for a, b in G.edges)


def subdivide_to_long(G: MultiGraph) -> tuple[MultiGraph, list[int]]:
    """Subdivide each edge between essential vertices once and each loop twice.

    Returns the long graph and the map old vertex -> new vertex (old vertices
    keep their ids; new ones are appended).
    """
    _require_cycles(G)
    ess = essential_vertices(G)
    edges = []
    v = G.v
    for a, b in G.edges:
        if a == b:
            edges += [(a, v), (v, v + 1), (v + 1, b)]
            v += 2
        elif a in ess and b in ess:
            edges += [(a, v), (v, b)]
            v += 1
        else:
            edges.append((a, b))
    return MultiGraph(v, edges), list(range(G.v))


# ---------------------------------------------------------------------------
# decorations


@dataclass(frozen=True)
class Decoration:
    chosen: dict  # vertex -> tuple of half-edges
    weight: Fraction

    def __hash__(self):
        return hash(tuple(sorted(self.chosen.items())))


def _is_spanning_tree(v: int, edges: Sequence[tuple[int, int]]) -> bool:
    if len(edges) != v - 1:
        return False
    parent = list(range(v))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def decorations(G: MultiGraph) -> list[Decoration]:
    """All decorations of a connected graph with an even first Betti number 2g.

    A decoration picks, at some vertices, an even number (>= 2) of half-edges,
    2g in total, such that deleting every edge touched by a chosen half-edge
    leaves a spanning tree.  Weight: 2^(-2g) prod_v 1/(k_v + 1).
    """
    if not G.is_connected():
        raise ValueError("graph must be connected")
    b = G.betti()
    if b % 2:
        raise ValueError(f"first Betti number {b} is odd; decorations need 2g independent cycles")
    options = []
    for x in range(G.v):
        hs = G.around(x)
        opts = [()]
        for k in range(2, min(len(hs), b) + 1, 2):
            opts += list(itertools.combinations(hs, k))
        options.append(opts)

    out = []

    def rec(x, remaining, chosen):
        if x == G.v:
            if remaining:
                return
            dead = {h >> 1 for hs in chosen.values() for h in hs}
            rest = [e for k, e in enumerate(G.edges) if k not in dead]
            if _is_spanning_tree(G.v, rest):
                w = Fraction(1, 2**b)
                for hs in chosen.values():
                    w /= len(hs) + 1
                out.append(Decoration(dict(chosen), w))
            return
        for opt in options[x]:
            if len(opt) > remaining:
                continue
            if opt:
                chosen[x] = opt
            rec(x + 1, remaining - len(opt), chosen)
            chosen.pop(x, None)

    rec(0, b, {})
    return out


def decoration_sum(G: MultiGraph) -> Fraction:
    return sum((d.weight for d in decorations(G)), Fraction(0))


@dataclass
class SpidersReport:
    graph: str
    emb: int
    one_faced: int
    decoration_sum: Fraction
    n_decorations: int

    @property
    def check(self) -> bool:
        return self.decoration_sum * self.emb == self.one_faced

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "emb": self.emb,
            "one_faced": self.one_faced,
            "decoration_sum": str(self.decoration_sum),
            "decorations": self.n_decorations,
            "check": self.check,
        }

    def summary(self) -> str:
        rel = "=" if self.check else "!="
        return f"{self.graph}: {self.decoration_sum} × {self.emb} {rel} {self.one_faced}"


def verify_spiders(G: MultiGraph, budget: int = DEFAULT_BUDGET) -> SpidersReport:
    """One-faced embeddings = (sum of decoration weights) * (all embeddings)."""
    decs = decorations(G)
    total = sum((d.weight for d in decs), Fraction(0))
    return SpidersReport(str(G), emb_count(G), one_faced_count(G, budget), total, len(decs))


# ---------------------------------------------------------------------------
# small graph generation


def connected_multigraphs(max_edges: int, loops: bool = True, min_edges: int = 0) -> Iterator[MultiGraph]:
    """Connected multigraphs with at most ``max_edges`` edges, one per isomorphism class.

    Every connected graph with an edge has one whose removal keeps it
    connected (a cycle edge, or a leaf edge of a tree), so each level is grown
    from the previous one by adding an edge, possibly to a new vertex.
    """
    level = {(1, ())}
    for E in range(0, max_edges + 1):
        if E >= min_edges:
            for v, edges in sorted(level):
                yield MultiGraph(v, edges)
        if E == max_edges:
            break
        nxt = set()
        for v, edges in level:
            cands = [(a, b) for a in range(v) for b in range(a, v) if loops or a != b]
            cands += [(a, v) for a in range(v)]
            for a, b in cands:
                nv = max(v, b + 1)
                nxt.add((nv, canonical_edges(nv, list(edges) + [(a, b)])[0]))
        level = nxt


def spanning_trees(G: MultiGraph) -> Iterator[tuple[int, ...]]:
    """Edge-index sets of spanning trees (parallel edges give distinct trees)."""
    for combo in itertools.combinations(range(G.n_edges), G.v - 1):
        if _is_spanning_tree(G.v, [G.edges[k] for k in combo]):
            yield combo


def is_spider_union(v: int, edges: Sequence[tuple[int, int]], centers_allowed: set[int] | None = None) -> bool:
    """Whether ``edges`` form a disjoint union of stars (no loops).

    With ``centers_allowed``, every star with at least two legs must be
    centred at one of those vertices.
    """
    if any(a == b for a, b in edges):
        return False
    sub = MultiGraph(v, edges)
    touched = {x for e in edges for x in e}
    parent = {x: x for x in touched}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    comps: dict[int, list[int]] = {}
    for x in touched:
        comps.setdefault(find(x), []).append(x)
    for verts in comps.values():
        n_e = sum(1 for a, b in edges if a in verts)
        if n_e != len(verts) - 1:
            return False
        if n_e == 1:
            continue
        centers = [x for x in verts if sub.degree(x) == n_e]
        if len(centers) != 1:
            return False
        if centers_allowed is not None and centers[0] not in centers_allowed:
            return False
    return True


@dataclass
class OnlySpidersReport:
    graph: str
    essential: list[int]
    trees: int
    contributions: list[tuple[str, Fraction]]
    violations: list[str]
    total: Fraction

    @property
    def ok(self) -> bool:
        return not self.violations


def only_spiders(G: MultiGraph, g: int | None = None) -> OnlySpidersReport:
    """Complements of spanning trees of a long graph that carry an R_g coefficient.

    Each such complement must be a disjoint union of spiders centred at
    essential vertices.  ``total`` is the summed monomial coefficient, i.e.
    the coefficient of w^G in T_n * R_g, which for a long graph equals
    decoration_sum(G).
    """
    from .spectral import collected_R

    if G.has_loops() or not is_long(G):
        raise ValueError("need a long loopless graph")
    if g is None:
        g = G.betti() // 2
    R = collected_R(g, G.v)
    ess = essential_vertices(G)
    contributions, violations = [], []
    total = Fraction(0)
    n_trees = 0
    for tree in spanning_trees(G):
        n_trees += 1
        rest = [G.edges[k] for k in range(G.n_edges) if k not in tree]
        cls = canonicalize([(a + 1, b + 1) for a, b in rest])
        c = R[cls]
        if not c:
            continue
        # monomial coefficient = class coefficient / prod of edge multiplicity factorials
        mono = c / math.prod(math.factorial(k) for k in Counter(rest).values())
        total += mono
        label = ";".join(f"{a + 1}-{b + 1}" for a, b in rest)
        contributions.append((label, mono))
        if not is_spider_union(G.v, rest, ess):
            violations.append(f"complement {label} has coefficient {c} but is not a union of spiders")
    return OnlySpidersReport(str(G), sorted(ess), n_trees, contributions, violations, total)
