"""Permutations of {1..n} with one-based images.

Products are read right to left: ``compose(a, b)`` applies ``b`` first.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> "Permutation":
        cycles = [tuple(c) for c in cycles]
        if n is None:
            n = max((max(c) for c in cycles if c), default=0)
        images = list(range(1, n + 1))
        seen = set()
        for c in cycles:
            for x in c:
                if not 1 <= x <= n or x in seen:
                    raise ValueError(f"bad cycle {c} for n={n}")
                seen.add(x)
            for a, b in zip(c, c[1:] + c[:1]):
                images[a - 1] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", text):
            raise ValueError(f"cannot parse cycle notation: {text!r}")
        cycles = [
            tuple(int(x) for x in re.split(r"[\s,]+", body.strip()) if x)
            for body in re.findall(r"\(([^)]*)\)", text)
        ]
        return cls.from_cycles([c for c in cycles if c], n)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.images, 1):
            inv[x - 1] = i
        return Permutation(inv)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x - 1]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


class Transposition(Permutation):
    """The transposition swapping ``i`` and ``j`` inside S_n."""

    __slots__ = ("i", "j")

    def __init__(self, i: int, j: int, n: int):
        if i == j:
            raise ValueError("a transposition needs two distinct points")
        i, j = min(i, j), max(i, j)
        if i < 1 or j > n:
            raise ValueError(f"({i} {j}) does not act on 1..{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        super().__init__(images)
        self.i, self.j = i, j

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


def transpositions(n: int) -> list[tuple[int, int]]:
    """All pairs (i, j), 1 <= i < j <= n, in lexicographic order."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


class CycleType(tuple):
    """Nondecreasing tuple of cycle lengths (fixed points included)."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(sorted(int(p) for p in parts))
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "CycleType":
        return cls(int(x) for x in text.replace(" ", "").split(",") if x)

    @property
    def n(self) -> int:
        return sum(self)

    @property
    def s(self) -> int:
        return len(self)

    def __repr__(self):
        return f"CycleType({tuple(self)})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Return ``a * b``: apply ``b`` first, then ``a``."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return Permutation([a.images[x - 1] for x in b.images])


def product(perms: Sequence[Permutation], n: int) -> Permutation:
    """Right-to-left product ``perms[-1] * ... * perms[0]`` (``perms[0]`` acts first)."""
    p = Permutation.identity(n)
    for q in perms:
        p = compose(q, p)
    return p


def cycle_type_of_images(images: Sequence[int]) -> CycleType:
    """Cycle type of a permutation given as a one-based image sequence."""
    n = len(images)
    seen = [False] * (n + 1)
    parts = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            length += 1
            x = images[x - 1]
        parts.append(length)
    return CycleType(parts)


def cycle_type(p: Permutation) -> CycleType:
    return cycle_type_of_images(p.images)


def is_n_cycle(p: Permutation) -> bool:
    return len(cycle_type(p)) == 1


def conjugate(p: Permutation, q: Permutation) -> Permutation:
    """``q p q^-1``."""
    return compose(compose(q, p), q.inverse())
