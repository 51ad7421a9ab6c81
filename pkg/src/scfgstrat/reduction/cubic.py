"""Cubic source graphs and a brute-force minimum bisection oracle."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..multigraph import GraphFormatError, parse_graph

BISECTION_LIMIT = 16


class NotCubic(ValueError):
    pass


@dataclass(frozen=True)
class CubicGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise NotCubic(f"a cubic graph needs an even vertex count > 1, got {self.n}")
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            if u == v:
                raise NotCubic(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise NotCubic(f"edge ({u}, {v}) leaves [1..{self.n}]")
            deg[u] += 1
            deg[v] += 1
        bad = [v for v in range(1, self.n + 1) if deg[v] != 3]
        if bad:
            raise NotCubic(f"vertex {bad[0]} has degree {deg[bad[0]]}, expected 3")

    @classmethod
    def from_edges(cls, n: int, pairs) -> "CubicGraph":
        norm = [(min(u, v), max(u, v)) for u, v in pairs]
        if len(set(norm)) != len(norm):
            dup = next(e for e in norm if norm.count(e) > 1)
            raise NotCubic(f"multi-edge {dup}")
        return cls(n, frozenset(norm))

    def neighbours(self, i: int) -> list[int]:
        return sorted([v for u, v in self.edges if u == i] + [u for u, v in self.edges if v == i])

    def forward(self, i: int) -> list[int]:
        """Neighbours j > i in increasing order."""
        return [j for j in self.neighbours(i) if j > i]

    def backward(self, i: int) -> list[int]:
        return [j for j in self.neighbours(i) if j < i]

    def cut(self, side: frozenset[int] | set[int]) -> int:
        return sum((u in side) != (v in side) for u, v in self.edges)

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"] + [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def parse_cubic(text: str) -> CubicGraph:
    """Edge-list format: ``n m`` then ``m`` lines ``u v``."""
    g = parse_graph(text, with_multiplicity=False)
    if any(m > 1 for _, _, m in g.edges):
        raise NotCubic("multi-edges are not allowed in a cubic source graph")
    return CubicGraph(g.n, frozenset((u, v) for u, v, _ in g.edges))


def k4() -> CubicGraph:
    return CubicGraph.from_edges(4, combinations(range(1, 5), 2))


def k33() -> CubicGraph:
    return CubicGraph.from_edges(6, [(a, b) for a in (1, 2, 3) for b in (4, 5, 6)])


def q3() -> CubicGraph:
    """The 3-cube; vertex ``v`` stands for bit pattern ``v - 1``."""
    return CubicGraph.from_edges(8, [(a + 1, (a ^ (1 << b)) + 1) for a in range(8) for b in range(3) if a < a ^ (1 << b)])


FIXTURES = {"K4": k4, "K33": k33, "Q3": q3}


@dataclass(frozen=True)
class Bisection:
    V1: tuple[int, ...]
    V2: tuple[int, ...]

    def __init__(self, V1, V2):
        object.__setattr__(self, "V1", tuple(sorted(V1)))
        object.__setattr__(self, "V2", tuple(sorted(V2)))

    def validate(self, n: int) -> None:
        if len(self.V1) != len(self.V2):
            raise ValueError("bisection sides differ in size")
        if sorted(self.V1 + self.V2) != list(range(1, n + 1)):
            raise ValueError(f"bisection is not a partition of [1..{n}]")

    def to_dict(self) -> dict:
        return {"V1": list(self.V1), "V2": list(self.V2)}


def all_bisections(g: CubicGraph):
    """Each split once, with vertex 1 on the V1 side, in lexicographic order of V1."""
    rest = range(2, g.n + 1)
    for others in combinations(rest, g.n // 2 - 1):
        V1 = (1,) + others
        yield Bisection(V1, [v for v in range(1, g.n + 1) if v not in V1])


def min_bisection_brute(g: CubicGraph, limit: int = BISECTION_LIMIT) -> tuple[Bisection, int]:
    if g.n > limit:
        raise ValueError(f"brute-force bisection is limited to n <= {limit}, got {g.n}")
    best = None
    for b in all_bisections(g):
        c = g.cut(set(b.V1))
        if best is None or c < best[1]:
            best = (b, c)
    return best


__all__ = [
    "BISECTION_LIMIT", "Bisection", "CubicGraph", "FIXTURES", "GraphFormatError", "NotCubic",
    "all_bisections", "k33", "k4", "min_bisection_brute", "parse_cubic", "q3",
]
