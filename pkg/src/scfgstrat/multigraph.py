"""Permutation multigraphs, width profiles and exact cutwidth solvers.

Vertices are the integers ``1..n``.  Edge multiplicities count in every
profile, so an edge travelled by both the red and the green path adds 2.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .strategy import LinearStrategy, Permutation, SizeLimitExceeded, SizeMismatch

DEFAULT_VERTEX_LIMIT = 20
BRUTE_FORCE_VERTEX_LIMIT = 8

CW, ECW, EMCW = "cw", "ecw", "emcw"
VARIANTS = (CW, ECW, EMCW)


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int, int], ...]
    endpoints: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a multigraph needs at least one vertex")
        for u, v, m in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n) or u == v or m < 1:
                raise ValueError(f"bad edge {(u, v, m)}")
        for v in self.endpoints:
            if not 1 <= v <= self.n:
                raise ValueError(f"endpoint {v} outside [1..{self.n}]")

    @classmethod
    def from_edge_list(cls, n: int, pairs: Iterable[tuple[int, int]], endpoints: Iterable[int] = ()) -> "Multigraph":
        counts = Counter(_key(u, v) for u, v in pairs)
        edges = tuple((u, v, m) for (u, v), m in sorted(counts.items()))
        return cls(n, edges, tuple(endpoints))

    @property
    def edge_count(self) -> int:
        return sum(m for _, _, m in self.edges)

    def degree(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for u, v, m in self.edges:
            deg[u] += m
            deg[v] += m
        return deg

    def multiplicity(self) -> dict[tuple[int, int], int]:
        return {(u, v): m for u, v, m in self.edges}

    def relabel(self, mapping: Sequence[int]) -> "Multigraph":
        """Rename vertex ``v`` to ``mapping[v-1]``."""
        pairs = []
        for u, v, m in self.edges:
            pairs += [(mapping[u - 1], mapping[v - 1])] * m
        return Multigraph.from_edge_list(self.n, pairs, [mapping[v - 1] for v in self.endpoints])


@dataclass(frozen=True)
class PermutationMultigraph(Multigraph):
    red: tuple[int, ...] = ()
    green: tuple[int, ...] = ()

    @property
    def r(self) -> int:
        return self.n

    @property
    def red_edges(self) -> list[tuple[int, int]]:
        return list(zip(self.red, self.red[1:]))

    @property
    def green_edges(self) -> list[tuple[int, int]]:
        return list(zip(self.green, self.green[1:]))


def from_permutation(p: Permutation) -> PermutationMultigraph:
    if p.r < 2:
        raise ValueError("a permutation multigraph needs r >= 2")
    red = tuple(range(1, p.r + 1))
    green = tuple(p.image)
    base = Multigraph.from_edge_list(
        p.r, list(zip(red, red[1:])) + list(zip(green, green[1:])), (red[0], red[-1], green[0], green[-1])
    )
    return PermutationMultigraph(base.n, base.edges, base.endpoints, red, green)


@dataclass(frozen=True)
class LinearArrangement:
    """``order[i-1]`` is the vertex placed at position ``i``."""

    order: tuple[int, ...]

    def __init__(self, order: Iterable[int]):
        order = tuple(int(v) for v in order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise ValueError("arrangement must be a bijection onto [1..n]")
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return len(self.order)

    def positions(self) -> list[int]:
        """``positions()[v]`` is the position of vertex ``v`` (index 0 unused)."""
        pos = [0] * (self.n + 1)
        for i, v in enumerate(self.order, 1):
            pos[v] = i
        return pos

    def reversed(self) -> "LinearArrangement":
        return LinearArrangement(self.order[::-1])

    @classmethod
    def identity(cls, n: int) -> "LinearArrangement":
        return cls(range(1, n + 1))


def strategy_to_arrangement(s: LinearStrategy) -> LinearArrangement:
    # the vertex of left position p sits where p is collected
    return LinearArrangement(s.order)


def arrangement_to_strategy(a: LinearArrangement) -> LinearStrategy:
    return LinearStrategy(a.order)


def _positions(g: Multigraph, a: LinearArrangement) -> list[int]:
    if a.n != g.n:
        raise SizeMismatch(f"arrangement of {a.n} vertices for a graph with {g.n}")
    return a.positions()


def width_profile(g: Multigraph, a: LinearArrangement) -> list[int]:
    pos = _positions(g, a)
    diff = [0] * (g.n + 1)
    for u, v, m in g.edges:
        lo, hi = sorted((pos[u], pos[v]))
        diff[lo] += m
        diff[hi] -= m
    return list(itertools.accumulate(diff[1:]))


def _markers_upto(g: Multigraph, pos: list[int], strict: bool) -> list[int]:
    at = [0] * (g.n + 2)
    for v in g.endpoints:
        at[pos[v]] += 1
    acc = list(itertools.accumulate(at[1 : g.n + 1]))
    if strict:
        return [0] + acc[:-1]
    return acc


def extended_width_profile(g: Multigraph, a: LinearArrangement) -> list[int]:
    pos = _positions(g, a)
    wd = width_profile(g, a)
    ends = _markers_upto(g, pos, strict=False)
    out = [w + e for w, e in zip(wd, ends)]
    out[-1] = 4
    return out


def modified_width_profile(g: Multigraph, a: LinearArrangement) -> list[int]:
    pos = _positions(g, a)
    diff = [0] * (g.n + 2)
    for u, v, m in g.edges:
        lo, hi = sorted((pos[u], pos[v]))
        if hi - lo >= 2:
            diff[lo + 1] += m
            diff[hi] -= m
    return list(itertools.accumulate(diff[1 : g.n + 1]))


def extended_modified_width_profile(g: Multigraph, a: LinearArrangement) -> list[int]:
    pos = _positions(g, a)
    mwd = modified_width_profile(g, a)
    ends = _markers_upto(g, pos, strict=True)
    return [w + e for w, e in zip(mwd, ends)]


PROFILES: dict[str, Callable[[Multigraph, LinearArrangement], list[int]]] = {
    CW: width_profile,
    ECW: extended_width_profile,
    EMCW: extended_modified_width_profile,
}


# -- exact solvers -------------------------------------------------------------


@dataclass
class SolverResult:
    value: int
    witness: LinearArrangement
    variant: str
    stats: dict = field(default_factory=dict)

    def to_dict(self, g: Multigraph | None = None) -> dict:
        out = {"variant": self.variant, "value": self.value, "witness": list(self.witness.order), "stats": self.stats}
        if g is not None:
            out["nodes"] = g.n
            out["edges"] = g.edge_count
        return out


class _Lattice:
    """Incremental cut / marker bookkeeping over vertex subsets (bitmasks, bit v-1 = vertex v)."""

    def __init__(self, g: Multigraph):
        self.n = g.n
        self.full = (1 << g.n) - 1
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        for u, v, m in g.edges:
            self.adj[u - 1].append((v - 1, m))
            self.adj[v - 1].append((u - 1, m))
        deg = g.degree()
        self.deg = deg[1:]
        self.markers = [0] * g.n
        for v in g.endpoints:
            self.markers[v - 1] += 1

    def into(self, S: int, v: int) -> int:
        """Multiplicity of edges between vertex ``v`` and the set ``S``."""
        return sum(m for u, m in self.adj[v] if (S >> u) & 1)


def _bottleneck_search(g: Multigraph, variant: str, limit: int) -> SolverResult:
    """Minimax path from the empty set to the full set in the subset lattice.

    Every prefix of an arrangement is a vertex set; the cost of placing ``v``
    after prefix ``S`` depends only on ``S`` and ``v``, so the optimal
    arrangement is a bottleneck-shortest path.  Sets are settled in order of
    their bottleneck value, so only sets cheaper than the optimum (plus ties)
    are ever expanded.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if g.n > limit:
        raise SizeLimitExceeded(f"{g.n} vertices exceed the exact-solver limit {limit}")
    lat = _Lattice(g)
    full = lat.full
    started = time.perf_counter()

    def step_cost(S: int, cut: int, ends: int, v: int) -> tuple[int, int, int]:
        w = lat.into(S, v)
        new_cut = cut + lat.deg[v] - 2 * w
        new_ends = ends + lat.markers[v]
        T = S | (1 << v)
        if variant == CW:
            cost = new_cut if T != full else 0
        elif variant == ECW:
            cost = new_cut + new_ends if T != full else 4
        else:
            cost = cut - w + ends
        return cost, new_cut, new_ends

    best: dict[int, int] = {0: 0}
    info: dict[int, tuple[int, int]] = {0: (0, 0)}
    parent: dict[int, tuple[int, int]] = {}
    heap = [(0, 0, 0)]
    settled: set[int] = set()
    expanded = 0
    while heap:
        b, _, S = heapq.heappop(heap)
        if S in settled:
            continue
        settled.add(S)
        if S == full:
            break
        expanded += 1
        cut, ends = info[S]
        for v in range(lat.n):
            if (S >> v) & 1:
                continue
            cost, ncut, nends = step_cost(S, cut, ends, v)
            T = S | (1 << v)
            nb = max(b, cost)
            if T not in best or nb < best[T]:
                best[T] = nb
                info[T] = (ncut, nends)
                parent[T] = (S, v + 1)
                # larger sets first among ties: they finish sooner
                heapq.heappush(heap, (nb, -T.bit_count(), T))
    order = []
    S = full
    while S:
        S, v = parent[S]
        order.append(v)
    order.reverse()
    witness = LinearArrangement(order)
    value = best[full]
    stats = {"expanded_sets": expanded, "seen_sets": len(best), "seconds": round(time.perf_counter() - started, 6)}
    return SolverResult(value, witness, variant, stats)


def cutwidth_exact(g: Multigraph, limit: int = DEFAULT_VERTEX_LIMIT) -> SolverResult:
    return _bottleneck_search(g, CW, limit)


def extended_cutwidth_exact(g: Multigraph, limit: int = DEFAULT_VERTEX_LIMIT) -> SolverResult:
    return _bottleneck_search(g, ECW, limit)


def extended_modified_cutwidth_exact(g: Multigraph, limit: int = DEFAULT_VERTEX_LIMIT) -> SolverResult:
    return _bottleneck_search(g, EMCW, limit)


SOLVERS = {CW: cutwidth_exact, ECW: extended_cutwidth_exact, EMCW: extended_modified_cutwidth_exact}


def brute_force_cutwidth(g: Multigraph, variant: str = CW) -> tuple[int, LinearArrangement]:
    """Minimum over all ``n!`` arrangements by direct profile evaluation."""
    if g.n > BRUTE_FORCE_VERTEX_LIMIT:
        raise SizeLimitExceeded(f"brute force limited to n <= {BRUTE_FORCE_VERTEX_LIMIT}")
    n = g.n
    orders = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int16)
    m = orders.shape[0]
    pos = np.empty((m, n + 1), dtype=np.int16)
    pos[np.arange(m)[:, None], orders] = np.arange(1, n + 1, dtype=np.int16)
    gaps = np.arange(1, n + 1)
    prof = np.zeros((m, n), dtype=int)
    for u, v, mult in g.edges:
        lo = np.minimum(pos[:, u], pos[:, v])[:, None]
        hi = np.maximum(pos[:, u], pos[:, v])[:, None]
        if variant == EMCW:
            prof += mult * ((lo < gaps) & (gaps < hi))
        else:
            prof += mult * ((lo <= gaps) & (gaps < hi))
    if variant != CW:
        for v in g.endpoints:
            pv = pos[:, v][:, None]
            prof += (pv < gaps) if variant == EMCW else (pv <= gaps)
    if variant == ECW:
        prof[:, -1] = 4
    scores = prof.max(axis=1)
    best = int(np.argmin(scores))
    return int(scores[best]), LinearArrangement(orders[best].tolist())


# -- text format -----------------------------------------------------------------


class GraphFormatError(ValueError):
    pass


def parse_graph(text: str, with_multiplicity: bool = True) -> Multigraph:
    """Parse ``n m`` then ``m`` lines ``u v [mult]`` and an optional ``E: a b c d`` line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [(i, ln) for i, ln in enumerate(lines, 1) if ln]
    if not lines:
        raise GraphFormatError("empty graph file")
    try:
        n, m = (int(x) for x in lines[0][1].split())
    except ValueError:
        raise GraphFormatError(f"line {lines[0][0]}: expected 'n m'") from None
    pairs = []
    endpoints: list[int] = []
    for lineno, ln in lines[1:]:
        if ln.startswith("E:"):
            endpoints = [int(x) for x in ln[2:].split()]
            continue
        toks = ln.split()
        try:
            vals = [int(x) for x in toks]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token") from None
        if len(vals) == 2:
            u, v, mult = vals[0], vals[1], 1
        elif len(vals) == 3 and with_multiplicity:
            u, v, mult = vals
        else:
            raise GraphFormatError(f"line {lineno}: expected 'u v{' mult' if with_multiplicity else ''}'")
        if mult not in (1, 2):
            raise GraphFormatError(f"line {lineno}: multiplicity must be 1 or 2")
        pairs += [(u, v)] * mult
    if len(pairs) != m and sum(1 for _, ln in lines[1:] if not ln.startswith("E:")) != m:
        raise GraphFormatError(f"header announces {m} edges")
    try:
        return Multigraph.from_edge_list(n, pairs, endpoints)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_graph(g: Multigraph) -> str:
    out = [f"{g.n} {len(g.edges)}"]
    out += [f"{u} {v} {m}" for u, v, m in g.edges]
    if g.endpoints:
        out.append("E: " + " ".join(map(str, g.endpoints)))
    return "\n".join(out) + "\n"
