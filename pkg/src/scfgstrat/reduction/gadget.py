"""The hardness gadget G' built from a cubic graph.

Grid components are implicit: a component is its dimensions plus the id of
its top-left vertex, and vertex ``(h, w)`` of a component with base ``b`` and
width ``W`` has id ``b + (h-1)W + (w-1)`` (0-based ids internally, 1-based in
dumps).  Only the inter-grid edges are listed explicitly.  The red and green
Hamiltonian paths are materialized as int32 arrays, about 36 MB each for
the faithful K4 instance.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..strategy import Permutation
from .cubic import Bisection, CubicGraph

FAITHFUL_SCALE = 4
SCALES = (1, 2, 3, 4)
DUMP_MAX_SCALE = 2

# inter-grid edge kinds
CONNECTOR_LM, CONNECTOR_MR, BLOCK1, BLOCK2_M, BLOCK2_G, BLOCK3 = range(6)
KIND_NAMES = ("connector_LM", "connector_MR", "block1", "block2_M", "block2_G", "block3")


class GadgetError(ValueError):
    pass


class UnverifiedGadget(RuntimeError):
    pass


class ResourceLimitExceeded(MemoryError):
    pass


MEMORY_ENV = "SCFGSTRAT_MEMORY_MB"
# measured peak of build + verify + sweep on the faithful K4 instance, rounded up
BYTES_PER_VERTEX = 300


@dataclass(frozen=True)
class GridComponent:
    name: str
    height: int
    width: int
    base: int

    @property
    def size(self) -> int:
        return self.height * self.width

    def vid(self, h: int, w: int) -> int:
        if not (1 <= h <= self.height and 1 <= w <= self.width):
            raise IndexError(f"({h}, {w}) outside {self.name} = Γ[{self.height}, {self.width}]")
        return self.base + (h - 1) * self.width + (w - 1)

    def ids(self) -> np.ndarray:
        return np.arange(self.base, self.base + self.size, dtype=np.int64).reshape(self.height, self.width)

    def row(self, h: int, rightward: bool = True) -> np.ndarray:
        r = np.arange(self.vid(h, 1), self.vid(h, 1) + self.width, dtype=np.int64)
        return r if rightward else r[::-1]

    def col(self, w: int, down: bool = True) -> np.ndarray:
        c = np.arange(self.vid(1, w), self.base + self.size, self.width, dtype=np.int64)
        return c if down else c[::-1]


def _snake(block: np.ndarray, forward_first: bool) -> np.ndarray:
    """Traverse the rows of ``block`` alternating direction."""
    block = block if forward_first else block[:, ::-1]
    block = block.copy()
    block[1::2] = block[1::2, ::-1]
    return block.ravel()


def gadget_parameters(n: int, t: int) -> tuple[int, int]:
    """Return ``(N, q)``: the grid unit (n^4 when faithful) and the per-grid M-edge quarter (n^2).

    Scaled instances use ``q = max(3, ceil(n^(t/2)))`` and the smallest even
    ``N >= n^t`` leaving room for every block; the literal n^t substitution
    does not fit the M row for small t.
    """
    if t not in SCALES:
        raise GadgetError(f"scale must be one of {SCALES}, got {t}")
    if t == FAITHFUL_SCALE:
        return n**4, n**2
    q = max(3, math.isqrt(n**t - 1) + 1 if n**t > 1 else 1)
    N = n**t + (n**t) % 2
    while not (q * n < 2 * N and 6 * N > 4 * q + 3):
        N += 2
    return N, q


@dataclass(frozen=True, eq=False)
class GadgetInstance:
    source: CubicGraph
    k: int
    t: int
    N: int
    q: int
    components: tuple[GridComponent, ...]
    inter_edges: np.ndarray  # (E, 2) vertex ids
    inter_kinds: np.ndarray  # (E,) kind codes
    red_path: np.ndarray
    green_path: np.ndarray
    red_edges_override: np.ndarray | None = field(default=None, repr=False)
    green_edges_override: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def faithful(self) -> bool:
        return self.t == FAITHFUL_SCALE

    @property
    def k_prime(self) -> int:
        return 3 * self.N + 2 + 2 * self.n * self.q + 2 * self.k

    @property
    def num_vertices(self) -> int:
        return sum(c.size for c in self.components)

    @property
    def num_edges(self) -> int:
        """Edges counted with multiplicity (red plus green)."""
        return 2 * (self.num_vertices - 1)

    def component(self, name: str) -> GridComponent:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def bases(self) -> np.ndarray:
        return np.array([c.base for c in self.components], dtype=np.int64)

    def component_of(self, ids: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.bases, ids, side="right") - 1

    def vertex_name(self, v: int) -> str:
        c = self.components[int(self.component_of(np.array([v]))[0])]
        h, w = divmod(int(v) - c.base, c.width)
        prefix = c.name.lower() if c.name in "LMR" else "g_" + c.name[1:]
        return f"{prefix}^{{{h + 1},{w + 1}}}"

    def red_edges(self) -> np.ndarray:
        if self.red_edges_override is not None:
            return self.red_edges_override
        return np.column_stack([self.red_path[:-1], self.red_path[1:]])

    def green_edges(self) -> np.ndarray:
        if self.green_edges_override is not None:
            return self.green_edges_override
        return np.column_stack([self.green_path[:-1], self.green_path[1:]])

    def with_edges(self, red: np.ndarray | None = None, green: np.ndarray | None = None) -> "GadgetInstance":
        """A copy whose red/green edge sets are replaced (used for fault injection)."""
        return replace(self, red_edges_override=red, green_edges_override=green)

    def expected_vertex_count(self) -> int:
        return vertex_count(self.n, self.t)

    def manifest(self) -> dict:
        return {
            "faithful": self.faithful,
            "scale": self.t,
            "n": self.n,
            "k": self.k,
            "N": self.N,
            "q": self.q,
            "k_prime": self.k_prime,
            "num_vertices": self.num_vertices,
            "num_edges": self.num_edges,
            "num_inter_grid_edges": int(len(self.inter_edges)),
            "components": [{"name": c.name, "height": c.height, "width": c.width} for c in self.components],
        }

    def manifest_json(self) -> str:
        return json.dumps(self.manifest(), indent=2)

    def dump_edges(self) -> str:
        """Edge list in the multigraph text format (1-based ids, ``u v mult``)."""
        if self.t > DUMP_MAX_SCALE:
            raise GadgetError(f"edge dumps are only produced for scale <= {DUMP_MAX_SCALE}")
        keys, mult = _edge_multiset(np.vstack([self.red_edges(), self.green_edges()]), self.num_vertices)
        V = self.num_vertices
        lines = [f"{V} {len(keys)}"]
        lines += [f"{u + 1} {v + 1} {m}" for u, v, m in zip((keys // V).tolist(), (keys % V).tolist(), mult.tolist())]
        ends = [self.red_path[0], self.red_path[-1], self.green_path[0], self.green_path[-1]]
        lines.append("E: " + " ".join(str(int(e) + 1) for e in ends))
        return "\n".join(lines) + "\n"


def _edge_keys(edges: np.ndarray, V: int) -> np.ndarray:
    lo = np.minimum(edges[:, 0], edges[:, 1]).astype(np.int64)
    hi = np.maximum(edges[:, 0], edges[:, 1]).astype(np.int64)
    return lo * V + hi


def _edge_multiset(edges: np.ndarray, V: int) -> tuple[np.ndarray, np.ndarray]:
    return np.unique(_edge_keys(edges, V), return_counts=True)


# -- construction -------------------------------------------------------------------------


def vertex_count(n: int, t: int) -> int:
    N, _ = gadget_parameters(n, t)
    return n * (2 * N + 1) * (6 * N) + 2 * (3 * N + 1) * (12 * N) + (2 * N + 1) * (8 * N + 1)


def estimate_memory_mb(n: int, t: int) -> int:
    """Rough peak memory of build, verify and sweep together."""
    return math.ceil(vertex_count(n, t) * BYTES_PER_VERTEX / 2**20)


def build_gadget(g: CubicGraph, k: int, t: int = FAITHFUL_SCALE, memory_cap_mb: int | None = None) -> GadgetInstance:
    """Build G' for source ``g`` and bisection bound ``k``.

    ``memory_cap_mb`` (default: the SCFGSTRAT_MEMORY_MB environment variable)
    refuses instances whose estimated footprint exceeds the cap.
    """
    if not isinstance(g, CubicGraph):
        raise GadgetError("source must be a CubicGraph")
    if g.n % 2:
        raise GadgetError("source graph must have an even number of vertices")
    if k < 1:
        raise GadgetError("k must be a positive integer")
    n = g.n
    N, q = gadget_parameters(n, t)
    if memory_cap_mb is None and os.environ.get(MEMORY_ENV):
        memory_cap_mb = int(os.environ[MEMORY_ENV])
    need = estimate_memory_mb(n, t)
    if memory_cap_mb is not None and need > memory_cap_mb:
        raise ResourceLimitExceeded(f"gadget needs about {need} MB, cap is {memory_cap_mb} MB")
    if vertex_count(n, t) >= 2**31:
        raise ResourceLimitExceeded(f"gadget has {vertex_count(n, t)} vertices, beyond 32-bit vertex ids")
    HG, WG, HL, WL, HM, WM = 2 * N + 1, 6 * N, 3 * N + 1, 12 * N, 2 * N + 1, 8 * N + 1

    comps = []
    base = 0
    for i in range(1, n + 1):
        comps.append(GridComponent(f"G{i}", HG, WG, base))
        base += HG * WG
    for name, H, W in (("L", HL, WL), ("M", HM, WM), ("R", HL, WL)):
        comps.append(GridComponent(name, H, W, base))
        base += H * W
    G = {i: comps[i - 1] for i in range(1, n + 1)}
    L, M, R = comps[n], comps[n + 1], comps[n + 2]

    def sigma(i):
        return 4 * q * (i - 1) + 1

    fwd = {i: g.forward(i) for i in range(1, n + 1)}
    bwd = {i: g.backward(i) for i in range(1, n + 1)}

    def d_lt(j, i):
        """Backward neighbours of j with index below i."""
        return sum(1 for b in bwd[j] if b < i)

    edges: list[tuple[int, int]] = []
    kinds: list[int] = []

    def add(u, v, kind):
        edges.append((u, v))
        kinds.append(kind)

    for h in range(1, HM + 1):
        add(L.vid(h, WL), M.vid(h, 1), CONNECTOR_LM)
        add(M.vid(h, WM), R.vid(N + h, 1), CONNECTOR_MR)

    # green path pieces, built alongside the blocks they traverse
    green: list[np.ndarray] = [_snake(L.ids().T, True), M.col(1, True), M.col(2, False)]
    for i in range(1, n + 1):
        Gi, s_i, s_next = G[i], sigma(i), sigma(i + 1)
        dF, dB = len(fwd[i]), len(bwd[i])
        for h in range(1, 2 * q - 2 - dF + 1):
            a = s_i + 2 * h - 1
            add(M.vid(1, a), Gi.vid(HG, 2 * h - 1), BLOCK1)
            add(Gi.vid(HG, 2 * h), M.vid(1, a + 1), BLOCK1)
            green += [Gi.col(2 * h - 1, False), Gi.col(2 * h, True), M.col(a + 1, True), M.col(a + 2, False)]
        for h, j in enumerate(fwd[i], 1):
            b = s_i + 4 * q - 4 - 2 * dF + 2 * h - 1
            c = 4 * q - 4 - 2 * dF + 2 * h - 1
            c2 = 4 * q - 3 + 2 * d_lt(j, i)
            Gj = G[j]
            add(M.vid(1, b), Gi.vid(HG, c), BLOCK2_M)
            add(Gi.vid(1, c), Gj.vid(HG, c2), BLOCK2_G)
            add(Gj.vid(HG, c2 + 1), Gi.vid(1, c + 1), BLOCK2_G)
            add(Gi.vid(HG, c + 1), M.vid(1, b + 1), BLOCK2_M)
            green += [
                Gi.col(c, False), Gj.col(c2, False), Gj.col(c2 + 1, True), Gi.col(c + 1, True),
                M.col(b + 1, True), M.col(b + 2, False),
            ]
        c0 = 4 * q - 3 + 2 * dB
        add(M.vid(1, s_next - 3), Gi.vid(1, c0), BLOCK3)
        add(Gi.vid(1, WG), M.vid(1, s_next - 2), BLOCK3)
        add(M.vid(1, s_next - 1), Gi.vid(1, 1), BLOCK3)
        add(Gi.vid(HG, WG), M.vid(1, s_next), BLOCK3)
        green.append(_snake(Gi.ids()[:, c0 - 1 :].T, True))
        green += [M.col(s_next - 2, True), M.col(s_next - 1, False), M.col(s_next, True), M.col(s_next + 1, False)]
    green.append(_snake(M.ids()[:, sigma(n + 1) + 1 :].T, True))
    green.append(_snake(R.ids().T, False))

    red: list[np.ndarray] = [_snake(L.ids()[2 * N + 1 :][::-1], True)]
    combined = np.hstack([L.ids()[1:HM], M.ids()[1:HM], R.ids()[N + 1 : N + HM]])[::-1]
    red.append(_snake(combined, True))
    red.append(L.row(1))
    m1 = M.row(1)
    start = 0
    for i in range(1, n + 1):
        stop = sigma(i + 1) - 1  # column of x_i, inclusive
        red.append(m1[start:stop])
        red.append(_snake(G[i].ids(), True))
        start = stop
    red.append(m1[start:])
    red.append(_snake(R.ids()[: N + 1][::-1], True))

    return GadgetInstance(
        source=g, k=k, t=t, N=N, q=q, components=tuple(comps),
        inter_edges=np.array(edges, dtype=np.int64), inter_kinds=np.array(kinds, dtype=np.int8),
        red_path=np.concatenate(red).astype(np.int32), green_path=np.concatenate(green).astype(np.int32),
    )


# -- verification -----------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "witness": self.witness}


@dataclass
class GadgetReport:
    checks: list[Check]
    red_endpoints: tuple[str, ...]
    green_endpoints: tuple[str, ...]
    faithful: bool

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "faithful": self.faithful,
            "red_endpoints": list(self.red_endpoints),
            "green_endpoints": list(self.green_endpoints),
            "checks": [c.to_dict() for c in self.checks],
        }


def _hamiltonian_check(inst: GadgetInstance, edges: np.ndarray, colour: str) -> tuple[Check, tuple[str, ...]]:
    V = inst.num_vertices
    name = f"{colour}_hamiltonian_path"
    if len(edges) and np.any(edges[:, 0] == edges[:, 1]):
        v = int(edges[edges[:, 0] == edges[:, 1]][0, 0])
        return Check(name, False, "self-loop", inst.vertex_name(v)), ()
    deg = np.bincount(edges.ravel(), minlength=V)
    if deg.max(initial=0) > 2:
        v = int(np.argmax(deg))
        return Check(name, False, f"vertex of degree {int(deg[v])}", inst.vertex_name(v)), ()
    if np.any(deg == 0):
        v = int(np.flatnonzero(deg == 0)[0])
        return Check(name, False, "vertex not covered", inst.vertex_name(v)), ()
    ends = np.flatnonzero(deg == 1)
    named = tuple(inst.vertex_name(int(v)) for v in ends)
    if len(edges) != V - 1:
        return Check(name, False, f"{len(edges)} edges, expected {V - 1}", named[0] if named else None), named
    adj = coo_matrix((np.ones(len(edges), dtype=np.int8), (edges[:, 0], edges[:, 1])), shape=(V, V))
    ncomp, labels = connected_components(adj, directed=False)
    if ncomp != 1:
        v = int(np.flatnonzero(labels != labels[0])[0])
        return Check(name, False, f"{ncomp} connected pieces", inst.vertex_name(v)), named
    return Check(name, True, f"simple path over all {V} vertices"), named


def _grid_adjacent(inst: GadgetInstance, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    cu, cv = inst.component_of(u), inst.component_of(v)
    widths = np.array([c.width for c in inst.components], dtype=np.int64)
    bases = inst.bases
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    W = widths[cu]
    loc = lo - bases[cu]
    same_row = (hi - lo == 1) & (loc % W != W - 1)
    same_col = hi - lo == W
    return (cu == cv) & (same_row | same_col)


def _grid_edge_count(inst: GadgetInstance) -> int:
    return sum(c.height * (c.width - 1) + c.width * (c.height - 1) for c in inst.components)


def verify_gadget(inst: GadgetInstance) -> GadgetReport:
    V = inst.num_vertices
    red, green = inst.red_edges(), inst.green_edges()
    checks = []
    c_red, red_ends = _hamiltonian_check(inst, red, "red")
    c_green, green_ends = _hamiltonian_check(inst, green, "green")
    checks += [c_red, c_green]

    # every path edge is a grid adjacency or a listed inter-grid edge, and the
    # union of both paths covers every such edge
    both = np.vstack([red, green])
    keys = np.unique(_edge_keys(both, V))
    inter_keys = np.unique(_edge_keys(inst.inter_edges, V))
    u, v = keys // V, keys % V
    grid_ok = _grid_adjacent(inst, u, v)
    listed = np.isin(keys, inter_keys)
    stray = ~(grid_ok | listed)
    if stray.any():
        w = int(np.flatnonzero(stray)[0])
        checks.append(Check("edges_in_gadget", False, "path edge outside G'", inst.vertex_name(int(u[w]))))
    elif grid_ok.sum() != _grid_edge_count(inst) or not np.isin(inter_keys, keys).all():
        missing = inter_keys[~np.isin(inter_keys, keys)]
        wit = inst.vertex_name(int(missing[0] // V)) if len(missing) else None
        checks.append(Check("edges_in_gadget", False, "some edge of G' lies on neither path", wit))
    else:
        checks.append(Check("edges_in_gadget", True, f"{len(keys)} distinct edges"))

    # per-G_i external edge counts
    comp = inst.component_of(inst.inter_edges)
    n = inst.n
    bad = None
    m_idx = n + 1
    for i in range(n):
        touches = (comp[:, 0] == i) | (comp[:, 1] == i)
        other = np.where(comp[:, 0] == i, comp[:, 1], comp[:, 0])[touches]
        to_m = int(np.sum(other == m_idx))
        to_g = int(np.sum(other < n))
        if (to_m, to_g) != (4 * inst.q, 6) and bad is None:
            bad = (i, to_m, to_g)
    if bad:
        checks.append(Check("g_external_counts", False, f"{bad[1]} edges to M and {bad[2]} to other grids",
                            inst.components[bad[0]].name))
    else:
        checks.append(Check("g_external_counts", True, f"each G_i: {4 * inst.q} edges to M, 6 to other G_j"))

    ends = inst.inter_edges.ravel()
    in_g = ends[inst.component_of(ends) < n]
    cnt = np.bincount(in_g, minlength=V)
    if cnt.max(initial=0) > 1:
        v = int(np.argmax(cnt))
        checks.append(Check("one_external_edge_per_g_vertex", False, f"{int(cnt[v])} external edges",
                            inst.vertex_name(v)))
    else:
        checks.append(Check("one_external_edge_per_g_vertex", True))

    # doubled edges: boundary columns/rows of grids plus the two green crossings
    dbl = np.intersect1d(_edge_keys(red, V), _edge_keys(green, V))
    du, dv = dbl // V, dbl % V
    L, M, R = inst.component("L"), inst.component("M"), inst.component("R")
    crossings = np.array(sorted([
        min(L.vid(1, L.width), M.vid(1, 1)) * V + max(L.vid(1, L.width), M.vid(1, 1)),
        min(M.vid(M.height, M.width), R.vid(R.height, 1)) * V + max(M.vid(M.height, M.width), R.vid(R.height, 1)),
    ]))
    cu = inst.component_of(du)
    widths = np.array([c.width for c in inst.components])
    heights = np.array([c.height for c in inst.components])
    lu, lv = du - inst.bases[cu], dv - inst.bases[cu]
    W, H = widths[cu], heights[cu]
    vertical = (dv - du) == W
    col = lu % W
    row_u, row_v = lu // W, lv // W
    on_side_col = vertical & ((col == 0) | (col == W - 1))
    on_side_row = ~vertical & (row_u == row_v) & ((row_u == 0) | (row_u == H - 1))
    allowed = (_grid_adjacent(inst, du, dv) & (on_side_col | on_side_row)) | np.isin(dbl, crossings)
    if not allowed.all():
        w = int(np.flatnonzero(~allowed)[0])
        checks.append(Check("double_edge_pattern", False, "doubled edge off the grid boundary",
                            inst.vertex_name(int(du[w]))))
    else:
        checks.append(Check("double_edge_pattern", True, f"{len(dbl)} doubled edges"))

    G1 = inst.components[0]
    expected_red = {inst.vertex_name(L.vid(L.height, 1)), inst.vertex_name(R.vid(1, R.width))}
    expected_green = {inst.vertex_name(L.vid(1, 1)), inst.vertex_name(R.vid(R.height, R.width))}
    ok_ends = set(red_ends) == expected_red and set(green_ends) == expected_green
    checks.append(Check("path_endpoints", ok_ends,
                        f"red {sorted(expected_red)}, green {sorted(expected_green)}",
                        None if ok_ends else inst.vertex_name(G1.base)))

    order = lambda ends, first: tuple(sorted(ends, key=lambda s: s != first))  # noqa: E731
    return GadgetReport(
        checks,
        order(red_ends, inst.vertex_name(L.vid(L.height, 1))),
        order(green_ends, inst.vertex_name(L.vid(1, 1))),
        inst.faithful,
    )


# -- arrangement and sweep -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GadgetArrangement:
    order: np.ndarray  # position -> vertex id
    spans: tuple[tuple[str, int, int], ...]  # (component, first position, last position), 1-based

    def positions(self) -> np.ndarray:
        pos = np.empty_like(self.order)
        pos[self.order] = np.arange(1, len(self.order) + 1, dtype=self.order.dtype)
        return pos


def canonical_arrangement(inst: GadgetInstance, b: Bisection) -> GadgetArrangement:
    """Columns left to right inside each grid, each column in green-path order.

    Grids are laid out as G_i (i in V1), L, M, R, G_i (i in V2).
    """
    try:
        b.validate(inst.n)
    except ValueError as exc:
        raise GadgetError(f"invalid bisection: {exc}") from None
    gidx = np.empty(inst.num_vertices, dtype=np.int64)
    gidx[inst.green_path] = np.arange(inst.num_vertices)
    names = [f"G{i}" for i in b.V1] + ["L", "M", "R"] + [f"G{i}" for i in b.V2]
    pieces, spans = [], []
    at = 1
    for name in names:
        c = inst.component(name)
        ids = c.ids()
        rank = np.argsort(gidx[ids], axis=0, kind="stable")
        cols = np.take_along_axis(ids, rank, axis=0)
        pieces.append(cols.T.ravel())
        spans.append((name, at, at + c.size - 1))
        at += c.size
    return GadgetArrangement(np.concatenate(pieces), tuple(spans))


@dataclass
class SweepResult:
    max_width: int
    argmax_gap: int  # width between positions g and g+1
    component_max: dict[str, int]
    k_prime: int
    faithful: bool

    def to_dict(self) -> dict:
        return {
            "max_width": self.max_width,
            "argmax_gap": self.argmax_gap,
            "k_prime": self.k_prime,
            "within_k_prime": self.max_width <= self.k_prime,
            "faithful": self.faithful,
            "component_max": self.component_max,
        }


def width_profile(inst: GadgetInstance, arrangement: GadgetArrangement) -> np.ndarray:
    """Open-edge count at each gap ``1 .. |V|-1`` (doubled edges count twice)."""
    V = inst.num_vertices
    order = np.asarray(arrangement.order)
    if len(order) != V or np.bincount(order, minlength=V).max(initial=0) != 1 or order.min() < 0:
        raise GadgetError("arrangement is not a bijection onto the gadget's vertices")
    pos = arrangement.positions()
    delta = np.zeros(V + 2, dtype=np.int64)
    for edges in (inst.red_edges(), inst.green_edges()):
        a, c = pos[edges[:, 0]], pos[edges[:, 1]]
        lo, hi = np.minimum(a, c), np.maximum(a, c)
        delta += np.bincount(lo, minlength=V + 2)
        delta -= np.bincount(hi, minlength=V + 2)
    return np.cumsum(delta)[1:V]


def sweep_max_width(inst: GadgetInstance, arrangement: GadgetArrangement) -> SweepResult:
    prof = width_profile(inst, arrangement)
    g = int(np.argmax(prof)) + 1
    comp_max = {}
    for name, first, last in arrangement.spans:
        seg = prof[first - 1 : min(last, len(prof))]
        comp_max[name] = int(seg.max()) if len(seg) else 0
    return SweepResult(int(prof[g - 1]), g, comp_max, inst.k_prime, inst.faithful)


# -- permutation view ---------------------------------------------------------------------


def paths_to_permutation(red: np.ndarray, green: np.ndarray) -> Permutation:
    """Number vertices by red order; the green visit order is the permutation."""
    rank = np.empty(len(red), dtype=np.int64)
    rank[red] = np.arange(1, len(red) + 1)
    return Permutation(rank[green].tolist())


def gadget_to_permutation(inst: GadgetInstance, report: GadgetReport | None = None) -> Permutation:
    report = report if report is not None else verify_gadget(inst)
    if not report.ok:
        raise UnverifiedGadget("gadget failed verification: " + ", ".join(c.name for c in report.failed()))
    return paths_to_permutation(inst.red_path, inst.green_path)
