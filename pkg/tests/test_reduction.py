import numpy as np
import pytest

from scfgstrat import multigraph as mg
from scfgstrat.reduction import cubic, gadget, grids
from scfgstrat.strategy import Permutation

SMALL = [("K4", 1), ("K4", 2), ("K33", 1), ("K33", 2), ("Q3", 1), ("Q3", 2)]


@pytest.fixture(scope="module")
def k4_t1():
    inst = gadget.build_gadget(cubic.k4(), 4, t=1)
    return inst, gadget.verify_gadget(inst)


def closed_form_vertices(n, N):
    return n * (2 * N + 1) * (6 * N) + 2 * (3 * N + 1) * (12 * N) + (2 * N + 1) * (8 * N + 1)


# -- cubic graphs and bisections


def test_fixture_graphs_are_cubic():
    for name, make in cubic.FIXTURES.items():
        g = make()
        assert all(len(g.neighbours(i)) == 3 for i in range(1, g.n + 1)), name
        assert len(g.edges) == 3 * g.n // 2


def test_not_cubic():
    with pytest.raises(cubic.NotCubic):
        cubic.CubicGraph.from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1)])
    with pytest.raises(cubic.NotCubic):
        cubic.parse_cubic("4 5\n1 2\n1 3\n1 4\n2 3\n2 4\n")
    g = cubic.parse_cubic(cubic.k33().to_text())
    assert g.edges == cubic.k33().edges


def test_forward_backward_neighbours():
    g = cubic.k4()
    assert g.forward(1) == [2, 3, 4] and g.backward(1) == []
    assert g.backward(4) == [1, 2, 3]


def test_min_bisection():
    k4 = cubic.k4()
    assert [k4.cut(set(b.V1)) for b in cubic.all_bisections(k4)] == [4, 4, 4]
    assert sum(1 for _ in cubic.all_bisections(cubic.k33())) == 10
    assert sum(1 for _ in cubic.all_bisections(cubic.q3())) == 35
    b, cut = cubic.min_bisection_brute(cubic.k4())
    assert cut == 4 and b.V1 == (1, 2)
    assert cubic.min_bisection_brute(cubic.k33())[1] == 5
    assert cubic.min_bisection_brute(cubic.q3())[1] == 4
    with pytest.raises(ValueError):
        cubic.Bisection([1, 2], [3]).validate(3)
    with pytest.raises(ValueError):
        cubic.Bisection([1, 2], [3, 5]).validate(4)


# -- grids


def test_grid_counts():
    g = grids.build_grid(3, 6)
    assert g.n == 18 and g.edge_count == 27
    path = grids.build_grid(1, 5)
    assert path.edge_count == 4 and max(path.degree()) == 2
    for H, W in ((2, 7), (4, 4), (5, 3)):
        assert grids.build_grid(H, W).edge_count == H * (W - 1) + W * (H - 1)


def test_composed_grid():
    small = grids.build_composed_grid(2, 1, 1, 1)
    assert small.n == 5 and len(grids.connector_edges(2, 1, 1, 1)) == 2
    sigma = grids.build_composed_grid(6, 6, 3, 6)
    assert sigma.n == 90 and sigma.edge_count == 2 * 60 + 27 + 6
    conn = grids.connector_edges(6, 6, 3, 6)
    # l^{h,6}-m^{h,1} and m^{h,6}-r^{3+h,1}
    assert conn[:2] == [(6, 37), (42, 54 + 3 * 6 + 1)]
    rng = np.random.default_rng(4)
    for _ in range(20):
        H_m = int(rng.integers(1, 5))
        H_l = H_m + int(rng.integers(1, 4))
        W_l, W_m = (int(x) for x in rng.integers(1, 6, size=2))
        assert len(grids.connector_edges(H_l, W_l, H_m, W_m)) == 2 * H_m
    with pytest.raises(ValueError):
        grids.build_composed_grid(3, 3, 3, 3)


# -- gadget construction and verification


def test_parameters_and_counts():
    assert gadget.gadget_parameters(4, 4) == (256, 16)
    assert gadget.vertex_count(4, 4) == 8_927_745 == closed_form_vertices(4, 4**4)
    for n in (4, 6, 8):
        for t in (1, 2):
            N, q = gadget.gadget_parameters(n, t)
            assert N % 2 == 0 and N >= n**t and q * n < 2 * N and 6 * N > 4 * q + 3
    with pytest.raises(gadget.GadgetError):
        gadget.gadget_parameters(4, 5)


@pytest.mark.parametrize("source,t", SMALL)
def test_small_gadgets_verify(source, t):
    g = cubic.FIXTURES[source]()
    inst = gadget.build_gadget(g, 4, t=t)
    assert not inst.faithful
    assert inst.num_vertices == closed_form_vertices(g.n, inst.N) == inst.expected_vertex_count()
    assert inst.num_edges == 2 * (inst.num_vertices - 1)
    assert len(inst.inter_edges) == g.n * 4 * inst.q + 3 * g.n + 2 * (2 * inst.N + 1)
    report = gadget.verify_gadget(inst)
    assert report.ok, [c.to_dict() for c in report.failed()]
    L, R = inst.component("L"), inst.component("R")
    assert report.red_endpoints == (f"l^{{{L.height},1}}", f"r^{{1,{R.width}}}")
    assert report.green_endpoints == ("l^{1,1}", f"r^{{{R.height},{R.width}}}")
    assert inst.manifest()["faithful"] is False


def test_build_errors():
    with pytest.raises(gadget.GadgetError):
        gadget.build_gadget(cubic.k4(), 4, t=7)
    with pytest.raises(gadget.ResourceLimitExceeded):
        gadget.build_gadget(cubic.k4(), 4, t=4, memory_cap_mb=100)


def test_memory_cap_from_environment(monkeypatch):
    monkeypatch.setenv(gadget.MEMORY_ENV, "1")
    with pytest.raises(gadget.ResourceLimitExceeded):
        gadget.build_gadget(cubic.k4(), 4, t=2)


def test_fault_injection(k4_t1):
    inst, _ = k4_t1
    red = inst.red_edges()
    broken = inst.with_edges(red=np.delete(red, len(red) // 2, axis=0))
    rep = gadget.verify_gadget(broken)
    assert not rep.ok
    assert "red_hamiltonian_path" in [c.name for c in rep.failed()]
    assert rep.failed()[0].witness is not None
    with pytest.raises(gadget.UnverifiedGadget):
        gadget.gadget_to_permutation(broken)
    green = inst.green_edges().copy()
    green[0] = green[1]  # duplicate an edge, leaving a vertex uncovered
    assert not gadget.verify_gadget(inst.with_edges(green=green)).ok


def test_vertex_names(k4_t1):
    inst, _ = k4_t1
    L = inst.component("L")
    assert inst.vertex_name(L.vid(1, 1)) == "l^{1,1}"
    G2 = inst.component("G2")
    assert inst.vertex_name(G2.vid(G2.height, 3)) == f"g_2^{{{G2.height},3}}"


def test_dump_round_trip(k4_t1):
    inst, _ = k4_t1
    g = mg.parse_graph(inst.dump_edges())
    assert g.n == inst.num_vertices and g.edge_count == inst.num_edges
    deg = g.degree()
    assert all(deg[v] + g.endpoints.count(v) == 4 for v in range(1, g.n + 1))
    big = gadget.build_gadget(cubic.k4(), 4, t=3)
    with pytest.raises(gadget.GadgetError):
        big.dump_edges()


# -- arrangement, sweep, permutation view


def test_canonical_arrangement(k4_t1):
    inst, _ = k4_t1
    b = cubic.Bisection([1, 2], [3, 4])
    arr = gadget.canonical_arrangement(inst, b)
    V = inst.num_vertices
    assert np.array_equal(np.sort(arr.order), np.arange(V))
    G1 = inst.component("G1")
    assert arr.order[0] in set(G1.col(1).tolist())
    assert [s[0] for s in arr.spans] == ["G1", "G2", "L", "M", "R", "G3", "G4"]
    at = 1
    for name, first, last in arr.spans:
        c = inst.component(name)
        assert first == at and last - first + 1 == c.size
        block = arr.order[first - 1 : last]
        assert np.all(inst.component_of(block) == inst.components.index(c))
        at = last + 1
    with pytest.raises(gadget.GadgetError):
        gadget.canonical_arrangement(inst, cubic.Bisection([1], [2]))


def test_sweep_small(k4_t1):
    inst, _ = k4_t1
    for b in cubic.all_bisections(inst.source):
        res = gadget.sweep_max_width(inst, gadget.canonical_arrangement(inst, b))
        assert 0 < res.max_width < inst.num_edges and not res.faithful
        assert res.component_max["L"] <= res.max_width


def test_width_profile_matches_multigraph(k4_t1):
    inst, _ = k4_t1
    arr = gadget.canonical_arrangement(inst, cubic.Bisection([1, 3], [2, 4]))
    g = mg.parse_graph(inst.dump_edges())
    expected = mg.width_profile(g, mg.LinearArrangement((arr.order + 1).tolist()))
    assert gadget.width_profile(inst, arr).tolist() == expected[:-1]


def test_permutation_round_trip(k4_t1):
    inst, report = k4_t1
    p = gadget.gadget_to_permutation(inst, report)
    assert p.r == inst.num_vertices
    rank = np.empty(inst.num_vertices, dtype=np.int64)
    rank[inst.red_path] = np.arange(1, inst.num_vertices + 1)
    pairs = [tuple(e) for e in rank[np.vstack([inst.red_edges(), inst.green_edges()])].tolist()]
    ends = rank[[inst.red_path[0], inst.red_path[-1], inst.green_path[0], inst.green_path[-1]]].tolist()
    relabelled = mg.Multigraph.from_edge_list(inst.num_vertices, pairs, ends)
    rebuilt = mg.from_permutation(p)
    assert rebuilt.edges == relabelled.edges
    assert sorted(rebuilt.endpoints) == sorted(relabelled.endpoints)


def test_doubled_paths_give_identity():
    path = np.array([3, 0, 2, 1])
    assert gadget.paths_to_permutation(path, path) == Permutation.identity(4)


@pytest.mark.slow
def test_faithful_k4():
    inst = gadget.build_gadget(cubic.k4(), 4, t=4)
    assert inst.faithful and inst.num_vertices == 8_927_745 and inst.k_prime == 906
    report = gadget.verify_gadget(inst)
    assert report.ok
    assert report.red_endpoints == ("l^{769,1}", "r^{1,3072}")
    assert report.green_endpoints == ("l^{1,1}", "r^{769,3072}")
    n, N = 4, 4**4
    for b in cubic.all_bisections(inst.source):
        c = inst.source.cut(set(b.V1))
        res = gadget.sweep_max_width(inst, gadget.canonical_arrangement(inst, b))
        assert res.max_width == 3 * N + 2 + 2 * n**3 + 2 * c
        outside = max(v for k, v in res.component_max.items() if k not in ("L", "R"))
        assert outside < min(res.component_max["L"], res.component_max["R"])
