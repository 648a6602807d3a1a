import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qvl.circulation import VortexNode
from qvl.errors import ContractViolation
from qvl.field import Boundary
from qvl.vortexgraph import (
    VortexGraph,
    build_global_graph,
    extract_components,
    _linearize,
)


def make_nodes(indices, dims):
    idx = np.array(sorted(indices, key=lambda t: t[0] + dims[0] * (t[1] + dims[1] * t[2])))
    return [VortexNode(index=tuple(int(c) for c in i), circulation=2 * np.pi, axis="z")
            for i in idx]


def brute_force_adjacency(nodes, dims, boundary):
    """O(N^2) oracle: two nodes are adjacent iff they differ by one step along
    one axis (with wraparound when periodic)."""
    n = len(nodes)
    adj = [set() for _ in range(n)]
    periodic = boundary is Boundary.PERIODIC
    for i in range(n):
        for j in range(i + 1, n):
            diff = []
            for a in range(3):
                d = abs(nodes[i].index[a] - nodes[j].index[a])
                if periodic:
                    d = min(d, dims[a] - d)
                diff.append(d)
            if sorted(diff) == [0, 0, 1]:
                adj[i].add(j)
                adj[j].add(i)
    return [sorted(s) for s in adj]


def random_node_set(rng, dims, count):
    total = dims[0] * dims[1] * dims[2]
    lins = rng.choice(total, size=min(count, total), replace=False)
    x = lins % dims[0]
    y = (lins // dims[0]) % dims[1]
    z = lins // (dims[0] * dims[1])
    return make_nodes(zip(x, y, z), dims)


class TestBuildGlobalGraph:
    @pytest.mark.parametrize("boundary", [Boundary.CLAMPED, Boundary.PERIODIC])
    def test_matches_brute_force_oracle(self, boundary):
        rng = np.random.default_rng(3)
        dims = (9, 7, 8)
        for _ in range(10):
            nodes = random_node_set(rng, dims, 60)
            g = build_global_graph(nodes, dims, boundary)
            assert g.adjacency == brute_force_adjacency(nodes, dims, boundary)

    def test_periodic_wrap_edge(self):
        dims = (8, 8, 8)
        nodes = make_nodes([(0, 3, 3), (7, 3, 3)], dims)
        g_per = build_global_graph(nodes, dims, Boundary.PERIODIC)
        assert g_per.adjacency == [[1], [0]]
        g_cl = build_global_graph(nodes, dims, Boundary.CLAMPED)
        assert g_cl.adjacency == [[], []]

    def test_diagonal_not_adjacent(self):
        dims = (8, 8, 8)
        nodes = make_nodes([(2, 2, 2), (3, 3, 2)], dims)
        g = build_global_graph(nodes, dims, Boundary.CLAMPED)
        assert g.adjacency == [[], []]

    def test_unsorted_input_rejected(self):
        dims = (8, 8, 8)
        nodes = [VortexNode((5, 5, 5), 2 * np.pi, "z"),
                 VortexNode((1, 1, 1), 2 * np.pi, "z")]
        with pytest.raises(ContractViolation):
            build_global_graph(nodes, dims, Boundary.CLAMPED)

    def test_bad_blocks_rejected(self):
        nodes = make_nodes([(1, 1, 1)], (8, 8, 8))
        with pytest.raises(ContractViolation):
            build_global_graph(nodes, (8, 8, 8), Boundary.CLAMPED, blocks=(0, 1, 1))
        with pytest.raises(ContractViolation):
            build_global_graph(nodes, (8, 8, 8), Boundary.CLAMPED, blocks=(9, 1, 1))

    def test_empty(self):
        g = build_global_graph([], (8, 8, 8), Boundary.CLAMPED)
        assert len(g) == 0
        assert extract_components(g) == []

    def test_positions_scale_with_spacing(self):
        nodes = make_nodes([(1, 2, 3)], (8, 8, 8))
        g = build_global_graph(nodes, (8, 8, 8), Boundary.CLAMPED, spacing=0.5)
        np.testing.assert_allclose(g.positions(), [[0.5, 1.0, 1.5]])


class TestBlockParallelEquality:
    @pytest.mark.parametrize("boundary", [Boundary.CLAMPED, Boundary.PERIODIC])
    @pytest.mark.parametrize("blocks", [(2, 2, 2), (4, 4, 4), (1, 4, 2), (3, 1, 5)])
    def test_blocked_equals_serial(self, boundary, blocks):
        rng = np.random.default_rng(11)
        dims = (12, 10, 11)
        for _ in range(5):
            nodes = random_node_set(rng, dims, 120)
            serial = build_global_graph(nodes, dims, boundary)
            blocked = build_global_graph(nodes, dims, boundary, blocks=blocks)
            assert blocked.adjacency == serial.adjacency
            assert [n.index for n in blocked.nodes] == [n.index for n in serial.nodes]


class TestExtractComponents:
    def test_two_chains(self):
        dims = (16, 8, 8)
        chain_a = [(x, 2, 2) for x in range(3)]
        chain_b = [(x, 5, 5) for x in range(8, 12)]
        nodes = make_nodes(chain_a + chain_b, dims)
        g = build_global_graph(nodes, dims, Boundary.CLAMPED)
        comps = extract_components(g)
        assert [len(c.node_ids) for c in comps] == [3, 4]
        # membership is exhaustive and disjoint, ids sorted inside a component
        seen = [i for c in comps for i in c.node_ids]
        assert sorted(seen) == list(range(len(nodes)))
        for c in comps:
            assert c.node_ids == sorted(c.node_ids)

    def test_ordered_by_min_node_id(self):
        rng = np.random.default_rng(17)
        nodes = random_node_set(rng, (10, 10, 10), 150)
        g = build_global_graph(nodes, (10, 10, 10), Boundary.CLAMPED)
        comps = extract_components(g)
        mins = [c.node_ids[0] for c in comps]
        assert mins == sorted(mins)

    def test_singletons(self):
        nodes = make_nodes([(1, 1, 1), (4, 4, 4), (6, 1, 6)], (8, 8, 8))
        g = build_global_graph(nodes, (8, 8, 8), Boundary.CLAMPED)
        assert len(extract_components(g)) == 3


@given(st.integers(0, 2 ** 31 - 1))
@settings(max_examples=25, deadline=None)
def test_property_blocked_equals_serial(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(5, 14, size=3))
    count = int(rng.integers(1, 100))
    boundary = Boundary.PERIODIC if seed % 2 else Boundary.CLAMPED
    nodes = random_node_set(rng, dims, count)
    blocks = tuple(int(b) for b in rng.integers(1, [min(4, d) + 1 for d in dims]))
    serial = build_global_graph(nodes, dims, boundary)
    blocked = build_global_graph(nodes, dims, boundary, blocks=blocks)
    assert blocked.adjacency == serial.adjacency
