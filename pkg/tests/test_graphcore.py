import json

import networkx as nx
import pytest
from hypothesis import given

from conftest import graphs
from pdrecon import graphcore as gc
from pdrecon.errors import DuplicateEdge, GraphError, OrderOutOfRange, ParamOutOfRange, SelfLoop, VertexOutOfRange


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def nx_iso(g, h):
    return nx.is_isomorphic(nxg(g), nxg(h))


class TestBuildGraph:
    def test_k2(self):
        g = gc.build_graph(2, [(0, 1)])
        assert g.edges() == [(0, 1)] and g.adj == (0b10, 0b01)

    def test_c4(self):
        g = gc.build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert g.degrees == (2, 2, 2, 2) and g.is_connected
        assert g == gc.cycle(4)

    def test_self_loop(self):
        with pytest.raises(SelfLoop):
            gc.build_graph(3, [(0, 0)])

    def test_range_errors(self):
        with pytest.raises(OrderOutOfRange):
            gc.build_graph(0, [])
        with pytest.raises(OrderOutOfRange):
            gc.build_graph(65, [])
        with pytest.raises(VertexOutOfRange):
            gc.build_graph(3, [(0, 3)])

    def test_asymmetric_adjacency_rejected(self):
        with pytest.raises(GraphError):
            gc.Graph(2, [0b10, 0])

    def test_stray_high_bits_rejected(self):
        with pytest.raises(GraphError):
            gc.Graph(2, [0b110, 0b1])

    @given(graphs())
    def test_invariants(self, g):
        for v in range(g.n):
            assert not g.adj[v] >> v & 1
            assert g.adj[v] >> g.n == 0
            for u in gc.members(g.adj[v]):
                assert g.adj[u] >> v & 1


class TestGenerators:
    def test_paper_gn_order_and_degrees(self):
        for n in range(3, 6):
            g = gc.paper_gn(n)
            assert g.n == n * n + n - 1
            t, blocks = gc.paper_gn_parts(n)
            assert gc.members(t) == list(range(n - 1))
            for j in range(n - 1):
                assert g.degree(j) == n
            for block in blocks:
                vs = gc.members(block)
                assert len(vs) == n
                assert [g.degree(v) for v in vs] == [n] * (n - 1) + [n - 1]

    def test_paper_gn4_figure_order(self):
        assert gc.generate("paper_Gn:4").n == 19

    def test_k33(self):
        g = gc.generate("complete_bipartite:3,3")
        assert g.n == 6 and set(g.degrees) == {3}

    def test_star_edge_degrees(self):
        assert sorted(gc.star_edge(4).degrees, reverse=True) == [4, 2, 2, 1, 1]

    def test_star_pendant_and_k2t_edge(self):
        g = gc.star_pendant(3)
        assert g.n == 5 and sorted(g.degrees) == [1, 1, 1, 2, 3]
        h = gc.k2t_edge(3)
        assert h.n == 5 and h.has_edge(0, 1) and h.size == 7

    def test_hypercube_is_product_of_k2(self):
        k2 = gc.complete(2)
        for d in range(1, 6):
            prod = k2
            for _ in range(d - 1):
                prod = gc.cartesian_product(prod, k2)
            assert nx_iso(gc.hypercube(d), prod)

    def test_hamming(self):
        h = gc.hamming(2, 3)
        assert h.n == 9 and set(h.degrees) == {4}
        assert nx_iso(h, gc.cartesian_product(gc.complete(3), gc.complete(3)))

    def test_param_ranges(self):
        for spec in ("wheel:3", "cycle:2", "paper_Gn:2", "nosuch:3", "path", "path:x"):
            with pytest.raises(ParamOutOfRange):
                gc.generate(spec)

    def test_against_networkx_generators(self):
        assert nx.is_isomorphic(nxg(gc.path(7)), nx.path_graph(7))
        assert nx.is_isomorphic(nxg(gc.cycle(7)), nx.cycle_graph(7))
        assert nx.is_isomorphic(nxg(gc.wheel(6)), nx.wheel_graph(6))
        assert nx.is_isomorphic(nxg(gc.grid(3, 4)), nx.grid_2d_graph(3, 4))
        assert nx.is_isomorphic(nxg(gc.complete_bipartite(2, 5)), nx.complete_bipartite_graph(2, 5))

    def test_grid_indexing(self):
        g = gc.grid(5, 12)
        assert g.n == 60
        assert g.has_edge(0 * 12 + 3, 0 * 12 + 4) and g.has_edge(1 * 12 + 3, 2 * 12 + 3)


class TestComposition:
    def test_k2_square(self):
        assert nx_iso(gc.cartesian_product(gc.complete(2), gc.complete(2)), gc.cycle(4))

    def test_grid_product(self):
        g = gc.cartesian_product(gc.path(5), gc.path(12))
        assert g.n == 60 and g == gc.grid(5, 12)

    def test_rook_graph(self):
        g = gc.cartesian_product(gc.complete(3), gc.complete(3))
        assert g.n == 9 and set(g.degrees) == {4}

    def test_product_order_cap(self):
        with pytest.raises(OrderOutOfRange):
            gc.cartesian_product(gc.path(9), gc.path(9))
        assert gc.cartesian_product(gc.path(9), gc.path(9), limit=None).n == 81

    def test_disjoint_union(self):
        g = gc.disjoint_union(gc.complete(2), gc.complete(2))
        assert g.n == 4 and len(g.components) == 2
        h = gc.disjoint_union(gc.cycle(3), gc.complete(1))
        assert h.n == 4 and gc.members(h.isolated) == [3]
        three = gc.disjoint_union(g, gc.complete(2))
        assert three.n == 6 and len(three.components) == 3

    def test_add_leaves(self):
        assert gc.add_leaves(gc.complete(3), gc.ALL, 1).n == 6
        assert gc.add_leaves(gc.complete(2), gc.ALL, 2).n == 6
        g = gc.add_leaves(gc.path(2), 0, 3)
        assert g.n == 5 and g.degree(0) == 4

    def test_k23_expansion(self):
        assert nx_iso(gc.k23_expansion(gc.complete(2)), gc.complete_bipartite(2, 3))
        c3 = gc.k23_expansion(gc.cycle(3))
        assert c3.n == 12 and c3.degrees[:3] == (6, 6, 6)
        base = gc.add_leaves(gc.complete(3), gc.ALL, 1)
        assert gc.k23_expansion(base).n == 24

    def test_k23_subdivider_order(self):
        g = gc.k23_expansion(gc.path(3))  # edges (0,1), (1,2)
        assert [gc.members(g.adj[v]) for v in range(3, 9)] == [[0, 1]] * 3 + [[1, 2]] * 3

    @given(graphs(max_n=6))
    def test_k23_degrees(self, g):
        h = gc.k23_expansion(g)
        assert h.n == g.n + 3 * g.size
        assert all(h.degree(v) == 3 * g.degree(v) for v in range(g.n))
        assert all(h.degree(v) == 2 for v in range(g.n, h.n))

    def test_family_grammar(self):
        g = gc.generate("k23:corona:complete:3")
        assert g.n == 24
        assert gc.generate("copies3:complete:2").n == 6
        assert gc.generate("corona2:path:3").n == 9
        spec = gc.parse_family("k23:corona:complete:4")
        assert str(spec) == "k23:corona:complete:4"


class TestAnalyze:
    def test_c5(self):
        s = gc.analyze(gc.cycle(5))
        assert (s.max_degree, s.min_degree, s.connected, s.bipartite, s.diameters) == (2, 2, True, False, (2,))

    def test_k33(self):
        s = gc.analyze(gc.complete_bipartite(3, 3))
        assert s.regular and s.bipartite and s.diameters == (2,)

    def test_gn4(self):
        s = gc.analyze(gc.paper_gn(4))
        assert s.connected and s.max_degree == 4

    @given(graphs())
    def test_matches_networkx(self, g):
        s = gc.analyze(g)
        h = nxg(g)
        assert s.component_count == nx.number_connected_components(h)
        assert s.bipartite == nx.is_bipartite(h)
        diams = sorted(nx.diameter(h.subgraph(c)) for c in nx.connected_components(h))
        assert sorted(s.diameters) == diams


class TestSerialisation:
    @given(graphs())
    def test_edgelist_roundtrip(self, g):
        text = gc.to_edgelist(g)
        assert gc.from_edgelist(text) == g
        assert gc.to_edgelist(gc.from_edgelist(text)) == text

    @given(graphs())
    def test_json_roundtrip(self, g):
        text = gc.to_json(g)
        assert gc.from_json(text) == g and gc.to_json(gc.from_json(text)) == text
        assert gc.loads_graph(text) == g

    def test_edgelist_rejects(self):
        with pytest.raises(DuplicateEdge):
            gc.from_edgelist("3 2\n0 1\n1 0\n")
        with pytest.raises(SelfLoop):
            gc.from_edgelist("3 1\n1 1\n")
        with pytest.raises(GraphError):
            gc.from_edgelist("3 2\n0 1\n")

    def test_json_schema(self):
        obj = json.loads(gc.to_json(gc.path(3)))
        assert obj == {"n": 3, "edges": [[0, 1], [1, 2]], "name": "P3"}
