import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st
from networkx.generators.atlas import graph_atlas_g

import oracles
from conftest import graphs
from pdrecon import graphcore as gc
from pdrecon.errors import OrderTooLargeForEnumeration, TooLargeForCanonical
from pdrecon.iso import (
    CANONICAL_MAX_ORDER,
    are_isomorphic,
    canonical_form,
    canonical_graph,
    enumerate_graphs,
    find_induced_subgraph,
    is_isomorphism,
    uniqueness_search,
)
from pdrecon.recon import build_tar, build_tj


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def shuffled(g, rng):
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


ATLAS = graph_atlas_g()


class TestCanonicalForm:
    def test_c4_labelings(self):
        forms = {canonical_form(gc.build_graph(4, e)).canon_bits for e in ([(0, 1), (1, 2), (2, 3), (3, 0)], [(0, 2), (2, 1), (1, 3), (3, 0)])}
        assert len(forms) == 1

    def test_star_vs_path(self):
        assert canonical_form(gc.star(3)).canon_bits != canonical_form(gc.path(4)).canon_bits

    def test_tar_k22_and_k22e(self):
        a = build_tar(gc.complete_bipartite(2, 2)).as_graph()
        b = build_tar(gc.k2t_edge(2)).as_graph()
        assert canonical_form(a).canon_bits == canonical_form(b).canon_bits

    @pytest.mark.parametrize(
        "g",
        [gc.hypercube(4), gc.hamming(3, 3), gc.complete_bipartite(5, 5), gc.paper_gn(3), gc.grid(3, 4), gc.wheel(8)],
        ids=lambda g: g.name,
    )
    def test_relabel_invariance(self, g):
        rng = random.Random(g.n)
        ref = canonical_form(g)
        for _ in range(100):
            assert canonical_form(shuffled(g, rng)).canon_bits == ref.canon_bits

    def test_relabel_invariance_recon_graphs(self):
        rng = random.Random(7)
        for g in (build_tar(gc.complete_bipartite(3, 3)).as_graph(), build_tj(gc.grid(5, 12)).as_graph()):
            ref = canonical_form(g).canon_bits
            for _ in range(20):
                assert canonical_form(shuffled(g, rng)).canon_bits == ref

    @given(graphs(max_n=7), st.randoms())
    def test_random_relabel(self, g, rng):
        assert canonical_form(shuffled(g, rng)).canon_bits == canonical_form(g).canon_bits

    def test_canonical_graph_is_fixed(self):
        g = gc.star_pendant(4)
        c = canonical_graph(g)
        assert canonical_graph(c) == c

    def test_hex(self):
        cf = canonical_form(gc.path(3))
        assert cf.hex.startswith("3:")

    def test_too_large(self, monkeypatch):
        import pdrecon.iso as iso

        monkeypatch.setattr(iso, "CANONICAL_MAX_ORDER", 4)
        with pytest.raises(TooLargeForCanonical):
            iso.canonical_form(gc.path(5))
        assert CANONICAL_MAX_ORDER >= 512


class TestAreIsomorphic:
    def test_witness(self):
        phi = are_isomorphic(build_tj(gc.complete_bipartite(4, 4)).as_graph(), gc.cartesian_product(gc.complete(4), gc.complete(4)))
        assert phi is not None

    def test_k23_p6(self):
        assert are_isomorphic(build_tj(gc.k23_expansion(gc.path(6))).as_graph(), gc.path(4)) is not None

    def test_different_orders(self):
        assert are_isomorphic(gc.hypercube(3), gc.complete_bipartite(3, 3)) is None

    @given(graphs(max_n=7), graphs(max_n=7))
    def test_matches_networkx(self, g, h):
        phi = are_isomorphic(g, h)
        assert (phi is not None) == nx.is_isomorphic(nxg(g), nxg(h))
        if phi is not None:
            assert is_isomorphism(g, h, phi)

    @given(graphs(max_n=8), st.randoms())
    def test_witness_on_relabel(self, g, rng):
        h = shuffled(g, rng)
        phi = are_isomorphic(g, h)
        assert phi is not None and is_isomorphism(g, h, phi)

    def test_cospectral_regular_pair(self):
        # Shrikhande graph vs the 4x4 rook graph: both 6-regular on 16 vertices
        rook = gc.cartesian_product(gc.complete(4), gc.complete(4))
        shr = gc.Graph.from_edges(16, [
            (4 * i + j, 4 * ((i + di) % 4) + (j + dj) % 4)
            for i in range(4) for j in range(4)
            for di, dj in ((0, 1), (1, 0), (1, 1))
        ])
        assert set(shr.degrees) == {6}
        assert are_isomorphic(rook, shr) is None
        assert nx.is_isomorphic(nxg(rook), nxg(shr)) is False


class TestInducedSubgraph:
    def test_cycle_in_cube(self):
        assert find_induced_subgraph(gc.cycle(4), gc.hypercube(3)) is not None
        assert find_induced_subgraph(gc.cycle(3), gc.hypercube(3)) is None

    def test_mapping_is_induced(self):
        host = gc.grid(3, 3)
        pattern = gc.path(4)
        m = find_induced_subgraph(pattern, host)
        for u in range(pattern.n):
            for v in range(pattern.n):
                if u != v:
                    assert pattern.has_edge(u, v) == host.has_edge(m[u], m[v])


class TestEnumeration:
    def test_counts(self):
        assert [sum(1 for _ in enumerate_graphs(n, dedup=True)) for n in range(1, 8)] == [1, 2, 4, 11, 34, 156, 1044]

    def test_constraints(self):
        assert sum(1 for _ in enumerate_graphs(3, connected=True, dedup=True)) == 2
        assert sum(1 for _ in enumerate_graphs(6, no_isolated=True, dedup=True)) == 122
        assert sum(1 for _ in enumerate_graphs(7, connected=True, dedup=True)) == 853

    def test_counts_against_atlas(self):
        for n in range(1, 8):
            atlas = [a for a in ATLAS if a.number_of_nodes() == n]
            ours = list(enumerate_graphs(n, dedup=True))
            assert len(ours) == len(atlas)
            conn = sum(1 for a in atlas if nx.is_connected(a))
            assert sum(1 for g in ours if g.is_connected) == conn

    def test_counts_against_orbit_counting(self):
        for n in range(1, 5):
            assert sum(1 for _ in enumerate_graphs(n, dedup=True)) == oracles.unlabeled_count_bruteforce(n)

    def test_labelled(self):
        assert sum(1 for _ in enumerate_graphs(4)) == 64
        assert sum(1 for _ in enumerate_graphs(3, connected=True)) == 4

    def test_representatives_pairwise_distinct(self):
        reps = list(enumerate_graphs(5, dedup=True))
        for i, a in enumerate(reps):
            for b in reps[i + 1:]:
                assert not nx.is_isomorphic(nxg(a), nxg(b))

    def test_limit(self):
        with pytest.raises(OrderTooLargeForEnumeration):
            next(enumerate_graphs(8))


class TestUniqueness:
    def test_k33(self):
        found = uniqueness_search(gc.complete_bipartite(3, 3), 6)
        assert len(found) == 1 and are_isomorphic(found[0], gc.complete_bipartite(3, 3)) is not None

    def test_star(self):
        found = uniqueness_search(gc.star(5), 6)
        assert len(found) == 1 and are_isomorphic(found[0], gc.star(5)) is not None

    def test_k24(self):
        found = uniqueness_search(gc.complete_bipartite(2, 4), 6)
        assert len(found) == 2
        assert any(are_isomorphic(h, gc.complete_bipartite(2, 4)) for h in found)
        assert any(are_isomorphic(h, gc.k2t_edge(4)) for h in found)
