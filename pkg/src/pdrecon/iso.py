"""Canonical labelling, isomorphism witnesses and small-graph enumeration.

The canonical form is the lexicographically least upper-triangle adjacency
code over the leaves of an individualisation-refinement search tree.
Colour refinement orders cells by invariant signatures only, so the tree
is labelling-independent.  Subtrees are pruned with automorphisms found
from pairs of leaves that produce the same code.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .errors import OrderTooLargeForEnumeration, TooLargeForCanonical
from .graphcore import Graph, is_bipartite, members

CANONICAL_MAX_ORDER = 4096
ENUMERATION_MAX_ORDER = 7


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    canon_bits: int
    relabeling: tuple[int, ...]  # relabeling[v] = canonical label of v

    @property
    def hex(self) -> str:
        width = max(1, (self.n * (self.n - 1) // 2 + 3) // 4)
        return f"{self.n}:{self.canon_bits:0{width}x}"

    def key(self) -> tuple[int, int]:
        return (self.n, self.canon_bits)


def _refine(nbrs: list[list[int]], colors: list[int]) -> list[int]:
    """Equitable refinement; returns colour ranks 0..c-1."""
    ncolors = -1
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in nbrs[v]))) for v in range(len(nbrs))]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncolors:
            return colors
        ncolors = len(rank)


def _encode(adj: tuple[int, ...], perm: list[int]) -> int:
    n = len(adj)
    rows = [0] * n
    for v in range(n):
        row = 0
        for u in members(adj[v]):
            row |= 1 << perm[u]
        rows[perm[v]] = row
    code = 0
    for i in range(n - 1):
        code = (code << (n - 1 - i)) | (rows[i] >> (i + 1))
    return code


class _Search:
    def __init__(self, g: Graph):
        self.adj = g.adj
        self.nbrs = [members(a) for a in g.adj]
        self.best_code: int | None = None
        self.best_perm: list[int] | None = None
        self.generators: list[list[int]] = []

    def run(self) -> tuple[int, list[int]]:
        colors = _refine(self.nbrs, [len(nb) for nb in self.nbrs])
        self._visit(colors, [])
        assert self.best_code is not None and self.best_perm is not None
        return self.best_code, self.best_perm

    def _visit(self, colors: list[int], path: list[int]) -> None:
        n = len(colors)
        if len(set(colors)) == n:
            code = _encode(self.adj, colors)
            if self.best_code is None or code < self.best_code:
                self.best_code, self.best_perm = code, colors
            elif code == self.best_code:
                inv = [0] * n
                for v, lab in enumerate(self.best_perm):
                    inv[lab] = v
                self.generators.append([inv[colors[v]] for v in range(n)])
            return
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = next(cells[c] for c in sorted(cells) if len(cells[c]) > 1)
        tried: list[int] = []
        for v in target:
            if tried and self._same_orbit(v, tried, path):
                continue
            tried.append(v)
            child = [2 * c + (0 if u == v else 1) for u, c in enumerate(colors)]
            self._visit(_refine(self.nbrs, child), path + [v])

    def _same_orbit(self, v: int, tried: list[int], path: list[int]) -> bool:
        gens = [g for g in self.generators if all(g[p] == p for p in path)]
        if not gens:
            return False
        parent = list(range(len(self.adj)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for x, y in enumerate(g):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
        rv = find(v)
        return any(find(t) == rv for t in tried)


def canonical_form(g: Graph) -> CanonicalForm:
    if g.n > CANONICAL_MAX_ORDER:
        raise TooLargeForCanonical(f"order {g.n} exceeds {CANONICAL_MAX_ORDER}")
    limit = sys.getrecursionlimit()
    if limit < g.n + 200:
        sys.setrecursionlimit(g.n + 200)
    code, perm = _Search(g).run()
    return CanonicalForm(g.n, code, tuple(perm))


def canonical_graph(g: Graph) -> Graph:
    """The canonical representative: ``g`` relabelled by its canonical form."""
    cf = canonical_form(g)
    return g.relabel(cf.relabeling, name=g.name)


def _quick_invariants(g: Graph) -> tuple:
    return (g.n, g.size, tuple(sorted(g.degrees)))


def are_isomorphic(g: Graph, h: Graph) -> list[int] | None:
    """A verified bijection ``phi`` (``phi[v]`` in H for v in G), or None."""
    if _quick_invariants(g) != _quick_invariants(h):
        return None
    if is_bipartite(g) != is_bipartite(h):
        return None
    cg, ch = canonical_form(g), canonical_form(h)
    if cg.canon_bits != ch.canon_bits:
        return None
    inv_h = [0] * h.n
    for v, lab in enumerate(ch.relabeling):
        inv_h[lab] = v
    phi = [inv_h[cg.relabeling[v]] for v in range(g.n)]
    if not is_isomorphism(g, h, phi):
        raise RuntimeError("canonical labelling produced an invalid isomorphism")
    return phi


def is_isomorphism(g: Graph, h: Graph, phi: list[int]) -> bool:
    if g.n != h.n or sorted(phi) != list(range(h.n)):
        return False
    for v in range(g.n):
        image = 0
        for u in members(g.adj[v]):
            image |= 1 << phi[u]
        if image != h.adj[phi[v]]:
            return False
    return True


def find_induced_subgraph(pattern: Graph, host: Graph) -> list[int] | None:
    """Injective map from pattern into host preserving adjacency and non-adjacency."""
    order = _bfs_order(pattern)
    k = len(order)
    mapping = [-1] * pattern.n
    used = 0
    host_deg = host.degrees

    def extend(i: int) -> bool:
        nonlocal used
        if i == k:
            return True
        p = order[i]
        cand = (1 << host.n) - 1
        for q in range(pattern.n):
            if mapping[q] < 0:
                continue
            if pattern.adj[p] >> q & 1:
                cand &= host.adj[mapping[q]]
            else:
                cand &= ~host.adj[mapping[q]]
        cand &= ~used
        need = pattern.degree(p)
        for x in members(cand):
            if host_deg[x] < need:
                continue
            mapping[p] = x
            used |= 1 << x
            if extend(i + 1):
                return True
            used &= ~(1 << x)
            mapping[p] = -1
        return False

    return list(mapping) if extend(0) else None


def _bfs_order(g: Graph) -> list[int]:
    seen: list[int] = []
    mark = 0
    for s in sorted(range(g.n), key=lambda v: -g.degree(v)):
        if mark >> s & 1:
            continue
        queue = [s]
        mark |= 1 << s
        while queue:
            v = queue.pop(0)
            seen.append(v)
            for u in members(g.adj[v] & ~mark):
                mark |= 1 << u
                queue.append(u)
    return seen


# ---------------------------------------------------------------------------
# enumeration


def _graph_from_mask(n: int, mask: int, pairs: list[tuple[int, int]]) -> Graph:
    adj = [0] * n
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return Graph(n, adj)


@lru_cache(maxsize=None)
def _unlabeled(n: int) -> tuple[Graph, ...]:
    """One canonical representative per isomorphism class on n vertices.

    Each class on n vertices contains a graph whose last vertex, deleted,
    leaves a representative on n-1 vertices; so extending every (n-1)-class
    by a new vertex in all 2^(n-1) ways reaches every class.
    """
    if n == 1:
        return (Graph(1, [0]),)
    seen: dict[int, Graph] = {}
    for rep in _unlabeled(n - 1):
        for nb in range(1 << (n - 1)):
            adj = [a | ((nb >> v & 1) << (n - 1)) for v, a in enumerate(rep.adj)] + [nb]
            g = Graph(n, adj)
            cf = canonical_form(g)
            if cf.canon_bits not in seen:
                seen[cf.canon_bits] = g.relabel(cf.relabeling, name="")
    return tuple(seen[c] for c in sorted(seen))


def enumerate_graphs(
    n: int, *, connected: bool = False, no_isolated: bool = False, dedup: bool = False
) -> Iterator[Graph]:
    """Graphs on n vertices; all labelled ones, or one per class if ``dedup``."""
    if not 1 <= n <= ENUMERATION_MAX_ORDER:
        raise OrderTooLargeForEnumeration(f"enumeration supports 1 <= n <= {ENUMERATION_MAX_ORDER}")
    if dedup:
        source: Iterator[Graph] = iter(_unlabeled(n))
    else:
        pairs = list(combinations(range(n), 2))
        source = (_graph_from_mask(n, m, pairs) for m in range(1 << len(pairs)))
    for g in source:
        if connected and not g.is_connected:
            continue
        if no_isolated and g.has_isolated:
            continue
        yield g


def uniqueness_search(target: Graph, n: int, kind=None) -> list[Graph]:
    """All isolate-free graphs of order n whose TAR graph matches target's."""
    import numpy as np

    from .properties import PropertyKind, x_table
    from .recon import build_tar

    kind = PropertyKind.POWER_DOMINATION if kind is None else kind
    ref = build_tar(target, kind)
    ref_graph = ref.as_graph()
    ref_deg = sorted(ref.degrees.tolist())
    ref_cf = None
    out = []
    for h in enumerate_graphs(n, no_isolated=True, dedup=True):
        if int(np.count_nonzero(x_table(h, kind))) != ref.order:
            continue
        cand = build_tar(h, kind, cross_check=False)
        if cand.size != ref.size or sorted(cand.degrees.tolist()) != ref_deg:
            continue
        if ref_cf is None:
            ref_cf = canonical_form(ref_graph)
        if canonical_form(cand.as_graph()).canon_bits == ref_cf.canon_bits:
            out.append(h)
    return out
