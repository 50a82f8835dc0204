"""TAR, k-TAR and token-jumping reconfiguration graphs.

Vertices of a reconfiguration graph are X-sets of the base graph, stored as
a sorted ``uint64`` array; edges are ``(p, q)`` position pairs with
``p < q`` in lexicographic order.  Everything is immutable after build.
"""
from __future__ import annotations

import json
import os
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from . import kernels
from .errors import KBelowXNumber, NotAVertex, OrderTooLargeForExhaustive, ReconTooLarge, SearchTooLarge
from .graphcore import Graph, format_set, from_json as graph_from_json, mask_of, members, to_json as graph_to_json
from .properties import (
    MAX_EXHAUSTIVE,
    PropertyKind,
    minimal_x_sets,
    minimum_x_sets,
    x_number,
    x_table,
)

DEFAULT_CAP = int(os.environ.get("PDRECON_RECON_CAP", 1 << 22))
FULL_DIAMETER_LIMIT = 1 << 14
DIAMETER_SAMPLES = 64
CROSS_CHECK_LIMIT = 12


@dataclass(frozen=True)
class ReconModel:
    name: str  # "TAR_full", "TAR_k" or "TJ"
    k: int | None = None

    def __str__(self) -> str:
        return f"TAR_k:{self.k}" if self.name == "TAR_k" else self.name

    @classmethod
    def parse(cls, text: str) -> "ReconModel":
        name, _, k = text.partition(":")
        return cls(name, int(k) if k else None)

    @property
    def is_tar(self) -> bool:
        return self.name != "TJ"


TAR_FULL = ReconModel("TAR_full")
TJ = ReconModel("TJ")


class ReconGraph:
    def __init__(self, base: Graph, kind: PropertyKind, model: ReconModel, verts: np.ndarray, edges: np.ndarray):
        self.base = base
        self.kind = kind
        self.model = model
        self.verts = np.asarray(verts, dtype=np.uint64)
        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)

    @property
    def order(self) -> int:
        return len(self.verts)

    @property
    def size(self) -> int:
        return len(self.edges)

    def index(self, mask: int) -> int:
        pos = int(np.searchsorted(self.verts, np.uint64(mask)))
        if pos >= len(self.verts) or int(self.verts[pos]) != mask:
            raise NotAVertex(f"{format_set(mask)} is not a vertex of this reconfiguration graph")
        return pos

    def __contains__(self, mask: int) -> bool:
        try:
            self.index(mask)
        except NotAVertex:
            return False
        return True

    def sets(self) -> list[int]:
        return [int(v) for v in self.verts]

    @cached_property
    def csr(self) -> csr_matrix:
        n = self.order
        e = self.edges
        data = np.ones(2 * len(e), dtype=np.int8)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.order)

    def neighbors(self, p: int) -> list[int]:
        m = self.csr
        return sorted(int(x) for x in m.indices[m.indptr[p] : m.indptr[p + 1]])

    def as_graph(self) -> Graph:
        """The reconfiguration graph as an (uncapped) :class:`Graph`."""
        adj = [0] * self.order
        for p, q in self.edges.tolist():
            adj[p] |= 1 << q
            adj[q] |= 1 << p
        return Graph(self.order, adj, f"{self.model}({self.base.name})", limit=None)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ReconGraph)
            and self.base == other.base
            and self.kind == other.kind
            and self.model == other.model
            and np.array_equal(self.verts, other.verts)
            and np.array_equal(self.edges, other.edges)
        )

    def __repr__(self) -> str:
        return f"<ReconGraph {self.model} {self.kind.value}({self.base.name or self.base.n}) order={self.order} size={self.size}>"


# ---------------------------------------------------------------------------
# construction


def _cap_check(count: int, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if count > cap:
        raise ReconTooLarge(f"reconfiguration graph would have {count} vertices (cap {cap})")


def upward_closure(masks, n: int) -> np.ndarray:
    """Boolean table of every superset of some mask in ``masks``."""
    table = np.zeros(1 << n, dtype=bool)
    table[np.asarray(masks, dtype=np.int64)] = True
    for v in range(n):
        view = table.reshape(-1, 2, 1 << v)
        view[:, 1, :] |= view[:, 0, :]
    return table


def tar_edges(verts: np.ndarray, n: int) -> np.ndarray:
    """TAR edges: pairs of sets differing in exactly one vertex."""
    parts = []
    for v in range(n):
        bit = np.uint64(1 << v)
        upper = np.nonzero((verts & bit) != 0)[0]
        if not len(upper):
            continue
        child = verts[upper] ^ bit
        pos = np.minimum(np.searchsorted(verts, child), len(verts) - 1)
        ok = verts[pos] == child
        parts.append(np.stack([pos[ok], upper[ok]], axis=1))
    if not parts:
        return np.zeros((0, 2), dtype=np.int64)
    e = np.concatenate(parts).astype(np.int64)
    return e[np.lexsort((e[:, 1], e[:, 0]))]


def _tar_table(g: Graph, kind: PropertyKind, method: str) -> np.ndarray:
    if g.n > MAX_EXHAUSTIVE:
        raise OrderTooLargeForExhaustive(f"TAR construction limited to n <= {MAX_EXHAUSTIVE}")
    if method == "direct":
        return x_table(g, kind)
    return upward_closure(minimal_x_sets(g, kind).sets, g.n)


def build_tar(
    g: Graph,
    kind: PropertyKind = PropertyKind.POWER_DOMINATION,
    k: int | None = None,
    *,
    cap: int | None = None,
    method: str = "closure",
    cross_check: bool | None = None,
) -> ReconGraph:
    """TAR graph on the X-sets of size <= k (all X-sets when ``k`` is None).

    ``method="closure"`` builds the vertex set as the up-closure of the
    minimal X-sets; ``method="direct"`` scans all 2^n subsets.  For
    n <= 12 the closure result is compared with the direct scan unless
    ``cross_check=False``.
    """
    kk = g.n if k is None else k
    xn = x_number(g, kind)
    if kk < xn:
        raise KBelowXNumber(f"k={kk} is below X(G)={xn}")
    table = _tar_table(g, kind, method)
    if cross_check is None:
        cross_check = method == "closure" and g.n <= CROSS_CHECK_LIMIT
    if cross_check and not np.array_equal(table, x_table(g, kind)):
        raise RuntimeError("closure-from-minimal-sets disagrees with the direct subset scan")
    verts = np.nonzero(table)[0].astype(np.uint64)
    if kk < g.n:
        verts = verts[np.bitwise_count(verts) <= kk]
    _cap_check(len(verts), cap)
    model = TAR_FULL if k is None else ReconModel("TAR_k", kk)
    return ReconGraph(g, kind, model, verts, tar_edges(verts, g.n))


def tj_edges(sets: list[int]) -> np.ndarray:
    """Pairs of equal-size sets differing by one exchanged vertex.

    Two such sets share exactly one common subset of size one less, so
    bucketing by those subsets lists every edge exactly once.
    """
    buckets: dict[int, list[int]] = defaultdict(list)
    for p, s in enumerate(sets):
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            buckets[s ^ low].append(p)
    pairs = [(a, b) for group in buckets.values() for i, a in enumerate(group) for b in group[i + 1 :]]
    pairs.sort()
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def build_tj(g: Graph, kind: PropertyKind = PropertyKind.POWER_DOMINATION, *, cap: int | None = None) -> ReconGraph:
    sets = list(minimum_x_sets(g, kind).sets)
    _cap_check(len(sets), cap)
    return ReconGraph(g, kind, TJ, np.array(sets, dtype=np.uint64), tj_edges(sets))


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class ReconMetrics:
    order: int
    size: int
    max_degree: int
    min_degree: int
    component_count: int
    diameter: int | None  # None when disconnected
    bipartite: bool
    diameter_sampled: bool = False

    @property
    def connected(self) -> bool:
        return self.component_count == 1

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "size": self.size,
            "max_degree": self.max_degree,
            "min_degree": self.min_degree,
            "component_count": self.component_count,
            "diameter": self.diameter,
            "bipartite": self.bipartite,
            "diameter_sampled": self.diameter_sampled,
        }


def _eccentricities(r: ReconGraph, sources: np.ndarray) -> int:
    best = 0
    for lo in range(0, len(sources), 256):
        d = shortest_path(r.csr, method="D", unweighted=True, indices=sources[lo : lo + 256])
        best = max(best, int(d.max()))
    return best


def _is_bipartite(r: ReconGraph) -> bool:
    e = r.edges
    if not len(e):
        return True
    parity = np.bitwise_count(r.verts) & 1
    if np.all(parity[e[:, 0]] != parity[e[:, 1]]):
        return True
    # parity colouring failed; fall back to a BFS 2-colouring
    color = np.full(r.order, -1, dtype=np.int64)
    m = r.csr
    for s in range(r.order):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in m.indices[m.indptr[v] : m.indptr[v + 1]]:
                if color[u] < 0:
                    color[u] = color[v] ^ 1
                    stack.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def recon_metrics(r: ReconGraph) -> ReconMetrics:
    if r.order == 0:
        return ReconMetrics(0, 0, 0, 0, 0, None, True)
    ncomp, _ = connected_components(r.csr, directed=False)
    deg = r.degrees
    diameter = None
    sampled = False
    if ncomp == 1:
        if r.order <= FULL_DIAMETER_LIMIT:
            diameter = _eccentricities(r, np.arange(r.order))
        else:
            sampled = True
            src = np.unique(np.linspace(0, r.order - 1, DIAMETER_SAMPLES).astype(np.int64))
            diameter = _eccentricities(r, src)
    return ReconMetrics(
        order=r.order,
        size=r.size,
        max_degree=int(deg.max()),
        min_degree=int(deg.min()),
        component_count=int(ncomp),
        diameter=diameter,
        bipartite=_is_bipartite(r),
        diameter_sampled=sampled,
    )


def tar_distance(r: ReconGraph, s: int, t: int) -> tuple[int | None, int]:
    """(BFS distance, |S symdiff S'|); BFS distance is None if unreachable."""
    p, q = r.index(s), r.index(t)
    d = shortest_path(r.csr, method="D", unweighted=True, indices=[p])[0, q]
    return (None if np.isinf(d) else int(d)), (s ^ t).bit_count()


def all_pair_distances(r: ReconGraph) -> np.ndarray:
    return shortest_path(r.csr, method="D", unweighted=True)


# ---------------------------------------------------------------------------
# thresholds and hypercubes


@dataclass(frozen=True)
class Thresholds:
    under_x0: int
    x0: int
    connected_by_k: dict[int, bool]


def connectivity_thresholds(
    g: Graph, kind: PropertyKind = PropertyKind.POWER_DOMINATION, *, cap: int | None = None
) -> Thresholds:
    """Least k with k-TAR connected, and least k0 with every k >= k0 connected."""
    table = _tar_table(g, kind, "closure")
    verts = np.nonzero(table)[0].astype(np.uint64)
    _cap_check(len(verts), cap)
    flags = kernels.tar_connectivity(verts, g.n)
    xn = x_number(g, kind)
    by_k = {k: bool(flags[k]) for k in range(xn, g.n + 1)}
    disconnected = [k for k, ok in by_k.items() if not ok]
    x0 = max(disconnected) + 1 if disconnected else xn
    under = min(k for k, ok in by_k.items() if ok)
    return Thresholds(under, x0, by_k)


HYPERCUBE_SEARCH_DIM = 4
HYPERCUBE_SEARCH_ORDER = 1 << 12


def hypercube_dimension(g: Graph, kind: PropertyKind = PropertyKind.POWER_DOMINATION, mode: str = "formula") -> int:
    """Largest t such that the full TAR graph has an induced Q_t."""
    if mode == "formula":
        return g.n - x_number(g, kind)
    if mode != "search":
        raise ValueError(f"mode must be 'formula' or 'search', not {mode!r}")
    from .graphcore import hypercube
    from .iso import find_induced_subgraph

    if g.n - 1 > HYPERCUBE_SEARCH_DIM:
        raise SearchTooLarge(f"search mode certifies dimensions <= {HYPERCUBE_SEARCH_DIM} only (n-1 = {g.n - 1})")
    r = build_tar(g, kind)
    if r.order > HYPERCUBE_SEARCH_ORDER:
        raise SearchTooLarge(f"TAR order {r.order} exceeds {HYPERCUBE_SEARCH_ORDER}")
    host = r.as_graph()
    for t in range(g.n - 1, 0, -1):
        if find_induced_subgraph(hypercube(t), host) is not None:
            return t
    return 0


# ---------------------------------------------------------------------------
# export


def to_dot(r: ReconGraph) -> str:
    lines = [f'graph "{r.model} {r.kind.value}" {{']
    for p, s in enumerate(r.sets()):
        lines.append(f'  {p} [label="{format_set(s)}"];')
    for p, q in r.edges.tolist():
        lines.append(f"  {p} -- {q};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(r: ReconGraph) -> str:
    return json.dumps(
        {
            "base": json.loads(graph_to_json(r.base)),
            "model": str(r.model),
            "kind": r.kind.value,
            "verts": [members(s) for s in r.sets()],
            "edges": r.edges.tolist(),
        }
    )


def from_json(text: str) -> ReconGraph:
    obj = json.loads(text)
    base = graph_from_json(obj["base"])
    verts = np.array([mask_of(v) for v in obj["verts"]], dtype=np.uint64)
    return ReconGraph(base, PropertyKind.parse(obj["kind"]), ReconModel.parse(obj["model"]), verts, np.array(obj["edges"], dtype=np.int64))
