"""Bitmask graphs, the named families used throughout, and composition operators.

A vertex set is a plain ``int`` bit mask: bit ``v`` is set iff vertex ``v``
belongs to the set.  Base graphs are capped at :data:`MAX_ORDER` vertices so
that every vertex set fits in one 64-bit word (which is what the compiled
kernels expect).  Graphs built only as isomorphism targets (reconfiguration
graphs, products of those) may opt out of the cap with ``limit=None``.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateEdge,
    GraphError,
    OrderOutOfRange,
    ParamOutOfRange,
    SelfLoop,
    SetOutOfRange,
    VertexOutOfRange,
)

MAX_ORDER = 64

ALL = "all"  # sentinel for add_leaves: attach leaves to every vertex


# ---------------------------------------------------------------------------
# vertex-set helpers


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    """Sorted vertex indices of ``mask``."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def symdiff_size(a: int, b: int) -> int:
    return (a ^ b).bit_count()


def format_set(mask: int) -> str:
    return "{" + ",".join(str(v) for v in members(mask)) + "}"


def check_mask(mask: int, n: int) -> None:
    if mask < 0 or mask >> n:
        raise SetOutOfRange(f"vertex set {mask:#x} has bits outside 0..{n - 1}")


# ---------------------------------------------------------------------------
# the graph type


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the open neighbourhood of ``v`` as a bit mask.
    """

    __slots__ = ("n", "adj", "name", "__dict__")

    def __init__(self, n: int, adj: Sequence[int], name: str = "", *, limit: int | None = MAX_ORDER):
        if n < 1 or (limit is not None and n > limit):
            raise OrderOutOfRange(f"order {n} outside 1..{limit}")
        if len(adj) != n:
            raise GraphError(f"adjacency has {len(adj)} rows for order {n}")
        adj = tuple(int(a) for a in adj)
        for v, row in enumerate(adj):
            if row < 0 or row >> n:
                raise VertexOutOfRange(f"row {v} references a vertex >= {n}")
            if row >> v & 1:
                raise SelfLoop(f"self-loop at vertex {v}")
            for u in members(row):
                if not adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
        self.n = n
        self.adj = adj
        self.name = name

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        name: str = "",
        *,
        limit: int | None = MAX_ORDER,
        allow_duplicates: bool = True,
    ) -> "Graph":
        if n < 1 or (limit is not None and n > limit):
            raise OrderOutOfRange(f"order {n} outside 1..{limit}")
        adj = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not allow_duplicates and adj[u] >> v & 1:
                raise DuplicateEdge(f"duplicate edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, name, limit=limit)

    def renamed(self, name: str) -> "Graph":
        return Graph(self.n, self.adj, name, limit=None)

    # -- basic queries -----------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(a.bit_count() for a in self.adj)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def min_degree(self) -> int:
        return min(self.degrees)

    @cached_property
    def size(self) -> int:
        return sum(self.degrees) // 2

    def neighbors(self, v: int) -> list[int]:
        return members(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def closed_neighborhood(self, mask: int) -> int:
        out = mask
        for v in members(mask):
            out |= self.adj[v]
        return out

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in members(self.adj[u] >> (u + 1) << (u + 1))]

    @cached_property
    def isolated(self) -> int:
        return mask_of(v for v in range(self.n) if not self.adj[v])

    @property
    def has_isolated(self) -> bool:
        return self.isolated != 0

    @cached_property
    def components(self) -> tuple[int, ...]:
        """Vertex masks of the connected components, ordered by least vertex."""
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in members(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    def induced(self, mask: int, name: str = "") -> tuple["Graph", list[int]]:
        """Induced subgraph on ``mask``; also returns the new->old vertex map."""
        verts = members(mask)
        pos = {v: i for i, v in enumerate(verts)}
        adj = [mask_of(pos[u] for u in members(self.adj[v] & mask)) for v in verts]
        return Graph(len(verts), adj, name, limit=None), verts

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        adj = [0] * self.n
        for v in range(self.n):
            adj[perm[v]] = mask_of(perm[u] for u in members(self.adj[v]))
        return Graph(self.n, adj, self.name if name is None else name, limit=None)

    @cached_property
    def adj_array(self) -> np.ndarray:
        """Adjacency rows as ``uint64`` (kernel input); base graphs only."""
        if self.n > MAX_ORDER:
            raise OrderOutOfRange(f"order {self.n} exceeds the kernel limit {MAX_ORDER}")
        return np.array(self.adj, dtype=np.uint64)

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.size}>"


def build_graph(n: int, edges: Iterable[tuple[int, int]], name: str = "") -> Graph:
    return Graph.from_edges(n, edges, name)


# ---------------------------------------------------------------------------
# named families


@dataclass(frozen=True)
class FamilySpec:
    """A named family member, e.g. ``FamilySpec("paper_Gn", (4,))``.

    ``wrap`` holds composing prefixes applied innermost-last, e.g.
    ``(("k23",), ("corona", 1))`` for K^{2,3}(G o K1).
    """

    family: str
    params: tuple[int, ...] = ()
    wrap: tuple[tuple, ...] = field(default=())

    def __str__(self) -> str:
        inner = self.family + (":" + ",".join(map(str, self.params)) if self.params else "")
        for w in reversed(self.wrap):
            if w[0] == "k23":
                inner = "k23:" + inner
            elif w[0] == "corona":
                inner = ("corona:" if w[1] == 1 else f"corona{w[1]}:") + inner
            elif w[0] == "copies":
                inner = f"copies{w[1]}:" + inner
        return inner


def path(n: int) -> Graph:
    _need(n >= 1, "path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def cycle(n: int) -> Graph:
    _need(n >= 3, "cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def complete(n: int) -> Graph:
    _need(n >= 1, "complete needs n >= 1")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)], f"K{n}")


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}; part X = 0..a-1, part Y = a..a+b-1."""
    _need(a >= 1 and b >= 1, "complete_bipartite needs a, b >= 1")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], f"K{a},{b}")


def wheel(n: int) -> Graph:
    """W_n of order n: hub 0 joined to the rim cycle 1..n-1."""
    _need(n >= 4, "wheel needs n >= 4")
    rim = n - 1
    edges = [(0, i) for i in range(1, n)]
    edges += [(1 + i, 1 + (i + 1) % rim) for i in range(rim)]
    return Graph.from_edges(n, edges, f"W{n}")


def star(t: int) -> Graph:
    """K_{1,t}: centre 0, leaves 1..t."""
    _need(t >= 1, "star needs t >= 1")
    return Graph.from_edges(t + 1, [(0, i) for i in range(1, t + 1)], f"K1,{t}")


def star_edge(t: int) -> Graph:
    """K_{1,t}(e): the star plus the edge between leaves 1 and 2."""
    _need(t >= 2, "star_edge needs t >= 2")
    g = star(t)
    return Graph.from_edges(t + 1, g.edges() + [(1, 2)], f"K1,{t}(e)")


def star_pendant(t: int) -> Graph:
    """K_{1,t}(l): the star plus vertex t+1 hanging off leaf 1."""
    _need(t >= 1, "star_pendant needs t >= 1")
    g = star(t)
    return Graph.from_edges(t + 2, g.edges() + [(1, t + 1)], f"K1,{t}(l)")


def k2t_edge(t: int) -> Graph:
    """K_{2,t}(e): K_{2,t} plus the edge inside the part of order 2."""
    _need(t >= 1, "k2t_edge needs t >= 1")
    g = complete_bipartite(2, t)
    return Graph.from_edges(t + 2, g.edges() + [(0, 1)], f"K2,{t}(e)")


def hypercube(d: int) -> Graph:
    _need(1 <= d <= 6, "hypercube needs 1 <= d <= 6")
    n = 1 << d
    edges = [(x, x | 1 << i) for x in range(n) for i in range(d) if not x >> i & 1]
    return Graph.from_edges(n, edges, f"Q{d}")


def paper_gn(n: int) -> Graph:
    """The witness family G_n with pd = upper pd = n-1 and pd_0 = 2n-2.

    Indexing: u_1..u_{n-1} are vertices 0..n-2; block S_{n,i} (i = 1..n)
    occupies vertices n-1 + (i-1)n .. n-1 + in - 1, with v^i_j at offset j-1.
    Inside a block, v^i_1..v^i_{n-1} form a clique and v^i_n is adjacent to
    all of them; u_j is adjacent to v^r_j for every block r.
    """
    _need(n >= 3, "paper_Gn needs n >= 3")
    order = n * n + n - 1
    if order > MAX_ORDER:
        raise OrderOutOfRange(f"paper_Gn({n}) has order {order} > {MAX_ORDER}")

    def v(i: int, j: int) -> int:  # 1-based block i, position j
        return n - 1 + (i - 1) * n + (j - 1)

    edges = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for p in range(j + 1, n + 1):
                edges.append((v(i, j), v(i, p)))
        for j in range(1, n):
            edges.append((j - 1, v(i, j)))
    return Graph.from_edges(order, edges, f"G{n}")


def paper_gn_parts(n: int) -> tuple[int, list[int]]:
    """Masks of T_n and of each block S_{n,1..n} in :func:`paper_gn` indexing."""
    t = (1 << (n - 1)) - 1
    blocks = [((1 << n) - 1) << (n - 1 + i * n) for i in range(n)]
    return t, blocks


def grid(a: int, b: int) -> Graph:
    """P_a [] P_b; vertex (x, y) (row x < a, column y < b) is x*b + y."""
    _need(a >= 1 and b >= 1, "grid needs a, b >= 1")
    return cartesian_product(path(a), path(b)).renamed(f"P{a}xP{b}")


def hamming(d: int, r: int, *, limit: int | None = None) -> Graph:
    """H(d, r) = K_r [] ... [] K_r (d factors); uncapped by default."""
    _need(d >= 1 and r >= 2, "hamming needs d >= 1, r >= 2")
    g = complete(r)
    for _ in range(d - 1):
        g = cartesian_product(g, complete(r), limit=limit)
    return g.renamed(f"H({d},{r})")


def _need(ok: bool, msg: str) -> None:
    if not ok:
        raise ParamOutOfRange(msg)


FAMILIES = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "wheel": (wheel, 1),
    "star": (star, 1),
    "star_edge": (star_edge, 1),
    "star_pendant": (star_pendant, 1),
    "k2t_edge": (k2t_edge, 1),
    "hypercube": (hypercube, 1),
    "paper_Gn": (paper_gn, 1),
    "grid": (grid, 2),
}


def generate(spec: FamilySpec | str) -> Graph:
    if isinstance(spec, str):
        spec = parse_family(spec)
    try:
        fn, arity = FAMILIES[spec.family]
    except KeyError:
        raise ParamOutOfRange(f"unknown family {spec.family!r}") from None
    if len(spec.params) != arity:
        raise ParamOutOfRange(f"{spec.family} takes {arity} parameter(s), got {len(spec.params)}")
    g = fn(*spec.params)
    for w in reversed(spec.wrap):
        if w[0] == "k23":
            g = k23_expansion(g)
        elif w[0] == "corona":
            g = add_leaves(g, ALL, w[1])
        elif w[0] == "copies":
            base = g
            for _ in range(w[1] - 1):
                g = disjoint_union(g, base)
            g = g.renamed(f"{w[1]}{base.name}")
    return g


_PREFIX = re.compile(r"^(k23|corona(\d*)|copies(\d+)):(.*)$")


def parse_family(text: str) -> FamilySpec:
    """Parse the ``name:arg,arg`` mini-grammar.

    ::

        spec   := prefix ":" spec | family [":" args]
        prefix := "k23" | "corona" [int] | "copies" int
        args   := int ("," int)*
    """
    wrap = []
    rest = text.strip()
    while True:
        m = _PREFIX.match(rest)
        if not m:
            break
        if m.group(1) == "k23":
            wrap.append(("k23",))
        elif m.group(1).startswith("corona"):
            wrap.append(("corona", int(m.group(2) or 1)))
        else:
            wrap.append(("copies", int(m.group(3))))
        rest = m.group(4)
    name, _, args = rest.partition(":")
    if name not in FAMILIES:
        raise ParamOutOfRange(f"unknown family {name!r}")
    try:
        params = tuple(int(a) for a in args.split(",")) if args else ()
    except ValueError:
        raise ParamOutOfRange(f"non-integer parameter in {text!r}") from None
    return FamilySpec(name, params, tuple(wrap))


# ---------------------------------------------------------------------------
# composition


def cartesian_product(g: Graph, h: Graph, *, limit: int | None = MAX_ORDER) -> Graph:
    """G [] H with vertex (x, y) at index x*|V(H)| + y."""
    nh = h.n
    n = g.n * nh
    if limit is not None and n > limit:
        raise OrderOutOfRange(f"product order {n} exceeds {limit}")
    edges = []
    for x in range(g.n):
        for y, z in h.edges():
            edges.append((x * nh + y, x * nh + z))
    for x, w in g.edges():
        for y in range(nh):
            edges.append((x * nh + y, w * nh + y))
    return Graph.from_edges(n, edges, f"{g.name}x{h.name}", limit=limit)


def disjoint_union(g: Graph, h: Graph, *, limit: int | None = MAX_ORDER) -> Graph:
    n = g.n + h.n
    if limit is not None and n > limit:
        raise OrderOutOfRange(f"union order {n} exceeds {limit}")
    adj = list(g.adj) + [row << g.n for row in h.adj]
    return Graph(n, adj, f"{g.name}+{h.name}", limit=limit)


def add_leaves(g: Graph, v: int | str, r: int) -> Graph:
    """Attach ``r`` new leaves to ``v``, or to every vertex when ``v`` is ALL.

    New vertices are appended; with ALL, leaves of vertex ``u`` come in the
    order of ``u``.
    """
    targets = list(range(g.n)) if v == ALL else [int(v)]
    for t in targets:
        if not 0 <= t < g.n:
            raise VertexOutOfRange(f"vertex {t} outside 0..{g.n - 1}")
    n = g.n + r * len(targets)
    if n > MAX_ORDER:
        raise OrderOutOfRange(f"result order {n} exceeds {MAX_ORDER}")
    edges = g.edges()
    nxt = g.n
    for t in targets:
        for _ in range(r):
            edges.append((t, nxt))
            nxt += 1
    if v == ALL:
        name = f"{g.name}o{r}K1" if r != 1 else f"{g.name}oK1"
    else:
        name = f"{g.name}+{r}leaves@{v}"
    return Graph.from_edges(n, edges, name)


def k23_expansion(g: Graph) -> Graph:
    """Replace every edge uv by three degree-2 vertices adjacent to u and v.

    Original vertices keep their indices; subdividers are appended three per
    edge in lexicographic edge order.
    """
    edges = g.edges()
    n = g.n + 3 * len(edges)
    if n > MAX_ORDER:
        raise OrderOutOfRange(f"K23 expansion has order {n} > {MAX_ORDER}")
    new_edges = []
    nxt = g.n
    for u, v in edges:
        for _ in range(3):
            new_edges += [(u, nxt), (v, nxt)]
            nxt += 1
    return Graph.from_edges(n, new_edges, f"K23({g.name})")


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class GraphStats:
    order: int
    size: int
    degree_sequence: tuple[int, ...]  # non-increasing
    max_degree: int
    min_degree: int
    component_count: int
    bipartite: bool
    diameters: tuple[int, ...]  # one per component, same order as Graph.components
    isolated: tuple[int, ...]

    @property
    def connected(self) -> bool:
        return self.component_count == 1

    @property
    def regular(self) -> bool:
        return self.max_degree == self.min_degree


def bfs_distances(g: Graph, s: int) -> dict[int, int]:
    dist = {s: 0}
    q = deque([s])
    while q:
        v = q.popleft()
        for u in members(g.adj[v]):
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    return dist


def is_bipartite(g: Graph) -> bool:
    color: dict[int, int] = {}
    for s in range(g.n):
        if s in color:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for u in members(g.adj[v]):
                if u not in color:
                    color[u] = color[v] ^ 1
                    q.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def analyze(g: Graph) -> GraphStats:
    diams = []
    for comp in g.components:
        diams.append(max(max(bfs_distances(g, v).values()) for v in members(comp)))
    return GraphStats(
        order=g.n,
        size=g.size,
        degree_sequence=tuple(sorted(g.degrees, reverse=True)),
        max_degree=g.max_degree,
        min_degree=g.min_degree,
        component_count=len(g.components),
        bipartite=is_bipartite(g),
        diameters=tuple(diams),
        isolated=tuple(members(g.isolated)),
    )


# ---------------------------------------------------------------------------
# serialisation


def to_edgelist(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str, name: str = "") -> Graph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0].split())
        edges = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    except ValueError:
        raise GraphError("malformed edge list") from None
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise GraphError(f"edge list header promises {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges, name, allow_duplicates=False)


def to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges()], "name": g.name})


def from_json(text: str | dict) -> Graph:
    obj = json.loads(text) if isinstance(text, str) else text
    try:
        return Graph.from_edges(obj["n"], [tuple(e) for e in obj["edges"]], obj.get("name", ""), allow_duplicates=False)
    except (KeyError, TypeError):
        raise GraphError("JSON graph needs integer 'n' and an 'edges' list") from None


def loads_graph(text: str, name: str = "") -> Graph:
    """Decode either serialisation, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_edgelist(text, name)

