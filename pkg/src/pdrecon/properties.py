"""Monotone vertex-set properties: domination, power domination, zero forcing.

Every property here is closed under supersets, excludes the empty set,
decomposes over components, and (without isolated vertices) accepts any
set of n-1 vertices; :func:`validate_axioms` checks this exhaustively on a
given graph.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np

from . import kernels
from .errors import OrderTooLargeForExhaustive
from .graphcore import Graph, check_mask, mask_of, members

MAX_EXHAUSTIVE = 26  # largest order for full 2^n scans
AXIOM_MAX_ORDER = 20


class PropertyKind(Enum):
    DOMINATION = "dom"
    POWER_DOMINATION = "pd"
    ZERO_FORCING = "zf"

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def parse(cls, text: "str | PropertyKind") -> "PropertyKind":
        if isinstance(text, PropertyKind):
            return text
        key = text.strip().lower()
        for k in cls:
            if key in (k.value, k.name.lower()):
                return k
        raise ValueError(f"unknown property kind {text!r}")


_CODES = {
    PropertyKind.DOMINATION: kernels.DOM,
    PropertyKind.POWER_DOMINATION: kernels.PD,
    PropertyKind.ZERO_FORCING: kernels.ZF,
}

PD = PropertyKind.POWER_DOMINATION
DOM = PropertyKind.DOMINATION
ZF = PropertyKind.ZERO_FORCING


# ---------------------------------------------------------------------------
# observation


@dataclass(frozen=True)
class ObservationTrace:
    """Layered record of the observation process started from ``start``.

    ``layers[i]`` is the set observed after round ``i``; ``layers[1]`` is
    the closed neighbourhood (power domination) or the first forcing round
    (zero forcing).  ``new_per_round[i] = layers[i] - layers[i-1]`` with
    ``new_per_round[0] = start``.
    """

    start: int
    layers: tuple[int, ...]
    new_per_round: tuple[int, ...]
    success: bool

    @property
    def rounds(self) -> int:
        return len(self.layers) - 1

    @property
    def final(self) -> int:
        return self.layers[-1]


def _forcing_round(g: Graph, obs: int) -> int:
    new = 0
    for v in members(obs):
        un = g.adj[v] & ~obs
        if un and not un & (un - 1):
            new |= un
    return new


def propagate(g: Graph, s: int, kind: PropertyKind = PD) -> ObservationTrace:
    """Run the observation rounds from ``s`` with simultaneous semantics."""
    check_mask(s, g.n)
    layers = [s]
    if kind is ZF:
        obs = s
    else:
        obs = g.closed_neighborhood(s)
        layers.append(obs)
    if kind is not DOM:
        while obs != g.full:
            new = _forcing_round(g, obs)
            if not new:
                break
            obs |= new
            layers.append(obs)
    news = [s] + [layers[i] & ~layers[i - 1] for i in range(1, len(layers))]
    return ObservationTrace(s, tuple(layers), tuple(news), obs == g.full)


def is_x_set(g: Graph, s: int, kind: PropertyKind = PD) -> bool:
    check_mask(s, g.n)
    return kernels.closure(g.adj_array, g.n, s, kind.code) == g.full


# ---------------------------------------------------------------------------
# set families


@dataclass(frozen=True)
class SetFamily:
    sets: tuple[int, ...]
    role: str  # "minimal" | "minimum" | "up_to_k"
    kind: PropertyKind
    k: int | None = field(default=None)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, mask: int) -> bool:
        return mask in self._lookup

    @cached_property
    def _lookup(self) -> frozenset[int]:
        return frozenset(self.sets)

    def as_lists(self) -> list[list[int]]:
        return [members(s) for s in self.sets]

    def cardinalities(self) -> list[int]:
        return [s.bit_count() for s in self.sets]

    def to_json(self) -> str:
        role = self.role if self.k is None else f"{self.role}:{self.k}"
        return json.dumps({"kind": self.kind.value, "role": role, "sets": self.as_lists()})

    @classmethod
    def from_json(cls, text: str) -> "SetFamily":
        obj = json.loads(text)
        role, _, k = obj["role"].partition(":")
        sets = tuple(sorted(mask_of(s) for s in obj["sets"]))
        return cls(sets, role, PropertyKind.parse(obj["kind"]), int(k) if k else None)


def _sets_of_size(g: Graph, kind: PropertyKind, c: int, avoid=()) -> np.ndarray:
    return kernels.xsets_of_size(g.adj_array, g.n, kind.code, c, np.asarray(avoid, dtype=np.uint64))


@lru_cache(maxsize=2048)
def minimum_x_sets(g: Graph, kind: PropertyKind = PD) -> SetFamily:
    """All X-sets of minimum cardinality, found by increasing size."""
    for c in range(1, g.n + 1):
        found = _sets_of_size(g, kind, c)
        if len(found):
            return SetFamily(tuple(int(x) for x in found), "minimum", kind)
    raise AssertionError("V(G) is always an X-set")


def x_number(g: Graph, kind: PropertyKind = PD) -> int:
    return minimum_x_sets(g, kind).sets[0].bit_count()


@lru_cache(maxsize=2048)
def minimal_x_sets(g: Graph, kind: PropertyKind = PD) -> SetFamily:
    """All inclusion-minimal X-sets.

    Sizes are scanned upward and every candidate containing an already-found
    minimal set is skipped; by monotonicity a surviving X-set has no proper
    X-subset, so it is minimal.
    """
    if g.n > MAX_EXHAUSTIVE:
        raise OrderTooLargeForExhaustive(f"minimal-set enumeration limited to n <= {MAX_EXHAUSTIVE}")
    found: list[int] = []
    for c in range(1, g.n + 1):
        new = _sets_of_size(g, kind, c, found)
        found.extend(int(x) for x in new)
    return SetFamily(tuple(sorted(found)), "minimal", kind)


def minimal_x_sets_direct(g: Graph, kind: PropertyKind = PD) -> SetFamily:
    """Oracle: X-sets none of whose one-vertex deletions is an X-set."""
    table = x_table(g, kind)
    out = []
    for s in np.nonzero(table)[0]:
        s = int(s)
        if not any(table[s & ~(1 << v)] for v in members(s)):
            out.append(s)
    return SetFamily(tuple(out), "minimal", kind)


def upper_x(g: Graph, kind: PropertyKind = PD) -> int:
    return max(s.bit_count() for s in minimal_x_sets(g, kind))


def x_table(g: Graph, kind: PropertyKind = PD) -> np.ndarray:
    """Boolean array over all 2^n masks: entry s is True iff s is an X-set."""
    if g.n > MAX_EXHAUSTIVE:
        raise OrderTooLargeForExhaustive(f"full subset scan limited to n <= {MAX_EXHAUSTIVE}")
    return kernels.xset_table(g.adj_array, g.n, kind.code)


def x_sets_up_to(g: Graph, kind: PropertyKind, k: int) -> SetFamily:
    table = x_table(g, kind)
    masks = np.nonzero(table)[0].astype(np.uint64)
    masks = masks[np.bitwise_count(masks) <= k]
    return SetFamily(tuple(int(x) for x in masks), "up_to_k", kind, k)


# ---------------------------------------------------------------------------
# vertex covers


def min_vertex_covers(g: Graph) -> SetFamily:
    """Minimum vertex covers by brute force over subsets of increasing size.

    Returned with ``kind`` PD because they coincide with the minimum power
    dominating sets of the K^{2,3} expansion.
    """
    edges = [(1 << u) | (1 << v) for u, v in g.edges()]
    for c in range(0, g.n + 1):
        covers = []
        for combo in combinations(range(g.n), c):
            s = mask_of(combo)
            if all(e & s for e in edges):
                covers.append(s)
        if covers:
            return SetFamily(tuple(sorted(covers)), "minimum", PD)
    raise AssertionError("V(G) is always a cover")


# ---------------------------------------------------------------------------
# axioms


@dataclass(frozen=True)
class AxiomReport:
    kind: PropertyKind
    superset_closed: str
    empty_excluded: str
    component_decomposition: str
    all_n_minus_1_sets: str
    isolated_in_every_xset: str

    @property
    def ok(self) -> bool:
        return "fail" not in (
            self.superset_closed,
            self.empty_excluded,
            self.component_decomposition,
            self.all_n_minus_1_sets,
            self.isolated_in_every_xset,
        )


def _verdict(flag: bool) -> str:
    return "pass" if flag else "fail"


def _restrict(masks: np.ndarray, verts: list[int]) -> np.ndarray:
    """Map each global mask to its local mask on ``verts`` (in order)."""
    local = np.zeros_like(masks)
    for i, v in enumerate(verts):
        local |= ((masks >> np.uint64(v)) & np.uint64(1)) << np.uint64(i)
    return local


def validate_axioms(g: Graph, kind: PropertyKind = PD) -> AxiomReport:
    if g.n > AXIOM_MAX_ORDER:
        raise OrderTooLargeForExhaustive(f"axiom validation limited to n <= {AXIOM_MAX_ORDER}")
    table = x_table(g, kind)
    masks = np.arange(1 << g.n, dtype=np.uint64)

    closed = True
    for v in range(g.n):
        bit = np.uint64(1 << v)
        without = masks[(masks & bit) == 0]
        if np.any(table[without] & ~table[without | bit]):
            closed = False
            break

    if len(g.components) > 1:
        combined = np.ones(1 << g.n, dtype=bool)
        for comp in g.components:
            sub, verts = g.induced(comp)
            sub_table = kernels.xset_table(sub.adj_array, sub.n, kind.code)
            combined &= sub_table[_restrict(masks, verts).astype(np.int64)]
        decomp = _verdict(bool(np.array_equal(combined, table)))
    else:
        decomp = "n/a"

    if g.min_degree >= 1:
        n1 = all(table[g.full & ~(1 << v)] for v in range(g.n))
        n1_verdict = _verdict(n1)
    else:
        n1_verdict = "n/a"

    if g.isolated:
        iso = np.all((masks[table] & np.uint64(g.isolated)) == np.uint64(g.isolated))
        iso_verdict = _verdict(bool(iso))
    else:
        iso_verdict = "n/a"

    return AxiomReport(
        kind=kind,
        superset_closed=_verdict(closed),
        empty_excluded=_verdict(not table[0]),
        component_decomposition=decomp,
        all_n_minus_1_sets=n1_verdict,
        isolated_in_every_xset=iso_verdict,
    )
