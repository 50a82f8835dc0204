"""Pure Python / numpy implementations of the hot kernels.

Same call signatures as the compiled ``_ckernels`` module; selected by
:mod:`pdrecon.kernels` when the extension is unavailable.  The batch
routines are vectorised over many vertex sets at once instead of looping.
"""
from __future__ import annotations

from itertools import combinations, islice

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

DOM, PD, ZF = 0, 1, 2

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


def _full(n: int) -> int:
    return (1 << n) - 1


def closure(adj, n: int, start: int, kind: int) -> int:
    adj = [int(a) for a in adj]
    full = _full(n)
    obs = start
    if kind != ZF:
        m = start
        while m:
            low = m & -m
            obs |= adj[low.bit_length() - 1]
            m ^= low
        if kind == DOM:
            return obs
    while obs != full:
        new = 0
        m = obs
        while m:
            low = m & -m
            un = adj[low.bit_length() - 1] & ~obs
            if un and not un & (un - 1):
                new |= un
            m ^= low
        if not new:
            break
        obs |= new
    return obs


def closure_many(adj, n: int, masks, kind: int) -> np.ndarray:
    adj = np.asarray(adj, dtype=np.uint64)
    masks = np.asarray(masks, dtype=np.uint64)
    full = np.uint64(_full(n))
    obs = masks.copy()
    bits = [np.uint64(1 << v) for v in range(n)]
    if kind != ZF:
        for v in range(n):
            hit = (masks & bits[v]) != 0
            obs[hit] |= adj[v]
        if kind == DOM:
            return obs
    active = obs != full
    while active.any():
        idx = np.nonzero(active)[0]
        cur = obs[idx]
        new = np.zeros_like(cur)
        for v in range(n):
            un = adj[v] & ~cur
            single = ((cur & bits[v]) != 0) & (un != 0) & ((un & (un - _ONE)) == 0)
            new[single] |= un[single]
        grew = new != 0
        obs[idx] = cur | new
        active[idx] = grew & (obs[idx] != full)
    return obs


def xset_table(adj, n: int, kind: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.uint64)
    out = np.empty(1 << n, dtype=bool)
    step = 1 << 16
    for lo in range(0, 1 << n, step):
        chunk = masks[lo : lo + step]
        out[lo : lo + step] = closure_many(adj, n, chunk, kind) == np.uint64(_full(n))
    return out


def xsets_of_size(adj, n: int, kind: int, c: int, avoid) -> np.ndarray:
    avoid = [np.uint64(a) for a in np.asarray(avoid, dtype=np.uint64)]
    full = np.uint64(_full(n))
    found = []
    combos = combinations(range(n), c)
    weights = [1 << v for v in range(n)]
    while True:
        batch = list(islice(combos, 1 << 15))
        if not batch:
            break
        cand = np.fromiter((sum(weights[v] for v in t) for t in batch), dtype=np.uint64, count=len(batch))
        keep = np.ones(len(cand), dtype=bool)
        for a in avoid:
            keep &= (cand & a) != a
        cand = cand[keep]
        if len(cand):
            found.append(cand[closure_many(adj, n, cand, kind) == full])
    if not found:
        return np.zeros(0, dtype=np.uint64)
    return np.sort(np.concatenate(found))


def tar_connectivity(verts, n: int) -> np.ndarray:
    """``out[k]`` is True iff the sets of ``verts`` with size <= k induce a
    connected TAR graph (and there is at least one such set)."""
    verts = np.asarray(verts, dtype=np.uint64)
    out = np.zeros(n + 1, dtype=bool)
    if len(verts) == 0:
        return out
    sizes = _popcounts(verts)
    rows, cols = [], []
    for v in range(n):
        bit = np.uint64(1 << v)
        has = np.nonzero((verts & bit) != 0)[0]
        child = verts[has] ^ bit
        pos = np.searchsorted(verts, child)
        pos = np.minimum(pos, len(verts) - 1)
        ok = verts[pos] == child
        rows.append(has[ok])
        cols.append(pos[ok])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    edge_size = sizes[rows]  # the larger endpoint
    for k in range(n + 1):
        vmask = sizes <= k
        nv = int(vmask.sum())
        if nv == 0:
            continue
        sel = edge_size <= k
        remap = np.cumsum(vmask) - 1
        g = coo_matrix(
            (np.ones(int(sel.sum()), dtype=np.int8), (remap[rows[sel]], remap[cols[sel]])),
            shape=(nv, nv),
        )
        ncomp, _ = connected_components(g, directed=False)
        out[k] = ncomp == 1
    return out


def _popcounts(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr).astype(np.int64)
