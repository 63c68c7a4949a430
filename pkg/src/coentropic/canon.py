"""Canonical labeling, isomorphism tests and isomorph-free enumeration.

The canonical form of a graph is the lexicographically least graph6-order
adjacency bit string among the vertex orderings reached by an
individualize-and-refine search.  Refinement is 1-dimensional
Weisfeiler-Leman colour refinement; branches on twin vertices (equal
neighbourhoods apart from each other) are pruned because swapping twins is
an automorphism that fixes the current partition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numba import njit

from ._codes import MAX_CODE_N, code_to_masks, is_connected_masks, popcount
from .graph import Graph, GraphError, graph6_encode, graph_from_code

log = logging.getLogger(__name__)

MAX_CANON_N = 16
MAX_ENUM_N = 10

# number of isomorphism classes of graphs on n vertices, n = 1..10
GRAPH_COUNTS = (1, 2, 4, 11, 34, 156, 1044, 12346, 274668, 12005168)


class SizeLimit(GraphError):
    pass


# ---------------------------------------------------------------------------
# compiled search

@njit(cache=True)
def _refine(masks, n, cell, ncells):
    """Refine the ordered partition ``cell`` to the coarsest equitable one."""
    order = np.empty(n, dtype=np.int64)
    counts = np.zeros((n, n + 1), dtype=np.int64)
    newcell = np.empty(n, dtype=np.int64)
    while True:
        for v in range(n):
            counts[v, 0] = cell[v]
            for c in range(1, ncells + 1):
                counts[v, c] = 0
            m = masks[v]
            for u in range(n):
                if (m >> u) & 1:
                    counts[v, cell[u] + 1] += 1
            order[v] = v
        # insertion sort of vertices by their signature rows
        for i in range(1, n):
            x = order[i]
            j = i - 1
            while j >= 0:
                y = order[j]
                gt = False
                for c in range(ncells + 1):
                    if counts[y, c] != counts[x, c]:
                        gt = counts[y, c] > counts[x, c]
                        break
                if not gt:
                    break
                order[j + 1] = y
                j -= 1
            order[j + 1] = x
        k = 0
        newcell[order[0]] = 0
        for i in range(1, n):
            a = order[i - 1]
            b = order[i]
            same = True
            for c in range(ncells + 1):
                if counts[a, c] != counts[b, c]:
                    same = False
                    break
            if not same:
                k += 1
            newcell[b] = k
        k += 1
        for v in range(n):
            cell[v] = newcell[v]
        if k == ncells:
            return ncells
        ncells = k


@njit(cache=True)
def canonical_labeling(masks, n):
    """Return ``lab`` with ``lab[i]`` the vertex placed at position ``i``."""
    best_cols = np.zeros(n, dtype=np.int64)
    best_lab = np.arange(n)
    have_best = False
    cells = np.zeros((n + 1, n), dtype=np.int64)
    ncells = np.zeros(n + 1, dtype=np.int64)
    target = np.zeros(n + 1, dtype=np.int64)
    nextv = np.zeros(n + 1, dtype=np.int64)
    lab = np.empty(n, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    if n == 0:
        return best_lab
    ncells[0] = _refine(masks, n, cells[0], 1)
    depth = 0
    nextv[0] = 0
    target[0] = -1
    while depth >= 0:
        nc = ncells[depth]
        cell = cells[depth]
        if nc == n:
            for v in range(n):
                lab[cell[v]] = v
            for j in range(n):
                col = np.int64(0)
                mj = masks[lab[j]]
                for i in range(j):
                    col = (col << 1) | ((mj >> lab[i]) & 1)
                cols[j] = col
            better = not have_best
            if have_best:
                for j in range(n):
                    if cols[j] != best_cols[j]:
                        better = cols[j] < best_cols[j]
                        break
            if better:
                have_best = True
                for j in range(n):
                    best_cols[j] = cols[j]
                    best_lab[j] = lab[j]
            depth -= 1
            continue
        if target[depth] < 0:
            # first non-singleton cell
            sizes = np.zeros(nc, dtype=np.int64)
            for v in range(n):
                sizes[cell[v]] += 1
            t = 0
            while sizes[t] == 1:
                t += 1
            target[depth] = t
            nextv[depth] = 0
        t = target[depth]
        v = nextv[depth]
        chosen = -1
        while v < n:
            if cell[v] == t:
                twin = False
                for u in range(v):
                    if cell[u] == t:
                        bu = np.int64(1) << u
                        bv = np.int64(1) << v
                        if (masks[u] & ~bv) == (masks[v] & ~bu):
                            twin = True
                            break
                if not twin:
                    chosen = v
                    break
            v += 1
        if chosen < 0:
            target[depth] = -1
            depth -= 1
            continue
        nextv[depth] = chosen + 1
        child = cells[depth + 1]
        for w in range(n):
            c = cell[w]
            if c > t or (c == t and w != chosen):
                child[w] = c + 1
            else:
                child[w] = c
        ncells[depth + 1] = _refine(masks, n, child, nc + 1)
        target[depth + 1] = -1
        depth += 1
    return best_lab


@njit(cache=True)
def _relabeled_code(masks, n, lab):
    code = np.int64(0)
    for j in range(1, n):
        mj = masks[lab[j]]
        for i in range(j):
            code = (code << 1) | ((mj >> lab[i]) & 1)
    return code


@njit(cache=True)
def canonical_codes(codes, n):
    out = np.empty(codes.shape[0], dtype=np.int64)
    masks = np.zeros(n, dtype=np.int64)
    for g in range(codes.shape[0]):
        code_to_masks(codes[g], n, masks)
        lab = canonical_labeling(masks, n)
        out[g] = _relabeled_code(masks, n, lab)
    return out


@njit(cache=True)
def _augment(parents, n, connected_only):
    """Canonical codes of one-vertex extensions of ``(n-1)``-vertex parents.

    Only extensions whose new vertex has minimum degree are kept; every
    graph is still reached, since deleting a minimum-degree vertex from it
    gives one of the parents.
    """
    p = n - 1
    nsub = 1 << p
    out = np.empty(parents.shape[0] * nsub, dtype=np.int64)
    pm = np.zeros(max(p, 1), dtype=np.int64)
    masks = np.zeros(n, dtype=np.int64)
    pdeg = np.zeros(max(p, 1), dtype=np.int64)
    k = 0
    for g in range(parents.shape[0]):
        if p > 0:
            code_to_masks(parents[g], p, pm)
        for v in range(p):
            pdeg[v] = popcount(pm[v])
        for s in range(nsub):
            d = popcount(s)
            ok = True
            for v in range(p):
                dv = pdeg[v] + ((s >> v) & 1)
                if dv < d:
                    ok = False
                    break
            if not ok:
                continue
            for v in range(p):
                masks[v] = pm[v] | (((s >> v) & 1) << p)
            masks[p] = s
            if connected_only and not is_connected_masks(masks, n):
                continue
            lab = canonical_labeling(masks, n)
            out[k] = _relabeled_code(masks, n, lab)
            k += 1
    return out[:k]


# ---------------------------------------------------------------------------
# public API

@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Canonical graph6 string; equal forms mean isomorphic graphs."""

    n: int
    graph6: str

    def to_bytes(self) -> bytes:
        return self.graph6.encode("ascii")

    def graph(self) -> Graph:
        from .graph import graph6_decode
        return graph6_decode(self.graph6)


def _masks_array(g: Graph) -> np.ndarray:
    return np.array(g.adjacency_masks(), dtype=np.int64)


def canonical_permutation(g: Graph) -> list[int]:
    """``perm[v]`` is the canonical position of vertex ``v`` (0-based)."""
    if g.n > MAX_CANON_N:
        raise SizeLimit(f"canonical labeling supports n <= {MAX_CANON_N}")
    lab = canonical_labeling(_masks_array(g), g.n)
    perm = [0] * g.n
    for pos, v in enumerate(lab):
        perm[int(v)] = pos
    return perm


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_permutation(g))


def canonical_form(g: Graph) -> CanonicalForm:
    return CanonicalForm(g.n, graph6_encode(canonical_graph(g)))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    return canonical_form(g) == canonical_form(h)


def _sort_codes(codes: np.ndarray, n: int) -> np.ndarray:
    """Ascending edge count, then canonical bit string."""
    if codes.size == 0:
        return codes
    idx = np.lexsort((codes, _popcounts(codes)))
    return codes[idx]


@njit(cache=True)
def _popcounts(codes):
    out = np.empty(codes.shape[0], dtype=np.int64)
    for i in range(codes.shape[0]):
        out[i] = popcount(codes[i])
    return out


def _extend_all(parents: np.ndarray, n: int, connected_only: bool,
                workers: int = 1, chunk: int = 4096) -> np.ndarray:
    chunks = [parents[i:i + chunk] for i in range(0, len(parents), chunk)]
    found = []
    if workers > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_augment_unique, chunks,
                                 [n] * len(chunks), [connected_only] * len(chunks)):
                found.append(part)
    else:
        pending = 0
        for c in chunks:
            found.append(_augment_unique(c, n, connected_only))
            pending += len(found[-1])
            # merge periodically to bound memory
            if pending > 20_000_000:
                found = [np.unique(np.concatenate(found))]
                pending = len(found[0])
    if not found:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(found))


def _augment_unique(parents: np.ndarray, n: int, connected_only: bool) -> np.ndarray:
    return np.unique(_augment(parents, n, connected_only))


def enumerate_codes(n: int, connected_only: bool = False, workers: int = 1) -> np.ndarray:
    """Canonical int64 codes, one per isomorphism class, in emission order."""
    if not 1 <= n <= MAX_ENUM_N:
        raise SizeLimit(f"enumeration supports 1 <= n <= {MAX_ENUM_N}")
    assert n <= MAX_CODE_N
    level = np.zeros(1, dtype=np.int64)          # the single 1-vertex graph
    for k in range(2, n + 1):
        # parents must range over all graphs: a connected graph can lose
        # connectivity when a minimum-degree vertex is deleted
        level = _extend_all(level, k, False, workers)
        log.debug("n=%d: %d classes", k, len(level))
    if connected_only:
        level = filter_connected(level, n)
    return _sort_codes(level, n)


@njit(cache=True)
def _connected_flags(codes, n):
    out = np.zeros(codes.shape[0], dtype=np.bool_)
    masks = np.zeros(n, dtype=np.int64)
    for i in range(codes.shape[0]):
        code_to_masks(codes[i], n, masks)
        out[i] = is_connected_masks(masks, n)
    return out


def filter_connected(codes: np.ndarray, n: int) -> np.ndarray:
    return codes[_connected_flags(codes, n)]


def enumerate_graphs(n: int, connected_only: bool = False, workers: int = 1) -> Iterator[Graph]:
    for code in enumerate_codes(n, connected_only, workers):
        yield graph_from_code(n, int(code))


def canonical_code(g: Graph) -> int:
    if g.n > MAX_CODE_N:
        raise SizeLimit(f"int64 codes need n <= {MAX_CODE_N}")
    lab = canonical_labeling(_masks_array(g), g.n)
    return int(_relabeled_code(_masks_array(g), g.n, lab))
