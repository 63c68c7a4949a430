"""Search isomorph-free graph lists for coentropic, non-cospectral pairs.

Pipeline: enumerate (or read) graphs, compute exact Laplacian
characteristic polynomials in bulk, collapse cospectral classes, screen the
class representatives by double-precision entropy, then confirm every
candidate pair with exact prime-log fingerprints or high-precision values.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np
from numba import njit

from . import canon
from ._codes import MAX_CODE_N, code_to_masks
from .canon import _popcounts
from .entropy import (EntropyFingerprint, EntropyMatch, MatchKind, agreeing_digits,
                      compare_fingerprints, entropy_from_spectrum, normalize_unnormalized)
from .graph import Graph, GraphError, graph6_encode, graph_from_code, graph_to_code, read_graph6_file
from .known_pairs import EXAMPLE_8_ENTROPY, EXAMPLE_8_SPECTRA, TABLE_9, table_graphs
from .spectral import (CharPoly, _jacobi_inplace, _laplacian_from_masks, charpoly,
                       charpoly_batch, laplacian, spectrum)

log = logging.getLogger(__name__)

# double-precision screening windows; eigenvalue errors are ~1e-13, so the
# entropy of a 10-vertex graph is good to ~1e-11
SHAT_WINDOW = 1e-8
S_WINDOW = 1e-9
NEAR_MISS_MIN_DIGITS = 12


class SourceError(GraphError):
    pass


class NotFound(LookupError):
    pass


@dataclass
class SearchConfig:
    n: int
    graph_class: str = "all"
    numeric_digits: int = 60
    match_digits: int = 50
    group_by_edges: bool = True
    graph6_path: str | None = None
    cache_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.graph_class not in ("all", "connected"):
            raise ValueError(f"graph class must be 'all' or 'connected', not {self.graph_class!r}")
        if self.match_digits > self.numeric_digits - 5:
            raise ValueError("match_digits must be at most numeric_digits - 5")
        if self.graph6_path is None and not 1 <= self.n <= canon.MAX_ENUM_N:
            raise ValueError(f"internal enumeration supports n <= {canon.MAX_ENUM_N}")


@dataclass
class CoentropicPair:
    graph6: tuple[str, str]
    m: tuple[int, int]
    entropy: tuple[str, str]
    match: str
    cospectral: bool
    spectra: tuple[str, str]
    charpolys: tuple[str, str]
    agreeing_digits: int

    @property
    def equal_edges(self) -> bool:
        return self.m[0] == self.m[1]

    def to_json(self) -> str:
        return json.dumps(asdict(self))


@dataclass
class SearchReport:
    n: int
    graph_class: str
    graphs_scanned: int
    cospectral_classes_found: int
    coentropic_pairs: list[CoentropicPair] = field(default_factory=list)
    near_misses: list[CoentropicPair] = field(default_factory=list)
    pairs_with_equal_edges: int = 0
    pairs_with_unequal_edges: int = 0
    spectrum_pairs: int = 0
    group_by_edges: bool = True
    wall_time: float = 0.0

    def summary_row(self) -> dict:
        return {
            "n": self.n,
            "class": self.graph_class,
            "graphs_scanned": self.graphs_scanned,
            "cospectral_classes": self.cospectral_classes_found,
            "coentropic_pairs": len(self.coentropic_pairs),
            "spectrum_pairs": self.spectrum_pairs,
            "equal_edge_pairs": self.pairs_with_equal_edges,
            "unequal_edge_pairs": self.pairs_with_unequal_edges,
            "near_misses": len(self.near_misses),
            "grouped_by_edges": self.group_by_edges,
            "wall_time_s": round(self.wall_time, 2),
        }


# ---------------------------------------------------------------------------
# cospectral classes

def cospectral_classes(graphs: Iterable[Graph]) -> dict[str, list[Graph]]:
    """Partition graphs by the text form of their Laplacian charpoly."""
    out: dict[str, list[Graph]] = {}
    for g in graphs:
        out.setdefault(charpoly(laplacian(g)).to_text(), []).append(g)
    return out


@njit(cache=True)
def _row_hashes(rows):
    out = np.empty(rows.shape[0], dtype=np.uint64)
    for i in range(rows.shape[0]):
        h = np.uint64(0x9E3779B97F4A7C15)
        for j in range(rows.shape[1]):
            h ^= np.uint64(rows[i, j]) + np.uint64(0x9E3779B97F4A7C15) + (h << np.uint64(6)) + (h >> np.uint64(2))
            h *= np.uint64(0xBF58476D1CE4E5B9)
        out[i] = h
    return out


@njit(cache=True)
def _group_sorted(rows, order, hashes):
    """Class id per row, scanning rows in hash order; rows with equal hash
    are compared exactly."""
    N = order.shape[0]
    cls = np.full(N, -1, dtype=np.int64)
    ncls = 0
    i = 0
    while i < N:
        j = i
        while j < N and hashes[order[j]] == hashes[order[i]]:
            j += 1
        for a in range(i, j):
            ra = order[a]
            if cls[ra] >= 0:
                continue
            cls[ra] = ncls
            for b in range(a + 1, j):
                rb = order[b]
                if cls[rb] >= 0:
                    continue
                same = True
                for c in range(rows.shape[1]):
                    if rows[ra, c] != rows[rb, c]:
                        same = False
                        break
                if same:
                    cls[rb] = ncls
            ncls += 1
        i = j
    return cls, ncls


def group_rows(rows: np.ndarray) -> tuple[np.ndarray, int]:
    hashes = _row_hashes(rows)
    order = np.argsort(hashes, kind="stable")
    return _group_sorted(rows, order, hashes)


# ---------------------------------------------------------------------------
# screening

@njit(cache=True)
def _entropies(codes, n):
    """(S_hat, S) in double precision for each packed graph."""
    N = codes.shape[0]
    shat = np.zeros(N, dtype=np.float64)
    s = np.zeros(N, dtype=np.float64)
    masks = np.zeros(n, dtype=np.int64)
    L = np.zeros((n, n), dtype=np.int64)
    a = np.zeros((n, n), dtype=np.float64)
    for g in range(N):
        code_to_masks(codes[g], n, masks)
        _laplacian_from_masks(masks, n, L)
        for i in range(n):
            for j in range(n):
                a[i, j] = L[i, j]
        if _jacobi_inplace(a, 100) < 0:
            raise RuntimeError("Jacobi did not converge")
        acc = 0.0
        two_m = 0.0
        for i in range(n):
            lam = a[i, i]
            two_m += L[i, i]
            if lam > 1e-9:
                acc += lam * np.log(lam)
        shat[g] = -acc
        s[g] = np.log(two_m) - acc / two_m if two_m > 0 else 0.0
    return shat, s


@njit(cache=True)
def _window_pairs(keys, values, order, window):
    """Index pairs (into ``order``) whose values differ by at most ``window``
    and whose keys are equal."""
    N = order.shape[0]
    cap = 1024
    out = np.empty((cap, 2), dtype=np.int64)
    k = 0
    for a in range(N):
        ia = order[a]
        b = a + 1
        while b < N:
            ib = order[b]
            if keys[ib] != keys[ia] or values[ib] - values[ia] > window:
                break
            if k == cap:
                bigger = np.empty((cap * 2, 2), dtype=np.int64)
                bigger[:cap] = out
                out = bigger
                cap *= 2
            out[k, 0] = ia
            out[k, 1] = ib
            k += 1
            b += 1
    return out[:k]


# ---------------------------------------------------------------------------
# graph sources

def load_codes(cfg: SearchConfig) -> np.ndarray:
    """Canonical codes for the configured source, in emission order."""
    if cfg.graph6_path is None:
        return canon.enumerate_codes(cfg.n, cfg.graph_class == "connected", cfg.workers)
    codes = []
    try:
        for g in read_graph6_file(cfg.graph6_path):
            if g.n != cfg.n:
                raise SourceError(f"{cfg.graph6_path}: graph on {g.n} vertices, expected {cfg.n}")
            codes.append(graph_to_code(g))
    except (OSError, GraphError) as exc:
        raise SourceError(str(exc)) from exc
    if cfg.n > MAX_CODE_N:
        raise SourceError(f"batch search supports n <= {MAX_CODE_N}")
    arr = np.unique(canon.canonical_codes(np.array(codes, dtype=np.int64), cfg.n))
    if cfg.graph_class == "connected":
        arr = canon.filter_connected(arr, cfg.n)
    return canon._sort_codes(arr, cfg.n)


def _charpolys(codes: np.ndarray, n: int, chunk: int = 1 << 20) -> np.ndarray:
    out = np.empty((len(codes), n + 1), dtype=np.int64)
    for i in range(0, len(codes), chunk):
        out[i:i + chunk] = charpoly_batch(codes[i:i + chunk], n)
    return out


def _cache_tag(cfg: SearchConfig) -> str:
    src = os.path.abspath(cfg.graph6_path) if cfg.graph6_path else "internal"
    return f"n={cfg.n};class={cfg.graph_class};source={src}"


def codes_and_charpolys(cfg: SearchConfig) -> tuple[np.ndarray, np.ndarray]:
    """Graphs with at least one edge and their charpolys, via the cache file
    when one is configured."""
    if cfg.cache_path and os.path.exists(cfg.cache_path):
        with np.load(cfg.cache_path, allow_pickle=False) as data:
            if str(data["tag"]) == _cache_tag(cfg):
                log.info("loaded %d charpolys from %s", len(data["codes"]), cfg.cache_path)
                return data["codes"], data["charpolys"]
            log.warning("cache %s was built for %s; recomputing", cfg.cache_path, data["tag"])
    t0 = time.time()
    codes = load_codes(cfg)
    codes = codes[codes != 0]          # the edgeless graph has no entropy
    log.info("%d graphs in %.1fs", len(codes), time.time() - t0)
    cps = _charpolys(codes, cfg.n)
    log.info("charpolys done at %.1fs", time.time() - t0)
    if cfg.cache_path:
        tmp = cfg.cache_path + ".tmp.npz"
        np.savez(tmp, tag=np.array(_cache_tag(cfg)), codes=codes, charpolys=cps)
        os.replace(tmp, cfg.cache_path)
    return codes, cps


# ---------------------------------------------------------------------------
# the search

class _FingerprintCache:
    def __init__(self, cps: np.ndarray, m: np.ndarray, digits: int):
        self.cps, self.m, self.digits = cps, m, digits
        self._fp: dict[int, tuple[EntropyFingerprint, str]] = {}

    def get(self, row: int) -> tuple[EntropyFingerprint, str]:
        if row not in self._fp:
            cp = CharPoly(tuple(int(c) for c in self.cps[row]))
            spec = spectrum(cp)
            fp = entropy_from_spectrum(spec, 2 * int(self.m[row]), self.digits)
            self._fp[row] = (fp, spec.to_text())
        return self._fp[row]


def find_coentropic_pairs(cfg: SearchConfig) -> SearchReport:
    t0 = time.time()
    n = cfg.n
    codes, cps = codes_and_charpolys(cfg)
    m = _popcounts(codes)
    cls, ncls = group_rows(cps)
    # first member (in emission order) represents each class
    rep = np.full(ncls, -1, dtype=np.int64)
    members: dict[int, list[int]] = {}
    first = np.unique(cls, return_index=True)[1]
    rep[cls[first]] = first
    sizes = np.bincount(cls, minlength=ncls)
    for i in np.flatnonzero(sizes[cls] > 1):
        members.setdefault(int(cls[i]), []).append(int(i))
    n_cospectral = int(np.count_nonzero(sizes > 1))
    log.info("%d charpoly classes, %d cospectral", ncls, n_cospectral)

    shat, s = _entropies(codes[rep], n)
    rep_m = m[rep]
    if cfg.group_by_edges:
        order = np.lexsort((shat, rep_m))
        cand = _window_pairs(rep_m, shat, order, SHAT_WINDOW)
    else:
        order = np.argsort(s, kind="stable")
        cand = _window_pairs(np.zeros_like(rep_m), s, order, S_WINDOW)
    log.info("%d candidate class pairs at %.1fs", len(cand), time.time() - t0)

    fps = _FingerprintCache(cps, m, cfg.numeric_digits)
    pairs, near = [], []
    spectrum_pairs = 0
    for k, (ca, cb) in enumerate(cand):
        if k and k % 5000 == 0:
            log.info("confirmed %d/%d candidates at %.1fs", k, len(cand), time.time() - t0)
        ra, rb = int(rep[ca]), int(rep[cb])
        fa, sa = fps.get(ra)
        fb, sb = fps.get(rb)
        match = compare_fingerprints(fa, fb, cfg.numeric_digits)
        if match.kind is MatchKind.EQUAL_EXACT:
            digits = cfg.numeric_digits
        elif fa.is_exact and fb.is_exact:
            continue
        else:
            digits = agreeing_digits(fa, fb)
            if digits < NEAR_MISS_MIN_DIGITS:
                continue
            match = EntropyMatch(MatchKind.EQUAL_TO_DIGITS, digits)
        target = pairs if digits >= cfg.match_digits else near
        if target is pairs:
            spectrum_pairs += 1
        for ga in members.get(int(ca), [ra]):
            for gb in members.get(int(cb), [rb]):
                target.append((min(ga, gb), max(ga, gb), str(match), digits))
    # emission order of the member graphs, independent of screening order
    pairs = [_make_pair(n, codes, m, cps, *t, fps) for t in sorted(pairs)]
    near = [_make_pair(n, codes, m, cps, *t, fps) for t in sorted(near)]
    report = SearchReport(
        n=n, graph_class=cfg.graph_class, graphs_scanned=len(codes),
        cospectral_classes_found=n_cospectral, coentropic_pairs=pairs, near_misses=near,
        pairs_with_equal_edges=sum(p.equal_edges for p in pairs),
        pairs_with_unequal_edges=sum(not p.equal_edges for p in pairs),
        spectrum_pairs=spectrum_pairs, group_by_edges=cfg.group_by_edges,
        wall_time=time.time() - t0)
    return report


def _make_pair(n, codes, m, cps, a, b, match, digits, fps) -> CoentropicPair:
    ga, gb = graph_from_code(n, int(codes[a])), graph_from_code(n, int(codes[b]))
    fa, sa = fps.get(a)
    fb, sb = fps.get(b)
    return CoentropicPair(
        graph6=(graph6_encode(ga), graph6_encode(gb)), m=(int(m[a]), int(m[b])),
        entropy=(fa.to_text(), fb.to_text()), match=match,
        cospectral=bool(np.array_equal(cps[a], cps[b])), spectra=(sa, sb),
        charpolys=(",".join(map(str, cps[a])), ",".join(map(str, cps[b]))),
        agreeing_digits=digits)


def write_pairs(path: str, pairs: Iterable[CoentropicPair]) -> None:
    with open(path, "w") as fh:
        for p in pairs:
            fh.write(p.to_json() + "\n")


def write_summary(path: str, reports: Iterable[SearchReport]) -> None:
    reports = list(reports)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(reports[0].summary_row()))
        writer.writeheader()
        for r in reports:
            writer.writerow(r.summary_row())


# ---------------------------------------------------------------------------
# reference checks

@dataclass
class TableRowCheck:
    row: int
    m: tuple[int, int]
    expected: str
    found: str
    entropy_matches: bool
    coentropic: bool
    cospectral: bool
    isomorphic: bool

    @property
    def passed(self) -> bool:
        return self.entropy_matches and self.coentropic and not self.cospectral and not self.isomorphic


def verify_table(digits: int = 60) -> list[TableRowCheck]:
    import mpmath

    from .entropy import format_prime_logs, von_neumann_entropy

    out = []
    for i, (_, _, coeffs, decimal) in enumerate(TABLE_9):
        g, h = table_graphs(i)
        fg, fh = von_neumann_entropy(g, digits), von_neumann_entropy(h, digits)
        match = compare_fingerprints(fg, fh, digits)
        if coeffs is not None:
            want = tuple(sorted((p, Fraction(c)) for p, c in coeffs.items()))
            ok = fg.exact == want and fh.exact == want
            expected = format_prime_logs(dict(want))
        else:
            # the printed value is rounded to its last decimal
            places = len(decimal.split(".")[1])
            with mpmath.workdps(digits):
                half_ulp = mpmath.mpf(10) ** -places / 2
                ok = all(abs(f.numeric - mpmath.mpf(decimal)) <= half_ulp for f in (fg, fh))
            expected = decimal
        out.append(TableRowCheck(
            row=i + 1, m=(g.m, h.m), expected=expected, found=fg.closed_form(),
            entropy_matches=ok, coentropic=match.equal,
            cospectral=charpoly(laplacian(g)) == charpoly(laplacian(h)),
            isomorphic=canon.is_isomorphic(g, h)))
    return out


def _poly_from_roots(roots: Iterable[int]) -> list[int]:
    p = [1]
    for r in roots:
        q = [0] * (len(p) + 1)
        for k, c in enumerate(p):
            q[k + 1] += c
            q[k] -= r * c
        p = q
    return p


def locate_example_pair(codes: np.ndarray | None = None) -> tuple[Graph, Graph]:
    """First 8-vertex, 17-edge graphs (in emission order) with the two
    target spectra."""
    n, edges = 8, 17
    if codes is None:
        codes = canon.enumerate_codes(n)
    codes = codes[_popcounts(codes) == edges]
    cps = _charpolys(codes, n)
    found = []
    for spec in EXAMPLE_8_SPECTRA:
        target = np.array(_poly_from_roots(spec), dtype=np.int64)
        hits = np.flatnonzero(np.all(cps == target, axis=1))
        if hits.size == 0:
            raise NotFound(f"no 8-vertex graph with Laplacian spectrum {spec}")
        found.append(graph_from_code(n, int(codes[hits[0]])))
    return found[0], found[1]


def example_entropy_coefficients() -> dict[int, Fraction]:
    return dict(EXAMPLE_8_ENTROPY)


def check_equal_edge_shortcut(pair: CoentropicPair, digits: int = 60) -> bool:
    """S = ln(2m) + S_hat / 2m, verified exactly (or to ``digits - 2``) for
    both graphs of an equal-edge pair, and S_hat(G) == S_hat(H)."""
    from .entropy import unnormalized_entropy, von_neumann_entropy
    from .graph import graph6_decode

    if not pair.equal_edges:
        return False
    shats = []
    for g6 in pair.graph6:
        g = graph6_decode(g6)
        s, shat = von_neumann_entropy(g, digits), unnormalized_entropy(g, digits)
        via = normalize_unnormalized(shat, g.m)
        if s.is_exact:
            if via.exact != s.exact:
                return False
        elif agreeing_digits(via, s) < digits - 2:
            return False
        shats.append(shat)
    return compare_fingerprints(shats[0], shats[1], min(digits, 50)).equal
