"""Acceptance criteria, one test each; every test records a PASS/FAIL line
that is repeated in the terminal summary.

The n = 10 pair count is expensive (about half an hour for one graph
class).  Charpoly caches go to $COENTROPIC_CACHE_DIR, default
<tmp>/coentropic-cache, so reruns skip the bulk work.
"""

import os
import random
import tempfile
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
import sympy

from coentropic.canon import GRAPH_COUNTS, canonical_form, enumerate_codes, enumerate_graphs
from coentropic.entropy import MatchKind, compare_fingerprints, von_neumann_entropy
from coentropic.graph import Graph, components, graph6_decode, graph6_encode
from coentropic.known_pairs import EXAMPLE_8_ENTROPY, EXAMPLE_8_SPECTRA, PAIR_COUNTS
from coentropic.props import lu_suite, partial_trace_suite, schmidt_suite, signless_suite
from coentropic.quantum import EdgeState, EdgeStateEnsemble, mixture_density, normalized_laplacian_density
from coentropic.search import (SearchConfig, check_equal_edge_shortcut, find_coentropic_pairs,
                               locate_example_pair, verify_table)
from coentropic.spectral import charpoly, laplacian, spectrum

from conftest import brute_class_count

CACHE_DIR = os.environ.get("COENTROPIC_CACHE_DIR",
                           os.path.join(tempfile.gettempdir(), "coentropic-cache"))


def test_1_partial_traces(record):
    res = partial_trace_suite(7)
    record("1 partial traces", res.passed, str(res))
    assert res.passed, res.failures[:5]


def test_2_schmidt(record):
    res = schmidt_suite(7)
    record("2 Schmidt rank and coefficients", res.passed, str(res))
    assert res.passed, res.failures[:5]


def test_3_lu_equivalence(record):
    res = lu_suite(6, random_pairs=100, random_n=7)
    record("3 LU-equivalence", res.passed, str(res))
    assert res.passed, res.failures[:5]


def test_4_example_pair(record):
    g, h = locate_example_pair()
    spectra = [spectrum(charpoly(laplacian(x))).integers() for x in (g, h)]
    spectra_ok = spectra == [list(s) for s in EXAMPLE_8_SPECTRA]
    fg, fh = von_neumann_entropy(g), von_neumann_entropy(h)
    match = compare_fingerprints(fg, fh)
    want = {2: F(1) - F(54, 34), 3: F(-18, 34), 17: F(1)}
    coeffs_ok = fg.coefficients() == fh.coefficients() == want == dict(EXAMPLE_8_ENTROPY)
    with mpmath.workdps(70):
        closed = mpmath.log(34) - (18 * mpmath.log(3) + 54 * mpmath.log(2)) / 34
        numeric_ok = all(abs(f.numeric - closed) < mpmath.mpf(10) ** -50 for f in (fg, fh))
    ok = spectra_ok and match.kind is MatchKind.EQUAL_EXACT and coeffs_ok and numeric_ok
    record("4 8-vertex example", ok,
           f"{graph6_encode(g)} / {graph6_encode(h)} spectra={spectra} match={match} "
           f"S={fg.closed_form()}")
    assert ok


def test_5_table(record):
    rows = verify_table()
    bad = [r.row for r in rows if not r.passed]
    record("5 table rows", len(rows) == 8 and not bad,
           f"{len(rows) - len(bad)}/{len(rows)} rows pass" + (f"; failing rows {bad}" if bad else ""))
    assert len(rows) == 8 and not bad


_reports: dict[tuple[int, str], object] = {}


def count_report(n: int, graph_class: str):
    key = (n, graph_class)
    if key not in _reports:
        os.makedirs(CACHE_DIR, exist_ok=True)
        cache = os.path.join(CACHE_DIR, f"charpolys_n{n}_{graph_class}.npz")
        _reports[key] = find_coentropic_pairs(SearchConfig(n=n, graph_class=graph_class, cache_path=cache))
    return _reports[key]


def matching_class(n: int):
    """Connected first; the much larger 'all' run only if that misses
    (at n = 8 both are cheap, so both always run)."""
    found = {}
    for cls in ("connected", "all"):
        if n > 8 and found and any(k == PAIR_COUNTS[n] for k in found.values()):
            break
        found[cls] = len(count_report(n, cls).coentropic_pairs)
    matches = [c for c, k in found.items() if k == PAIR_COUNTS[n]]
    return (matches[0] if matches else None), found


def pair_diff(n: int) -> str:
    lines = []
    for cls in ("connected", "all"):
        rep = _reports.get((n, cls))
        if rep is None:
            continue
        lines.append(f"found ({cls}, {len(rep.coentropic_pairs)}):")
        lines += [f"  {a} {b} m={p.m} {p.match}" for p in rep.coentropic_pairs for a, b in [p.graph6]]
    return "\n".join(lines)


@pytest.mark.slow
@pytest.mark.parametrize("n", [8, 9, 10])
def test_6_pair_counts(record, n):
    cls, found = matching_class(n)
    counts = " ".join(f"{c}={k}" for c, k in found.items())
    detail = f"n={n} expected {PAIR_COUNTS[n]}; {counts}; " + (
        f"matches class '{cls}'" if cls else "no class matches")
    record(f"6 pair count n={n}", cls is not None, detail)
    assert cls is not None, detail + "\n" + pair_diff(n)


@pytest.mark.slow
def test_7_equal_edges(record):
    matched = []
    for n in (8, 9, 10):
        cls, _ = matching_class(n)
        if cls is not None:
            matched.append((n, cls, count_report(n, cls)))
    pairs = [p for _, _, rep in matched for p in rep.coentropic_pairs]
    equal = all(p.equal_edges for p in pairs)
    shortcut = all(check_equal_edge_shortcut(p) for p in pairs)
    ok = bool(pairs) and equal and shortcut
    where = ", ".join(f"n={n} ({c})" for n, c, _ in matched) or "none"
    record("7 equal-edge pairs", ok,
           f"{len(pairs)} pairs from matched counts [{where}]; equal m: {equal}; shortcut identity: {shortcut}")
    assert ok


def test_8_signless(record):
    res = signless_suite(5)
    record("8 signless path", res.passed, str(res))
    assert res.passed, res.failures[:5]


def test_9_mixture_example(record):
    g = Graph(3, ((0, 1), (0, 2)))
    half = sympy.Rational(1, 2)
    amp = (sympy.sqrt(2) / 2, -sympy.sqrt(2) / 2)
    ens = EdgeStateEnsemble((EdgeState((1, 2), half, amp), EdgeState((1, 3), half, amp)))
    rho = mixture_density(ens, 3)
    want = np.array([[F(1, 2), F(-1, 4), F(-1, 4)], [F(-1, 4), F(1, 4), 0], [F(-1, 4), 0, F(1, 4)]],
                    dtype=object)
    ok = rho.is_exact and rho.equals(want) and rho.equals(normalized_laplacian_density(g))
    record("9 mixture example", ok, "rho == [[1/2,-1/4,-1/4],[-1/4,1/4,0],[-1/4,0,1/4]] == L/(2m)")
    assert ok


def _relabel(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def test_10_property_suites(record):
    rng = random.Random(10)
    failures = []

    # 0 <= S <= ln(n - w)
    bounded = 0
    for n in range(2, 8):
        for g in enumerate_graphs(n):
            if not g.m:
                continue
            s = von_neumann_entropy(g, 30).numeric
            with mpmath.workdps(40):
                eps = mpmath.mpf(10) ** -25
                if not -eps <= s <= mpmath.log(n - components(g).w) + eps:
                    failures.append(f"entropy bound {g}")
            bounded += 1

    # invariance under 100 random relabelings per graph
    sample = [g for n in range(1, 5) for g in enumerate_graphs(n)]
    for n in range(5, 9):
        sample += rng.sample(list(enumerate_graphs(n)), 8)
    for g in sample:
        form, poly = canonical_form(g), charpoly(laplacian(g))
        fp = von_neumann_entropy(g, 30) if g.m else None
        for _ in range(100):
            h = _relabel(g, rng)
            if canonical_form(h) != form or charpoly(laplacian(h)) != poly:
                failures.append(f"relabel invariance {g}")
                break
            if fp is not None and not compare_fingerprints(fp, von_neumann_entropy(h, 30), 25).equal:
                failures.append(f"fingerprint invariance {g}")
                break

    # graph6 round trips up to the largest short-form size
    trips = 0
    for n in range(1, 8):
        for g in enumerate_graphs(n):
            trips += 1
            if graph6_decode(graph6_encode(g)) != g:
                failures.append(f"graph6 {g}")
    for n in (20, 40, 61, 62):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        g = Graph(n, tuple(sorted(rng.sample(pairs, 3 * n))))
        trips += 1
        if graph6_decode(graph6_encode(g)) != g:
            failures.append(f"graph6 n={n}")

    # enumeration counts
    for n in range(1, 7):
        if len(enumerate_codes(n)) != brute_class_count(n):
            failures.append(f"enumeration count n={n}")
    regression = {8: len(enumerate_codes(8)), 9: len(enumerate_codes(9))}
    if regression != {8: 12346, 9: 274668} or GRAPH_COUNTS[7:9] != (12346, 274668):
        failures.append(f"regression counts {regression}")

    detail = (f"{bounded} entropy bounds, {len(sample)} graphs x 100 relabelings, {trips} graph6 "
              f"round trips, brute-force counts n<=6, counts n=8/9 {regression[8]}/{regression[9]}; "
              f"{len(failures)} failures")
    record("10 property suites", not failures, detail)
    assert not failures, failures[:5]
