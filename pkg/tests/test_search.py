import csv
import json
import random
from fractions import Fraction as F
from itertools import combinations

import mpmath
import numpy as np
import pytest

from coentropic import search
from coentropic.canon import enumerate_graphs, is_isomorphic
from coentropic.entropy import compare_fingerprints, von_neumann_entropy
from coentropic.graph import graph6_decode, graph6_encode
from coentropic.known_pairs import EXAMPLE_8_SPECTRA
from coentropic.search import (NotFound, SearchConfig, SourceError, cospectral_classes,
                               find_coentropic_pairs, locate_example_pair, verify_table)
from coentropic.spectral import charpoly, laplacian, spectrum


def naive_pairs(n, graph_class, group_by_edges=True, digits=60):
    """All unordered pairs with equal entropy (60 digits) and different
    charpolys, by comparing every pair directly."""
    graphs = [g for g in enumerate_graphs(n, graph_class == "connected") if g.m]
    fps = [von_neumann_entropy(g, digits) for g in graphs]
    polys = [charpoly(laplacian(g)) for g in graphs]
    out = set()
    with mpmath.workdps(digits + 10):
        eps = mpmath.mpf(10) ** -(digits - 2)
        for i, j in combinations(range(len(graphs)), 2):
            if group_by_edges and graphs[i].m != graphs[j].m:
                continue
            if polys[i] == polys[j] or abs(fps[i].numeric - fps[j].numeric) > eps:
                continue
            out.add((graph6_encode(graphs[i]), graph6_encode(graphs[j])))
    return out


def found_pairs(report):
    return {tuple(p.graph6) for p in report.coentropic_pairs}


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
@pytest.mark.parametrize("graph_class", ["all", "connected"])
@pytest.mark.parametrize("grouped", [True, False])
def test_search_matches_naive_oracle(n, graph_class, grouped):
    rep = find_coentropic_pairs(SearchConfig(n=n, graph_class=graph_class, group_by_edges=grouped))
    assert found_pairs(rep) == naive_pairs(n, graph_class, grouped)
    assert rep.pairs_with_equal_edges + rep.pairs_with_unequal_edges == len(rep.coentropic_pairs)


def test_n3_has_no_pairs():
    rep = find_coentropic_pairs(SearchConfig(n=3))
    assert rep.coentropic_pairs == [] and rep.graphs_scanned == 3


def test_cospectral_classes_n4_singletons():
    classes = cospectral_classes(enumerate_graphs(4))
    assert len(classes) == 11 and all(len(v) == 1 for v in classes.values())


def test_smallest_nontrivial_cospectral_class():
    for n in range(2, 8):
        classes = cospectral_classes(enumerate_graphs(n))
        big = [v for v in classes.values() if len(v) > 1]
        if big:
            break
    g, h = big[0][:2]
    assert not is_isomorphic(g, h)
    assert charpoly(laplacian(g)) == charpoly(laplacian(h))
    rep = find_coentropic_pairs(SearchConfig(n=n, graph_class="all"))
    assert rep.cospectral_classes_found == len([v for v in big if v[0].m])


def test_group_rows_exact():
    rows = np.array([[1, 2], [3, 4], [1, 2], [5, 6], [3, 4]], dtype=np.int64)
    cls, k = search.group_rows(rows)
    assert k == 3
    assert cls[0] == cls[2] and cls[1] == cls[4] and len({cls[0], cls[1], cls[3]}) == 3


def test_emitted_pair_invariants_n8():
    rep = find_coentropic_pairs(SearchConfig(n=8, graph_class="connected"))
    assert rep.graphs_scanned == 11117
    for p in rep.coentropic_pairs:
        g, h = (graph6_decode(x) for x in p.graph6)
        assert not p.cospectral and p.charpolys[0] != p.charpolys[1]
        assert not is_isomorphic(g, h)
        assert p.match == "EqualExact" or p.agreeing_digits >= 50
    # deterministic order
    again = find_coentropic_pairs(SearchConfig(n=8, graph_class="connected"))
    assert [p.graph6 for p in again.coentropic_pairs] == [p.graph6 for p in rep.coentropic_pairs]


def test_ungrouped_superset_n8():
    grouped = find_coentropic_pairs(SearchConfig(n=8, graph_class="all"))
    full = find_coentropic_pairs(SearchConfig(n=8, graph_class="all", group_by_edges=False))
    eq = {tuple(p.graph6) for p in full.coentropic_pairs if p.equal_edges}
    assert eq == found_pairs(grouped)
    diff = found_pairs(full) - found_pairs(grouped)
    assert all(p.m[0] != p.m[1] for p in full.coentropic_pairs if tuple(p.graph6) in diff)


def test_graph6_source_matches_internal(tmp_path):
    rng = random.Random(2)
    lines = []
    for g in enumerate_graphs(7):
        perm = list(range(7))
        rng.shuffle(perm)
        lines.append(graph6_encode(g.relabel(perm)))
        if rng.random() < 0.2:
            lines.append(graph6_encode(g))  # duplicates are collapsed
    rng.shuffle(lines)
    path = tmp_path / "n7.g6"
    path.write_text("\n".join(lines) + "\n")
    for cls in ("all", "connected"):
        internal = find_coentropic_pairs(SearchConfig(n=7, graph_class=cls))
        external = find_coentropic_pairs(SearchConfig(n=7, graph_class=cls, graph6_path=str(path)))
        assert [p.graph6 for p in internal.coentropic_pairs] == [p.graph6 for p in external.coentropic_pairs]
        assert internal.graphs_scanned == external.graphs_scanned


def test_graph6_source_errors(tmp_path):
    bad = tmp_path / "bad.g6"
    bad.write_text("F??\n")
    with pytest.raises(SourceError):
        find_coentropic_pairs(SearchConfig(n=7, graph6_path=str(bad)))
    wrong_n = tmp_path / "n5.g6"
    wrong_n.write_text("D??\n")
    with pytest.raises(SourceError):
        find_coentropic_pairs(SearchConfig(n=7, graph6_path=str(wrong_n)))
    with pytest.raises(SourceError):
        find_coentropic_pairs(SearchConfig(n=7, graph6_path=str(tmp_path / "missing.g6")))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n=8, match_digits=58)
    with pytest.raises(ValueError):
        SearchConfig(n=8, graph_class="trees")
    with pytest.raises(ValueError):
        SearchConfig(n=11)


def test_cache_round_trip(tmp_path):
    cache = str(tmp_path / "c.npz")
    cfg = SearchConfig(n=7, graph_class="connected", cache_path=cache)
    first = find_coentropic_pairs(cfg)
    second = find_coentropic_pairs(cfg)
    assert [p.graph6 for p in first.coentropic_pairs] == [p.graph6 for p in second.coentropic_pairs]
    # a cache built for another configuration is ignored
    other = find_coentropic_pairs(SearchConfig(n=7, graph_class="all", cache_path=cache))
    assert other.graphs_scanned == 1043


def test_workers_do_not_change_results():
    a = find_coentropic_pairs(SearchConfig(n=7, graph_class="all", workers=1))
    b = find_coentropic_pairs(SearchConfig(n=7, graph_class="all", workers=2))
    assert [p.to_json() for p in a.coentropic_pairs] == [p.to_json() for p in b.coentropic_pairs]


def test_outputs(tmp_path):
    rep = find_coentropic_pairs(SearchConfig(n=8, graph_class="connected"))
    out = tmp_path / "pairs.jsonl"
    search.write_pairs(str(out), rep.coentropic_pairs)
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == len(rep.coentropic_pairs)
    assert set(rows[0]) >= {"graph6", "m", "entropy", "match", "cospectral", "spectra"}
    summary = tmp_path / "summary.csv"
    search.write_summary(str(summary), [rep])
    row = next(csv.DictReader(summary.open()))
    assert row["n"] == "8" and row["class"] == "connected"


def test_verify_table_rows():
    rows = verify_table()
    assert len(rows) == 8
    for r in rows:
        assert r.passed, r
    assert rows[0].found == "3/5 ln(2) - 1/5 ln(3) + ln(5)"
    assert rows[3].expected == "1.91025843"


def test_locate_example_pair():
    g, h = locate_example_pair()
    assert g.n == h.n == 8 and g.m == h.m == 17
    for x, want in zip((g, h), EXAMPLE_8_SPECTRA):
        assert spectrum(charpoly(laplacian(x))).integers() == list(want)
    fg, fh = von_neumann_entropy(g), von_neumann_entropy(h)
    assert fg.exact == fh.exact
    assert fg.coefficients() == {2: F(-10, 17), 3: F(-9, 17), 17: F(1)}


def test_locate_example_pair_not_found():
    with pytest.raises(NotFound):
        locate_example_pair(np.zeros(1, dtype=np.int64))


def test_equal_edge_shortcut_check():
    rep = find_coentropic_pairs(SearchConfig(n=8, graph_class="connected"))
    assert all(search.check_equal_edge_shortcut(p) for p in rep.coentropic_pairs)


def float_oracle_pairs(n, connected, grouped):
    """Pairs whose numpy-eigvalsh entropies agree within 1e-7 (100x looser
    than the search's screening window), confirmed exactly."""
    graphs = [g for g in enumerate_graphs(n, connected) if g.m]
    L = np.array([laplacian(g) for g in graphs], dtype=np.float64)
    ev = np.clip(np.linalg.eigvalsh(L), 0.0, None)
    m = np.array([g.m for g in graphs])
    rho = ev / (2 * m[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        s = -np.where(rho > 1e-12, rho * np.log(rho), 0.0).sum(axis=1)
    order = np.argsort(s)
    out = set()
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            i, j = order[a], order[b]
            if s[j] - s[i] > 1e-7:
                break
            if grouped and m[i] != m[j]:
                continue
            g, h = graphs[min(i, j)], graphs[max(i, j)]
            if charpoly(laplacian(g)) == charpoly(laplacian(h)):
                continue
            if compare_fingerprints(von_neumann_entropy(g), von_neumann_entropy(h), 50).equal:
                out.add((graph6_encode(g), graph6_encode(h)))
    return out


@pytest.mark.parametrize("graph_class", ["all", "connected"])
@pytest.mark.parametrize("grouped", [True, False])
def test_search_matches_float_oracle_n8(graph_class, grouped):
    rep = find_coentropic_pairs(SearchConfig(n=8, graph_class=graph_class, group_by_edges=grouped))
    want = float_oracle_pairs(8, graph_class == "connected", grouped)
    assert want, "oracle found no pairs"
    assert found_pairs(rep) == want
