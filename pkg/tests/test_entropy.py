from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings

from coentropic.canon import enumerate_graphs
from coentropic.entropy import (EntropyMatch, MatchKind, agreeing_digits, compare_entropy,
                                compare_fingerprints, entropy_key, factorize, format_prime_logs,
                                normalize_unnormalized, unnormalized_entropy, von_neumann_entropy)
from coentropic.graph import EmptyGraph, Graph, components, from_edge_list
from coentropic.known_pairs import TABLE_9, table_graphs
from coentropic.spectral import laplacian

from test_graph import graphs

K2 = from_edge_list(2, [(1, 2)])
STAR3 = from_edge_list(3, [(1, 2), (1, 3)])
EX_G = "G?B~v{"  # spectrum 0,3,3,3,3,6,8,8


def complete(n):
    return from_edge_list(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def numpy_entropy(g: Graph) -> float:
    ev = np.linalg.eigvalsh(laplacian(g).astype(float)) / (2 * g.m)
    ev = ev[ev > 1e-12]
    return float(-(ev * np.log(ev)).sum())


def test_factorize():
    assert factorize(1) == ()
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert factorize(97) == ((97, 1),)
    with pytest.raises(ValueError):
        factorize(0)


def test_example_8_entropy():
    from coentropic.graph import graph6_decode
    f = von_neumann_entropy(graph6_decode(EX_G))
    assert f.is_exact
    assert f.coefficients() == {2: F(1) - F(54, 34), 3: F(-18, 34), 17: F(1)}
    with mpmath.workdps(70):
        want = mpmath.log(34) - (18 * mpmath.log(3) + 54 * mpmath.log(2)) / 34
        assert abs(f.numeric - want) < mpmath.mpf(10) ** -58


def test_small_closed_forms():
    assert von_neumann_entropy(K2).coefficients() == {}
    assert von_neumann_entropy(K2).numeric == 0
    f = von_neumann_entropy(STAR3)
    assert f.coefficients() == {2: F(2), 3: F(-3, 4)}
    assert f.closed_form() == "2 ln(2) - 3/4 ln(3)"
    assert abs(float(f.numeric) - 0.5623) < 1e-4
    for n in range(3, 9):
        assert von_neumann_entropy(complete(n)).coefficients() == {p: F(e) for p, e in factorize(n - 1)}


def test_unnormalized_examples():
    assert unnormalized_entropy(K2).coefficients() == {2: F(-2)}
    from coentropic.graph import graph6_decode
    assert unnormalized_entropy(graph6_decode(EX_G)).coefficients() == {2: F(-54), 3: F(-18)}
    assert unnormalized_entropy(Graph(3, ())).coefficients() == {}


def test_empty_graph_rejected():
    with pytest.raises(EmptyGraph):
        von_neumann_entropy(Graph(4, ()))


def test_format_prime_logs():
    assert format_prime_logs({2: F(3, 5), 3: F(-1, 5), 5: F(1)}) == "3/5 ln(2) - 1/5 ln(3) + ln(5)"
    assert format_prime_logs({3: F(-1)}) == "-ln(3)"
    assert format_prime_logs({}) == "0"


def test_normalization_identity_on_table():
    for row in range(len(TABLE_9)):
        for g in table_graphs(row):
            s = von_neumann_entropy(g)
            via = normalize_unnormalized(unnormalized_entropy(g), g.m)
            if s.is_exact:
                assert via.exact == s.exact
            assert agreeing_digits(via, s) >= 58


def test_equal_edges_shat_iff_s():
    for row in range(len(TABLE_9)):
        g, h = table_graphs(row)
        assert g.m == h.m
        assert compare_fingerprints(unnormalized_entropy(g), unnormalized_entropy(h), 50).equal
        assert compare_entropy(g, h, 50).equal


def test_entropy_key():
    f = von_neumann_entropy(table_graphs(0)[0])
    assert entropy_key(f, 10) == "2:3/5;3:-1/5;5:1"
    assert entropy_key(von_neumann_entropy(K2), 10) == "0"
    g, h = table_graphs(3)
    fg, fh = von_neumann_entropy(g), von_neumann_entropy(h)
    assert not fg.is_exact
    assert entropy_key(fg, 8) == entropy_key(fh, 8) == "1.91025843"
    with pytest.raises(ValueError):
        entropy_key(fg, 61)


def test_compare_entropy():
    assert compare_entropy(K2, complete(3)).kind is MatchKind.DIFFERENT
    assert compare_entropy(STAR3, STAR3).kind is MatchKind.EQUAL_EXACT
    g, h = table_graphs(3)
    m = compare_entropy(g, h, 50)
    assert m == EntropyMatch(MatchKind.EQUAL_TO_DIGITS, 50) and str(m) == "EqualToDigits(50)"
    p4 = from_edge_list(4, [(1, 2), (2, 3), (3, 4)])
    # irrational spectra only ever match to a number of digits
    assert compare_entropy(p4, p4.relabel([3, 2, 1, 0])).kind is MatchKind.EQUAL_TO_DIGITS
    with pytest.raises(ValueError):
        compare_entropy(K2, K2, 9)


def test_fingerprint_text():
    f = von_neumann_entropy(table_graphs(0)[0])
    assert f.to_text().startswith("exact: 2:3/5; 3:-1/5; 5:1 | numeric(60): 1.")
    g = von_neumann_entropy(table_graphs(3)[0], 30)
    assert g.to_text() == "numeric(30): " + g.numeric_text()


def test_entropy_bounds_all_n6():
    for n in range(2, 7):
        for g in enumerate_graphs(n):
            if g.m == 0:
                continue
            s = von_neumann_entropy(g, 30)
            with mpmath.workdps(40):
                upper = mpmath.log(n - components(g).w)
                eps = mpmath.mpf(10) ** -25
                assert -eps <= s.numeric <= upper + eps


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_entropy_matches_numpy_oracle(g):
    if g.m == 0:
        return
    f = von_neumann_entropy(g, 30)
    assert abs(float(f.numeric) - numpy_entropy(g)) < 1e-10
    if f.is_exact:
        with mpmath.workdps(40):
            total = sum(mpmath.mpf(c.numerator) / c.denominator * mpmath.log(p)
                        for p, c in f.exact)
            assert abs(total - f.numeric) < mpmath.mpf(10) ** -28
