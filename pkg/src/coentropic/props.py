"""Exhaustive checks of the state-level identities over small graphs.

Each suite returns a :class:`SuiteResult`; the CLI ``check-props`` command
and the test suite both run these.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import sympy

from .canon import enumerate_graphs
from .graph import Graph, components, degrees
from .quantum import (incidence_vector, lu_equivalent, partial_trace_E, partial_trace_V,
                      schmidt, schmidt_rank, signless_incidence_vector)
from .spectral import charpoly, edge_laplacian_arcs, exact_rank, laplacian, signless_laplacian, spectrum

SCHMIDT_TOL = 1e-8


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {len(self.failures)} failed"


def state_graphs(n_max: int):
    """All isomorphism classes with 1 <= n <= n_max, m >= 1 and no isolated
    vertex (the graphs for which the incidence vector is defined)."""
    for n in range(2, n_max + 1):
        for g in enumerate_graphs(n):
            if g.m and min(degrees(g)) > 0:
                yield g


def partial_trace_suite(n_max: int = 7) -> SuiteResult:
    res = SuiteResult(f"partial traces of psi_G give L and arc edge-Laplacian (n <= {n_max})")
    for g in state_graphs(n_max):
        psi = incidence_vector(g)
        ok_e = partial_trace_E(psi).equals(laplacian(g))
        ok_v = partial_trace_V(psi).equals(edge_laplacian_arcs(g).to_fractions())
        res.checked += 1
        if not (ok_e and ok_v):
            res.failures.append(str(g))
    return res


def signless_suite(n_max: int = 5) -> SuiteResult:
    res = SuiteResult(f"partial trace of phi_G gives D + A (n <= {n_max})")
    for g in state_graphs(n_max):
        rho = partial_trace_E(signless_incidence_vector(g))
        res.checked += 1
        if not rho.equals(signless_laplacian(g)):
            res.failures.append(str(g))
    return res


def schmidt_suite(n_max: int = 7) -> SuiteResult:
    """Schmidt rank equals n - w, and squared Schmidt coefficients equal
    the nonzero Laplacian spectrum."""
    res = SuiteResult(f"Schmidt rank n - w and coefficients vs spectrum (n <= {n_max})")
    for n in range(1, n_max + 1):
        for g in enumerate_graphs(n):
            w = components(g).w
            res.checked += 1
            # the rank identity for every graph, isolated vertices included
            if exact_rank(laplacian(g)) != n - w:
                res.failures.append(f"rank(L) != n - w for {g}")
                continue
            if not g.m or min(degrees(g)) == 0:
                continue
            if schmidt_rank(g) != n - w:
                res.failures.append(f"schmidt_rank != n - w for {g}")
                continue
            sd = schmidt(incidence_vector(g))
            if sd.rank != n - w:
                res.failures.append(f"numeric Schmidt rank {sd.rank} for {g}")
                continue
            exact = [float(e.approx(20)) for e in spectrum(charpoly(laplacian(g))).eigenvalues]
            nonzero = sorted(x for x in exact if x != 0.0)
            got = sorted(c * c for c in sd.coefficients)
            if len(got) != len(nonzero) or np.max(np.abs(np.subtract(got, nonzero))) > SCHMIDT_TOL:
                res.failures.append(f"Schmidt coefficients vs spectrum for {g}")
    return res


def _sympy_charpoly(g: Graph) -> tuple:
    x = sympy.Symbol("x")
    return tuple(sympy.Matrix(laplacian(g).tolist()).charpoly(x).all_coeffs())


def _schmidt_equal(g: Graph, h: Graph) -> bool:
    a = schmidt(incidence_vector(g)).coefficients
    b = schmidt(incidence_vector(h)).coefficients
    return len(a) == len(b) and all(abs(x - y) <= SCHMIDT_TOL for x, y in zip(a, b))


def lu_suite(n_max: int = 6, random_pairs: int = 100, random_n: int = 7,
             seed: int = 0) -> SuiteResult:
    """lu_equivalent against an independent exact charpoly on every
    same-(n, m) pair, and against equal Schmidt coefficients on random
    pairs (half of them drawn from cospectral classes)."""
    res = SuiteResult(f"LU-equivalence vs cospectrality (n <= {n_max}) and Schmidt data "
                      f"({random_pairs} random pairs)")
    for n in range(1, n_max + 1):
        by_m: dict[int, list[tuple[Graph, tuple]]] = {}
        for g in enumerate_graphs(n):
            by_m.setdefault(g.m, []).append((g, _sympy_charpoly(g)))
        for group in by_m.values():
            for (g, pg), (h, ph) in combinations(group, 2):
                res.checked += 1
                if lu_equivalent(g, h) != (pg == ph):
                    res.failures.append(f"{g} vs {h}")
    rng = random.Random(seed)
    pool = [g for g in state_graphs(random_n) if g.n == random_n]
    by_nm: dict[tuple[int, int], list[Graph]] = {}
    for g in pool:
        by_nm.setdefault((g.n, g.m), []).append(g)
    by_poly: dict[tuple, list[Graph]] = {}
    for g in pool:
        by_poly.setdefault((g.m, charpoly(laplacian(g)).coeffs), []).append(g)
    cospectral = [c for c in by_poly.values() if len(c) > 1]
    groups = [c for c in by_nm.values() if len(c) > 1]
    for k in range(random_pairs):
        src = cospectral if k % 2 == 0 and cospectral else groups
        g, h = rng.sample(rng.choice(src), 2)
        res.checked += 1
        if lu_equivalent(g, h) != _schmidt_equal(g, h):
            res.failures.append(f"random pair {g} vs {h}")
    return res


def all_suites(n_max: int = 7) -> list[SuiteResult]:
    return [
        partial_trace_suite(n_max),
        schmidt_suite(n_max),
        lu_suite(min(n_max, 6), random_n=n_max),
        signless_suite(min(n_max, 5)),
    ]
