import itertools
from functools import lru_cache

import numpy as np
import pytest

from coentropic.graph import Graph

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")


@pytest.fixture
def record():
    def _record(key: str, ok: bool, detail: str) -> None:
        ACCEPTANCE[key] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
    return _record


# ---------------------------------------------------------------------------
# brute-force isomorphism oracle: minimum labeled code over all n! orderings

def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@lru_cache(maxsize=None)
def brute_class_ids(n: int) -> np.ndarray:
    """For every labeled graph on n vertices (bit k = k-th pair of
    ``_pairs(n)``), the minimum code over all vertex permutations."""
    pairs = _pairs(n)
    index = {p: k for k, p in enumerate(pairs)}
    codes = np.arange(1 << len(pairs), dtype=np.int64)
    best = codes.copy()
    for perm in itertools.permutations(range(n)):
        out = np.zeros_like(codes)
        for k, (i, j) in enumerate(pairs):
            a, b = perm[i], perm[j]
            t = index[(min(a, b), max(a, b))]
            out |= ((codes >> k) & 1) << t
        np.minimum(best, out, out=best)
    return best


def labeled_graph(n: int, code: int) -> Graph:
    return Graph(n, tuple(p for k, p in enumerate(_pairs(n)) if (code >> k) & 1))


def brute_class_count(n: int) -> int:
    return len(np.unique(brute_class_ids(n)))
