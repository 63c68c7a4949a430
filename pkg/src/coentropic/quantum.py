"""Graphs as bipartite pure states on (vertex space) x (arc space).

The arc space has one basis vector ``d[u,v]`` per ordered adjacent pair, in
the order given by :func:`coentropic.spectral.arcs`.  The incidence vector

    psi_G = 1/sqrt(2) * sum_{uv in E} (a_u - a_v) (x) (d[u,v] - d[v,u])

and its signless variant have every amplitude in ``{0, +-1/sqrt(2)}``, so
they are stored as integer multiples of ``1/sqrt(2)``; partial traces of
such states are exact rational matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any, Sequence

import numpy as np
import sympy

from .graph import EmptyGraph, Graph, GraphError, IsolatedVertex, degrees
from .spectral import arcs, charpoly, exact_rank, laplacian, signless_laplacian


class DimensionMismatch(ValueError):
    pass


class WeightError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PureState:
    dim_v: int
    dim_e: int
    amplitudes: np.ndarray
    # integer amplitudes in units of 1/sqrt(2), when the state is exact
    numer: np.ndarray | None = None
    norm_convention: str = "raw"
    arc_labels: tuple[tuple[int, int], ...] = ()

    @property
    def is_exact(self) -> bool:
        return self.numer is not None

    def matrix(self) -> np.ndarray:
        """The ``dim_v x dim_e`` reshaping (vertex index major)."""
        return self.amplitudes.reshape(self.dim_v, self.dim_e)

    def norm_squared(self):
        if self.numer is not None:
            return Fraction(int(np.sum(self.numer * self.numer)), 2)
        return float(np.sum(self.amplitudes * self.amplitudes))

    def normalized(self) -> "PureState":
        amps = self.amplitudes / np.sqrt(float(self.norm_squared()))
        return PureState(self.dim_v, self.dim_e, amps, None, "unit", self.arc_labels)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Real symmetric operator; ``entries`` is an object array of
    :class:`Fraction` when exact, else float64."""

    entries: np.ndarray
    trace_value: Any = None

    def __post_init__(self):
        if self.trace_value is None:
            object.__setattr__(self, "trace_value", self.trace())

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.entries.dtype == object

    def trace(self):
        return sum(self.entries[i, i] for i in range(self.dim))

    def to_float(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.float64)

    def equals(self, other) -> bool:
        """Exact entrywise equality with an integer/rational matrix."""
        other = np.asarray(other.entries if isinstance(other, DensityMatrix) else other)
        if other.shape != self.entries.shape:
            return False
        return all(Fraction(a) == Fraction(b) if _is_rational(a) and _is_rational(b) else a == b
                   for a, b in zip(self.entries.flat, other.flat))


def _is_rational(x) -> bool:
    return isinstance(x, (int, Rational, np.integer))


def _fraction_matrix(numer: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(numer.shape, dtype=object)
    for idx, x in np.ndenumerate(numer):
        out[idx] = Fraction(int(x), den)
    return out


def _check_state_graph(g: Graph) -> None:
    if g.m == 0:
        raise EmptyGraph("the incidence vector needs at least one edge")
    iso = [v + 1 for v, d in enumerate(degrees(g)) if d == 0]
    if iso:
        raise IsolatedVertex(f"isolated vertices {iso}")


def _incidence_state(g: Graph, signless: bool) -> PureState:
    _check_state_graph(g)
    arc_list = arcs(g)
    dim_e = len(arc_list)
    C = np.zeros((g.n, dim_e), dtype=np.int64)
    for k, (s, t) in enumerate(arc_list):
        C[s, k] = 1
        C[t, k] = 1 if signless else -1
    numer = C.reshape(-1)
    return PureState(g.n, dim_e, numer / np.sqrt(2.0), numer, "raw", tuple(arc_list))


def incidence_vector(g: Graph) -> PureState:
    """psi_G, with squared norm ``2m``."""
    return _incidence_state(g, signless=False)


def signless_incidence_vector(g: Graph) -> PureState:
    """phi_G = sum_{uv} (a_u + a_v)/sqrt(2) (x) (d[u,v] + d[v,u])."""
    return _incidence_state(g, signless=True)


def partial_trace_E(s: PureState) -> DensityMatrix:
    """Trace out the arc factor: ``dim_v x dim_v``."""
    if s.numer is not None:
        C = s.numer.reshape(s.dim_v, s.dim_e)
        return DensityMatrix(_fraction_matrix(C @ C.T, 2))
    A = s.matrix()
    return DensityMatrix(A @ A.T)


def partial_trace_V(s: PureState) -> DensityMatrix:
    """Trace out the vertex factor: ``dim_e x dim_e``."""
    if s.numer is not None:
        C = s.numer.reshape(s.dim_v, s.dim_e)
        return DensityMatrix(_fraction_matrix(C.T @ C, 2))
    A = s.matrix()
    return DensityMatrix(A.T @ A)


@dataclass(frozen=True)
class SchmidtData:
    coefficients: tuple[float, ...]
    rank: int


def schmidt(s: PureState, tolerance: float | None = None) -> SchmidtData:
    """Schmidt coefficients: singular values of the reshaped state.

    The default cutoff is ``1e-10`` times the largest coefficient.
    """
    sv = np.linalg.svd(s.matrix(), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return SchmidtData((), 0)
    tol = 1e-10 * sv[0] if tolerance is None else tolerance
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    kept = tuple(float(x) for x in sv if x > tol)
    return SchmidtData(kept, len(kept))


def schmidt_rank(g: Graph) -> int:
    """Schmidt rank of psi_G, i.e. the exact rank of L(G) = n - w(G)."""
    _check_state_graph(g)
    return exact_rank(laplacian(g))


def lu_equivalent(g: Graph, h: Graph) -> bool:
    """Whether psi_G and psi_H are related by local unitaries.

    Decided by exact Laplacian cospectrality; both graphs must have the same
    numbers of vertices and edges.
    """
    if g.n != h.n or g.m != h.m:
        raise DimensionMismatch(f"(n, m) = ({g.n}, {g.m}) vs ({h.n}, {h.m})")
    return charpoly(laplacian(g)) == charpoly(laplacian(h))


# ---------------------------------------------------------------------------
# edge-state mixtures

@dataclass(frozen=True)
class EdgeState:
    """Vertex-space vector ``a_u |u> + a_v |v>`` attached to edge ``{u, v}``
    (1-based), taken with probability ``weight``."""

    edge: tuple[int, int]
    weight: Any
    amplitudes: tuple[Any, Any]


@dataclass(frozen=True)
class EdgeStateEnsemble:
    states: tuple[EdgeState, ...] = field(default=())

    def __post_init__(self):
        for st in self.states:
            if float(st.weight) < 0:
                raise WeightError(f"negative weight on edge {st.edge}")
            au, av = st.amplitudes
            if abs(float(au * au + av * av) - 1.0) > 1e-12:
                raise ValueError(f"edge state on {st.edge} is not a unit vector")

    @classmethod
    def uniform(cls, g: Graph, signed: bool = True) -> "EdgeStateEnsemble":
        """Equal weights; states ``(|u> -+ |v>)/sqrt(2)`` for ``u < v``."""
        if g.m == 0:
            raise EmptyGraph("ensemble needs at least one edge")
        h = sympy.sqrt(2) / 2
        w = sympy.Rational(1, g.m)
        return cls(tuple(EdgeState((u, v), w, (h, -h if signed else h))
                         for u, v in g.edges_1based()))


def _to_exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, sympy.Basic):
        x = x if x.is_Rational else sympy.simplify(x)
        if x.is_Rational:
            return Fraction(int(x.p), int(x.q))
    return None


def mixture_density(e: EdgeStateEnsemble, n: int) -> DensityMatrix:
    """rho = sum_e w_e |e><e| on the n-dimensional vertex space.

    Exact (Fraction entries) whenever every entry simplifies to a rational,
    e.g. for sympy amplitudes such as ``sqrt(2)/2``.
    """
    total = sum((st.weight for st in e.states), 0)
    if abs(float(total) - 1.0) > 1e-12:
        raise WeightError(f"weights sum to {total}, not 1")
    rho = np.zeros((n, n), dtype=object)
    rho[:, :] = 0
    for st in e.states:
        u, v = st.edge
        if not (1 <= u <= n and 1 <= v <= n) or u == v:
            raise GraphError(f"bad edge {st.edge} for n={n}")
        idx = (u - 1, v - 1)
        for i, ai in zip(idx, st.amplitudes):
            for j, aj in zip(idx, st.amplitudes):
                rho[i, j] = rho[i, j] + st.weight * ai * aj
    exact = np.empty((n, n), dtype=object)
    for ij, x in np.ndenumerate(rho):
        q = _to_exact(x)
        if q is None:
            return DensityMatrix(np.array(rho, dtype=np.float64))
        exact[ij] = q
    return DensityMatrix(exact)


def normalized_laplacian_density(g: Graph) -> DensityMatrix:
    """rho_G = L(G) / 2m, exact."""
    if g.m == 0:
        raise EmptyGraph("rho_G needs at least one edge")
    return DensityMatrix(_fraction_matrix(laplacian(g), 2 * g.m))


def signless_density(g: Graph) -> DensityMatrix:
    """(D + A) / 2m, exact."""
    if g.m == 0:
        raise EmptyGraph("needs at least one edge")
    return DensityMatrix(_fraction_matrix(signless_laplacian(g), 2 * g.m))


def scaled(d: DensityMatrix, factor) -> DensityMatrix:
    if d.is_exact:
        f = Fraction(factor)
        out = np.empty(d.entries.shape, dtype=object)
        for idx, x in np.ndenumerate(d.entries):
            out[idx] = x * f
        return DensityMatrix(out)
    return DensityMatrix(d.entries * float(factor))


def format_amplitudes(s: PureState) -> list[str]:
    """Nonzero amplitudes as ``(v, (a,b)): k/√2`` lines, 1-based labels."""
    lines = []
    if s.numer is None:
        raise ValueError("only exact states have a k/√2 form")
    C = s.numer.reshape(s.dim_v, s.dim_e)
    for v in range(s.dim_v):
        for k in range(s.dim_e):
            c = int(C[v, k])
            if c:
                a, b = s.arc_labels[k]
                lines.append(f"({v + 1}, ({a + 1},{b + 1})): {c:+d}/√2")
    return lines
