"""Graph matrices and their exact or high-precision spectra.

Integer matrices are plain ``numpy`` int64 arrays.  Characteristic
polynomials are computed over Python integers, so they are exact for any
size; the batched routines at the bottom trade that generality for speed on
graphs with at most 11 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import mpmath
import numpy as np
from numba import njit

from ._codes import code_to_masks
from .graph import Graph, IsolatedVertex, degrees


class NoConvergence(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# matrices

def laplacian(g: Graph) -> np.ndarray:
    L = np.diag(np.array(degrees(g), dtype=np.int64))
    for u, v in g.edges:
        L[u, v] = L[v, u] = -1
    return L


def signless_laplacian(g: Graph) -> np.ndarray:
    Q = np.diag(np.array(degrees(g), dtype=np.int64))
    for u, v in g.edges:
        Q[u, v] = Q[v, u] = 1
    return Q


def oriented_incidence(g: Graph, sources: Sequence[int] | None = None) -> np.ndarray:
    """n x m incidence matrix; column e has +1 at its source, -1 at its sink.

    ``sources[e]`` is the 1-based source vertex of edge ``e``; by default the
    smaller endpoint.
    """
    M = np.zeros((g.n, g.m), dtype=np.int64)
    for e, (u, v) in enumerate(g.edges):
        src = u if sources is None else sources[e] - 1
        if src not in (u, v):
            raise ValueError(f"source {src + 1} is not an endpoint of edge {e}")
        dst = v if src == u else u
        M[src, e] = 1
        M[dst, e] = -1
    return M


def arcs(g: Graph) -> list[tuple[int, int]]:
    """Arc order shared by the directed incidence matrix and the arc space:
    for each edge ``{u, v}`` with ``u < v``, arc ``(u, v)`` then ``(v, u)``."""
    out = []
    for u, v in g.edges:
        out.append((u, v))
        out.append((v, u))
    return out


def _require_no_isolated(g: Graph) -> None:
    iso = [v + 1 for v, d in enumerate(degrees(g)) if d == 0]
    if iso:
        raise IsolatedVertex(f"isolated vertices {iso}")


def directed_incidence(g: Graph) -> np.ndarray:
    """n x 2m incidence matrix of the symmetric digraph of ``g``.

    The column of arc ``(u, v)`` is ``a_u - a_v``: +1 at the source, -1 at
    the sink.
    """
    _require_no_isolated(g)
    Mbar = np.zeros((g.n, 2 * g.m), dtype=np.int64)
    for k, (s, t) in enumerate(arcs(g)):
        Mbar[s, k] = 1
        Mbar[t, k] = -1
    return Mbar


@dataclass(frozen=True)
class ScaledMatrix:
    """``scale * numer`` with an integer numerator, kept exact."""

    numer: np.ndarray
    scale: Fraction

    def to_fractions(self) -> list[list[Fraction]]:
        return [[self.scale * int(x) for x in row] for row in self.numer]

    def to_float(self) -> np.ndarray:
        return self.numer * float(self.scale)


def edge_laplacian_oriented(g: Graph, sources: Sequence[int] | None = None) -> np.ndarray:
    M = oriented_incidence(g, sources)
    return M.T @ M


def edge_laplacian_arcs(g: Graph) -> ScaledMatrix:
    Mbar = directed_incidence(g)
    return ScaledMatrix(Mbar.T @ Mbar, Fraction(1, 2))


def exact_rank(A) -> int:
    """Rank via fraction-free (Bareiss) elimination over the integers."""
    rows = [[int(x) for x in row] for row in np.asarray(A)]
    if not rows:
        return 0
    nr, nc = len(rows), len(rows[0])
    rank, prev = 0, 1
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, nr):
            f = rows[r][col]
            rows[r] = [(p * rows[r][c] - f * rows[rank][c]) // prev for c in range(nc)]
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


# ---------------------------------------------------------------------------
# characteristic polynomials

Number = Union[int, Fraction]


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial, coefficients in ascending degree."""

    coeffs: tuple[Number, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, text: str) -> "CharPoly":
        return cls(tuple(_normalize(Fraction(t)) for t in text.split(",")))

    def zero_multiplicity(self) -> int:
        k = 0
        while k < len(self.coeffs) - 1 and self.coeffs[k] == 0:
            k += 1
        return k

    def strip_zero_roots(self) -> tuple[Number, ...]:
        """Coefficients of ``p(x) / x^k`` with ``k`` the multiplicity of 0."""
        return self.coeffs[self.zero_multiplicity():]

    def __str__(self) -> str:
        """``x^3 - 4*x^2 + 3*x``."""
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = mono if mono and abs(c) == 1 else (f"{abs(c)}*{mono}" if mono else str(abs(c)))
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return text + "".join(f" {sign} {body}" for sign, body in terms[1:])


def _normalize(x: Number) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _charpoly_int(rows: list[list[int]]) -> list[int]:
    # Faddeev-LeVerrier; every division by k is exact over the integers.
    n = len(rows)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = [[sum(rows[i][t] * M[t][j] for t in range(n) if rows[i][t])
              + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        tr = sum(rows[i][t] * M[t][i] for i in range(n) for t in range(n) if rows[i][t])
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = q
    return coeffs


def charpoly(A: np.ndarray | ScaledMatrix) -> CharPoly:
    if isinstance(A, ScaledMatrix):
        base = _charpoly_int([[int(x) for x in row] for row in A.numer])
        d = len(base) - 1
        s = A.scale
        return CharPoly(tuple(_normalize(c * s ** (d - k)) for k, c in enumerate(base)))
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("charpoly needs a square matrix")
    return CharPoly(tuple(_charpoly_int([[int(x) for x in row] for row in A])))


# ---------------------------------------------------------------------------
# polynomial arithmetic over Q (ascending coefficient lists)

def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_eval(p: Sequence[Number], x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_deriv(p: Sequence[Number]) -> list:
    return _trim([k * p[k] for k in range(1, len(p))] or [0])


def _poly_divmod(a: Sequence[Number], b: Sequence[Number]) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    rem = _trim(a[:len(b) - 1] or [Fraction(0)])
    return _trim(q), rem


def _is_zero(p: Sequence[Number]) -> bool:
    return all(c == 0 for c in p)


def _poly_gcd(a: Sequence[Number], b: Sequence[Number]) -> list:
    a, b = _trim(list(map(Fraction, a))), _trim(list(map(Fraction, b)))
    while not _is_zero(b):
        a, b = b, _poly_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def _primitive(p: Sequence[Number]) -> tuple[int, ...]:
    from math import gcd, lcm
    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def squarefree_decomposition(p: Sequence[Number]) -> list[tuple[tuple[int, ...], int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with pairwise coprime
    squarefree ``f_i``.  Returns primitive integer factors with multiplicity,
    skipping constants."""
    out = []
    a = _trim(list(map(Fraction, p)))
    if len(a) <= 1:
        return out
    b = _poly_deriv(a)
    c = _poly_gcd(a, b)
    w = _poly_divmod(a, c)[0]
    y = _poly_divmod(b, c)[0]
    i = 1
    while len(w) > 1:
        z = [yc - wc for yc, wc in zip(_pad(y, len(w)), _pad(_poly_deriv(w), len(w)))]
        z = _trim(z)
        g = _poly_gcd(w, z) if not _is_zero(z) else [c / w[-1] for c in w]
        if len(g) > 1:
            out.append((_primitive(g), i))
        w = _poly_divmod(w, g)[0]
        y = _poly_divmod(z, g)[0] if not _is_zero(z) else [Fraction(0)]
        i += 1
    return out


def _pad(p: list, n: int) -> list:
    return list(p) + [Fraction(0)] * (n - len(p))


def sturm_sequence(p: Sequence[int]) -> list[list[Fraction]]:
    seq = [_trim(list(map(Fraction, p))), _poly_deriv(list(map(Fraction, p)))]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        r = _poly_divmod(seq[-2], seq[-1])[1]
        if _is_zero(r):
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq: list[list[Fraction]], x: Fraction) -> int:
    count, last = 0, 0
    for p in seq:
        v = _poly_eval(p, x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def _sign_at(p: Sequence[int], x: Fraction) -> int:
    # sign of p(num/den) * den^d, all in integers
    num, den = x.numerator, x.denominator
    d = len(p) - 1
    acc = 0
    for k in range(d, -1, -1):
        acc = acc * num + p[k] * den ** (d - k)
    return (acc > 0) - (acc < 0)


def _isolate_from_floats(p: Sequence[int]) -> list[tuple[Fraction, Fraction]] | None:
    """Tight intervals around float root estimates, or None when the exact
    sign check cannot confirm them.  A degree-d polynomial with d sign
    changes along the probe points has exactly one root in each changing
    interval."""
    d = len(p) - 1
    if d == 1:
        r = Fraction(-p[0], p[1])
        return [(r - 1, r)]
    est = np.roots(np.array(p[::-1], dtype=np.float64))
    if not np.all(np.abs(est.imag) <= 1e-6 * (1 + np.abs(est.real))):
        return None
    est = np.sort(est.real)
    probes: list[Fraction] = []
    for r in est:
        eps = 1e-9 * max(1.0, abs(r))
        probes += [Fraction(float(r - eps)), Fraction(float(r + eps))]
    if any(b <= a for a, b in zip(probes, probes[1:])):
        return None
    signs = [_sign_at(p, x) for x in probes]
    out = []
    for k in range(d):
        lo_s, hi_s = signs[2 * k], signs[2 * k + 1]
        if lo_s == 0 or hi_s == 0 or lo_s == hi_s:
            return None
        out.append((probes[2 * k], probes[2 * k + 1]))
    return out


def isolate_real_roots(p: Sequence[int]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(lo, hi]`` each holding one root of squarefree ``p``."""
    p = list(p)
    if all(isinstance(c, int) for c in p):
        fast = _isolate_from_floats(p)
        if fast is not None:
            return fast
    lead = abs(Fraction(p[-1]))
    bound = 1 + max((abs(Fraction(c)) / lead for c in p[:-1]), default=Fraction(0))
    bound = Fraction(int(bound) + 1)
    seq = sturm_sequence(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound, _sign_changes(seq, -bound), _sign_changes(seq, bound))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count == 0:
            continue
        if count == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        vmid = _sign_changes(seq, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# spectra

@dataclass(frozen=True)
class ExactInt:
    value: int

    def approx(self, digits: int = 30):
        return mpmath.mpf(self.value)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Isolated:
    """The unique root of squarefree ``factor`` inside ``(lo, hi]``."""

    factor: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    def approx(self, digits: int = 30):
        return _refine(self.factor, self.lo, self.hi, digits)

    def __str__(self) -> str:
        return mpmath.nstr(self.approx(20), 15)


Eigenvalue = Union[ExactInt, Isolated]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[Eigenvalue, ...]
    is_integral: bool

    def integers(self) -> list[int]:
        if not self.is_integral:
            raise ValueError("spectrum is not integral")
        return [e.value for e in self.eigenvalues]

    def multiplicity_of_zero(self) -> int:
        return sum(1 for e in self.eigenvalues if isinstance(e, ExactInt) and e.value == 0)

    def to_text(self) -> str:
        return "[" + ", ".join(str(e) for e in self.eigenvalues) + "]"


def _integer_root_bound(p: Sequence[int]) -> int:
    # Fujiwara: every root has modulus <= 2 max |a_{d-k}/a_d|^(1/k).
    d = len(p) - 1
    best = 0.0
    for k in range(1, d + 1):
        c = abs(p[d - k])
        if c:
            best = max(best, c ** (1.0 / k))
    return int(2 * best) + 2


def _deflate(p: list[int], r: int) -> list[int]:
    # synthetic division by (x - r); caller guarantees p(r) == 0
    d = len(p) - 1
    q = [0] * d
    acc = 0
    for k in range(d, 0, -1):
        acc = acc * r + p[k]
        q[k - 1] = acc
    return q


def spectrum(p: CharPoly) -> Spectrum:
    coeffs = [int(c) for c in p.coeffs]
    if any(Fraction(c) != Fraction(o) for c, o in zip(coeffs, p.coeffs)):
        raise ValueError("spectrum() needs integer coefficients")
    if coeffs[-1] != 1:
        raise ValueError("spectrum() needs a monic polynomial")
    values: list[Eigenvalue] = []
    k = p.zero_multiplicity()
    values += [ExactInt(0)] * k
    rest = coeffs[k:]
    if len(rest) > 1:
        low = rest[0]
        bound = _integer_root_bound(rest)
        for r in sorted(range(-bound, bound + 1), key=abs):
            if r == 0 or low % r:
                continue
            while len(rest) > 1 and _poly_eval(rest, r) == 0:
                values.append(ExactInt(r))
                rest = _deflate(rest, r)
                low = rest[0]
            if len(rest) == 1:
                break
    integral = len(rest) == 1
    if not integral:
        for factor, mult in squarefree_decomposition(rest):
            for lo, hi in isolate_real_roots(factor):
                values += [Isolated(factor, lo, hi)] * mult
    values.sort(key=_bounds)
    if not _ordered(values):
        values.sort(key=lambda e: e.approx(30))
    return Spectrum(tuple(values), integral)


def _bounds(e: Eigenvalue) -> tuple[Fraction, Fraction]:
    if isinstance(e, ExactInt):
        return Fraction(e.value), Fraction(e.value)
    return e.lo, e.hi


def _ordered(values: list[Eigenvalue]) -> bool:
    # sorted by interval iff consecutive distinct intervals do not overlap
    for a, b in zip(values, values[1:]):
        if a != b and _bounds(a)[1] > _bounds(b)[0]:
            return False
    return True


@lru_cache(maxsize=65536)
def _refine(factor: tuple[int, ...], lo: Fraction, hi: Fraction, digits: int):
    with mpmath.workdps(digits + 15):
        f = [mpmath.mpf(c) for c in factor]
        df = [k * f[k] for k in range(1, len(f))]
        a = mpmath.mpf(lo.numerator) / lo.denominator
        b = mpmath.mpf(hi.numerator) / hi.denominator
        fa = mpmath.polyval(f[::-1], a)
        tol = mpmath.mpf(10) ** (-(digits + 8))
        x = (a + b) / 2
        for _ in range(20 * (digits + 20)):
            fx = mpmath.polyval(f[::-1], x)
            if fx == 0:
                a = b = x
                break
            if (fx > 0) == (fa > 0):
                a, fa = x, fx
            else:
                b = x
            dfx = mpmath.polyval(df[::-1], x)
            xn = x - fx / dfx if dfx != 0 else a
            if not (a < xn < b):
                xn = (a + b) / 2
            if abs(xn - x) < tol or b - a < tol:
                x = xn
                break
            x = xn
        else:
            raise NoConvergence("root refinement did not converge")
        return +x


def refine_root(s: Spectrum, index: int, digits: int):
    """Eigenvalue ``index`` (ascending order) as an mpf within ``10**-digits``."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    e = s.eigenvalues[index]
    with mpmath.workdps(digits + 5):
        return +e.approx(digits)


# ---------------------------------------------------------------------------
# floating point: cyclic Jacobi

@njit(cache=True)
def _jacobi_inplace(a, max_sweeps):
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    if scale == 0.0:
        return 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if off <= 1e-30 * scale:
            return sweep
        # skip rotations that are negligible in the first sweeps
        thresh = 0.2 * off / (n * n) if sweep < 3 else 0.0
        for p in range(n):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq * apq <= thresh or apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


def eig_double(A, max_sweeps: int = 100) -> list[float]:
    a = np.array(A, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eig_double needs a square matrix")
    if not np.array_equal(a, a.T):
        raise ValueError("eig_double needs a symmetric matrix")
    if _jacobi_inplace(a, max_sweeps) < 0:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    return sorted(float(x) for x in np.diag(a))


# ---------------------------------------------------------------------------
# batched kernels over packed graph codes (n <= 11)

@njit(cache=True)
def _laplacian_from_masks(masks, n, L):
    for i in range(n):
        d = 0
        for j in range(n):
            if (masks[i] >> j) & 1:
                L[i, j] = -1
                d += 1
            else:
                L[i, j] = 0
        L[i, i] = d


@njit(cache=True)
def charpoly_batch(codes, n):
    """Laplacian characteristic polynomials (ascending) for packed graphs.

    int64 is exact here: Laplacian eigenvalues are at most 2(n-1), so every
    intermediate of the recurrence is bounded by (2n)**(n+1) < 2**63 for
    n <= 11.
    """
    N = codes.shape[0]
    out = np.zeros((N, n + 1), dtype=np.int64)
    masks = np.zeros(n, dtype=np.int64)
    L = np.zeros((n, n), dtype=np.int64)
    M = np.zeros((n, n), dtype=np.int64)
    T = np.zeros((n, n), dtype=np.int64)
    for g in range(N):
        code_to_masks(codes[g], n, masks)
        _laplacian_from_masks(masks, n, L)
        for i in range(n):
            for j in range(n):
                M[i, j] = 0
        out[g, n] = 1
        for k in range(1, n + 1):
            c_prev = out[g, n - k + 1]
            for i in range(n):
                for j in range(n):
                    acc = 0
                    for t in range(n):
                        if L[i, t] != 0:
                            acc += L[i, t] * M[t, j]
                    T[i, j] = acc
            for i in range(n):
                for j in range(n):
                    M[i, j] = T[i, j]
                M[i, i] += c_prev
            tr = 0
            for i in range(n):
                for t in range(n):
                    if L[i, t] != 0:
                        tr += L[i, t] * M[t, i]
            out[g, n - k] = -tr // k
    return out


@njit(cache=True)
def laplacian_eigs_batch(codes, n):
    N = codes.shape[0]
    out = np.zeros((N, n), dtype=np.float64)
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
        for i in range(n):
            out[g, i] = a[i, i]
        out[g].sort()
    return out
