"""Von Neumann entropy of graph Laplacians, exact where possible.

For a graph with an integral Laplacian spectrum, the entropy of
``rho_G = L / 2m`` is

    S = ln(2m) - (1/2m) * sum_i lambda_i ln(lambda_i)
      = sum_p c_p ln(p),   c_p = v_p(2m) - (1/2m) sum_i lambda_i v_p(lambda_i)

with ``v_p`` the p-adic valuation.  Logarithms of distinct primes are
linearly independent over Q, so two such entropies are equal exactly when
their coefficient maps are.  Other spectra get a high-precision decimal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .graph import EmptyGraph, Graph
from .spectral import Spectrum, charpoly, laplacian, spectrum

DEFAULT_DIGITS = 60


@lru_cache(maxsize=4096)
def factorize(k: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of a positive integer as ``((p, e), ...)``."""
    if k < 1:
        raise ValueError("factorize needs a positive integer")
    out = []
    p = 2
    while p * p <= k:
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if k > 1:
        out.append((k, 1))
    return tuple(out)


@dataclass(frozen=True)
class EntropyFingerprint:
    """An entropy value, exact as ``sum_p c_p ln p`` when ``kind == "exact"``.

    ``numeric`` is always present, good to ``precision_digits`` digits.
    """

    kind: str
    exact: tuple[tuple[int, Fraction], ...] | None
    numeric: mpmath.mpf
    precision_digits: int

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def coefficients(self) -> dict[int, Fraction]:
        if self.exact is None:
            raise ValueError("numeric fingerprint has no prime-log form")
        return dict(self.exact)

    def numeric_text(self, digits: int | None = None) -> str:
        d = self.precision_digits if digits is None else digits
        return mpmath.nstr(self.numeric, d, strip_zeros=False)

    def to_text(self) -> str:
        num = f"numeric({self.precision_digits}): {self.numeric_text()}"
        if self.exact is None:
            return num
        return f"exact: {_map_text(self.exact, '; ')} | {num}"

    def closed_form(self) -> str:
        if self.exact is None:
            return self.numeric_text(12)
        return format_prime_logs(dict(self.exact))


def _map_text(items, sep: str) -> str:
    return sep.join(f"{p}:{c}" for p, c in items) if items else "0"


def format_prime_logs(coeffs: dict[int, Fraction]) -> str:
    """``{2: 3/5, 3: -1/5, 5: 1}`` -> ``"3/5 ln(2) - 1/5 ln(3) + ln(5)"``."""
    parts = []
    for p in sorted(coeffs):
        c = coeffs[p]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = f"ln({p})" if mag == 1 else f"{mag} ln({p})"
        parts.append((sign, term))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text


def _eval_prime_logs(items, digits: int):
    with mpmath.workdps(digits + 10):
        total = mpmath.mpf(0)
        for p, c in items:
            total += mpmath.mpf(c.numerator) / c.denominator * mpmath.log(p)
        return total


def _clean(coeffs: dict[int, Fraction]) -> tuple[tuple[int, Fraction], ...]:
    return tuple(sorted((p, Fraction(c)) for p, c in coeffs.items() if c != 0))


def entropy_from_spectrum(spec: Spectrum, two_m: int, digits: int = DEFAULT_DIGITS,
                          normalized: bool = True) -> EntropyFingerprint:
    """Entropy of ``L / two_m`` (or of ``L`` itself when not normalized)."""
    if spec.is_integral:
        coeffs: dict[int, Fraction] = {}
        for lam in spec.integers():
            if lam <= 0:
                continue
            for p, e in factorize(lam):
                coeffs[p] = coeffs.get(p, Fraction(0)) - lam * e
        if normalized:
            coeffs = {p: c / two_m for p, c in coeffs.items()}
            for p, e in factorize(two_m):
                coeffs[p] = coeffs.get(p, Fraction(0)) + e
        items = _clean(coeffs)
        return EntropyFingerprint("exact", items, _eval_prime_logs(items, digits), digits)
    with mpmath.workdps(digits + 10):
        acc = mpmath.mpf(0)
        for e in spec.eigenvalues:
            lam = e.approx(digits + 10)
            if lam == 0:
                continue
            acc += lam * mpmath.log(lam)
        if normalized:
            value = mpmath.log(two_m) - acc / two_m
        else:
            value = -acc
    return EntropyFingerprint("numeric", None, value, digits)


def von_neumann_entropy(g: Graph, digits: int = DEFAULT_DIGITS) -> EntropyFingerprint:
    """S(rho_G) for rho_G = L(G) / 2m, in nats."""
    if g.m == 0:
        raise EmptyGraph("entropy of rho_G needs at least one edge")
    spec = spectrum(charpoly(laplacian(g)))
    return entropy_from_spectrum(spec, 2 * g.m, digits)


def unnormalized_entropy(g: Graph, digits: int = DEFAULT_DIGITS) -> EntropyFingerprint:
    """-sum lambda ln lambda over the (un-normalized) Laplacian spectrum."""
    spec = spectrum(charpoly(laplacian(g)))
    return entropy_from_spectrum(spec, 2 * g.m, digits, normalized=False)


def normalize_unnormalized(shat: EntropyFingerprint, m: int) -> EntropyFingerprint:
    """Apply S = ln(2m) + S_hat / 2m to an un-normalized fingerprint."""
    two_m = 2 * m
    with mpmath.workdps(shat.precision_digits + 10):
        value = mpmath.log(two_m) + shat.numeric / two_m
    if shat.exact is None:
        return EntropyFingerprint("numeric", None, value, shat.precision_digits)
    coeffs = {p: c / two_m for p, c in shat.exact}
    for p, e in factorize(two_m):
        coeffs[p] = coeffs.get(p, Fraction(0)) + e
    return EntropyFingerprint("exact", _clean(coeffs), value, shat.precision_digits)


def entropy_key(f: EntropyFingerprint, quantization: int) -> str:
    """Bucketing key: the prime-log map, or the value truncated to
    ``quantization`` decimals."""
    if quantization > f.precision_digits:
        raise ValueError("quantization exceeds the fingerprint precision")
    if f.exact is not None:
        return _map_text(f.exact, ";")
    with mpmath.workdps(f.precision_digits + 10):
        scaled = int(mpmath.floor(f.numeric * mpmath.mpf(10) ** quantization))
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** quantization)
    return f"{sign}{whole}.{frac:0{quantization}d}" if quantization else f"{sign}{whole}"


class MatchKind(enum.Enum):
    EQUAL_EXACT = "EqualExact"
    EQUAL_TO_DIGITS = "EqualToDigits"
    DIFFERENT = "Different"


@dataclass(frozen=True)
class EntropyMatch:
    kind: MatchKind
    digits: int | None = None

    @property
    def equal(self) -> bool:
        return self.kind is not MatchKind.DIFFERENT

    def __str__(self) -> str:
        if self.kind is MatchKind.EQUAL_TO_DIGITS:
            return f"EqualToDigits({self.digits})"
        return self.kind.value


def agreeing_digits(f: EntropyFingerprint, h: EntropyFingerprint) -> int:
    """Number of decimals to which the numeric values agree (capped)."""
    cap = min(f.precision_digits, h.precision_digits)
    with mpmath.workdps(cap + 10):
        diff = abs(f.numeric - h.numeric)
        if diff == 0:
            return cap
        return max(0, min(cap, int(mpmath.floor(-mpmath.log10(diff)))))


def compare_fingerprints(f: EntropyFingerprint, h: EntropyFingerprint,
                         digits: int = DEFAULT_DIGITS) -> EntropyMatch:
    if digits < 10:
        raise ValueError("compare at 10 digits or more")
    if f.exact is not None and h.exact is not None:
        return EntropyMatch(MatchKind.EQUAL_EXACT if f.exact == h.exact else MatchKind.DIFFERENT)
    if min(f.precision_digits, h.precision_digits) < digits:
        raise ValueError("fingerprints are less precise than the requested comparison")
    with mpmath.workdps(digits + 10):
        if abs(f.numeric - h.numeric) > mpmath.mpf(10) ** (-digits + 2):
            return EntropyMatch(MatchKind.DIFFERENT)
    return EntropyMatch(MatchKind.EQUAL_TO_DIGITS, digits)


def compare_entropy(g: Graph, h: Graph, digits: int = DEFAULT_DIGITS) -> EntropyMatch:
    return compare_fingerprints(von_neumann_entropy(g, digits), von_neumann_entropy(h, digits), digits)
