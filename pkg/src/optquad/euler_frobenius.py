"""Euler-Frobenius polynomials and their roots inside the unit disk.

E_k(x) = sum_{i=0}^{k+1} Delta^i 0^{k+1} (x - 1)^{k+1-i} has integer
coefficients.  For even k all k roots are real, simple and negative, and
they come in reciprocal pairs, so exactly k/2 of them lie in (-1, 0).
Those are isolated with a Sturm sequence and refined by bisection on
dyadic rationals, with every sign decided in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .combinatorics import fd_zero
from .precision import context

__all__ = [
    "EulerFrobeniusPoly",
    "RootSet",
    "euler_polynomial",
    "reciprocal_check",
    "sturm_sequence",
    "count_real_roots",
    "isolate_roots",
    "unit_disk_roots",
]


@dataclass(frozen=True)
class EulerFrobeniusPoly:
    degree: int
    coeffs: tuple[int, ...]  # ascending powers

    def __call__(self, x):
        acc = x - x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def magnitude(self, x):
        """sum |c_j| |x|^j, the scale against which a residual is judged."""
        ax = abs(x)
        acc = ax - ax
        for c in reversed(self.coeffs):
            acc = acc * ax + abs(c)
        return acc


@dataclass(frozen=True)
class RootSet:
    m: int
    roots: tuple  # mpf, ascending
    precision_bits: int
    brackets: tuple[tuple[Fraction, Fraction], ...]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


@lru_cache(maxsize=None)
def euler_polynomial(k: int) -> EulerFrobeniusPoly:
    if k < 0:
        raise ValueError("k must be >= 0")
    coeffs = [0] * (k + 2)
    for i in range(k + 2):
        w = fd_zero(i, k + 1)
        if not w:
            continue
        n = k + 1 - i
        # (x - 1)^n expanded
        for j in range(n + 1):
            coeffs[j] += w * comb(n, j) * (-1) ** (n - j)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return EulerFrobeniusPoly(len(coeffs) - 1, tuple(coeffs))


def reciprocal_check(p: EulerFrobeniusPoly) -> bool:
    """True iff x^k p(1/x) == p(x), i.e. the coefficient list is a palindrome."""
    c = p.coeffs
    return all(c[j] == c[p.degree - j] for j in range(p.degree + 1))


# ---------------------------------------------------------------- Sturm machinery

def _trim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _rem(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and any(a):
        f = a[-1] / lead
        shift = len(a) - 1 - db
        for j, bj in enumerate(b):
            a[shift + j] -= f * bj
        a.pop()
        _trim(a)
        if len(a) - 1 < db:
            break
    return _trim(a) if a else [Fraction(0)]


@lru_cache(maxsize=None)
def sturm_sequence(coeffs: tuple[int, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Sturm chain of a square-free polynomial (ascending coefficients).

    Each member is rescaled by a positive constant, which leaves every
    sign-variation count unchanged while keeping the rationals small.
    """
    def normalize(p):
        lead = abs(p[-1])
        return [c / lead for c in p]

    p0 = [Fraction(c) for c in coeffs]
    p1 = [Fraction(j * c) for j, c in enumerate(coeffs)][1:] or [Fraction(0)]
    seq = [normalize(p0), normalize(p1)]
    while len(seq[-1]) > 1:
        r = _rem(seq[-2], seq[-1])
        if not any(r):
            break
        seq.append(normalize([-c for c in r]))
    return tuple(tuple(p) for p in seq)


def _sign_at(p, x) -> int:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _sign_at_inf(p, positive: bool) -> int:
    lead = p[-1]
    s = (lead > 0) - (lead < 0)
    if not positive and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def _variations(signs) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def count_real_roots(p: EulerFrobeniusPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots in (lo, hi]; ``None`` means infinite."""
    seq = sturm_sequence(p.coeffs)
    if lo is None:
        v_lo = _variations(_sign_at_inf(s, False) for s in seq)
    else:
        v_lo = _variations(_sign_at(s, Fraction(lo)) for s in seq)
    if hi is None:
        v_hi = _variations(_sign_at_inf(s, True) for s in seq)
    else:
        v_hi = _variations(_sign_at(s, Fraction(hi)) for s in seq)
    return v_lo - v_hi


# ---------------------------------------------------------------- root isolation

def _dyadic_sign(coeffs, a: int, e: int) -> int:
    """Sign of p(a / 2^e) from integers only."""
    d = len(coeffs) - 1
    acc = 0
    for j, c in enumerate(coeffs):
        acc += c * a**j << (e * (d - j))
    return (acc > 0) - (acc < 0)


def _isolate(p, lo: Fraction, hi: Fraction, out: list):
    n = count_real_roots(p, lo, hi)
    if n == 0:
        return
    if n == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    _isolate(p, lo, mid, out)
    _isolate(p, mid, hi, out)


def _refine(coeffs, lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # move to a common dyadic grid: endpoints a/2^e
    e = max(lo.denominator.bit_length(), hi.denominator.bit_length())
    a_lo = lo.numerator * (1 << e) // lo.denominator
    a_hi = hi.numerator * (1 << e) // hi.denominator
    assert Fraction(a_lo, 1 << e) == lo and Fraction(a_hi, 1 << e) == hi
    s_lo = _dyadic_sign(coeffs, a_lo, e)
    s_hi = _dyadic_sign(coeffs, a_hi, e)
    if s_lo == 0:
        return lo, lo
    if s_hi == 0:
        return hi, hi
    if s_lo == s_hi:
        raise ArithmeticError("bracket has no sign change")
    while True:
        width = Fraction(a_hi - a_lo, 1 << e)
        nearest = min(abs(Fraction(a_lo, 1 << e)), abs(Fraction(a_hi, 1 << e)))
        if a_hi != 0 and a_lo != 0 and width < Fraction(1, 1 << bits) * min(1, nearest):
            return Fraction(a_lo, 1 << e), Fraction(a_hi, 1 << e)
        a_lo, a_hi, e = 2 * a_lo, 2 * a_hi, e + 1
        mid = (a_lo + a_hi) // 2
        s = _dyadic_sign(coeffs, mid, e)
        if s == 0:
            return Fraction(mid, 1 << e), Fraction(mid, 1 << e)
        if s == s_lo:
            a_lo = mid
        else:
            a_hi = mid


def isolate_roots(p: EulerFrobeniusPoly, lo, hi, bits: int) -> list[tuple[Fraction, Fraction]]:
    """Ascending brackets, one per distinct root in (lo, hi], each narrower
    than 2^-bits relative to the root."""
    brackets: list = []
    _isolate(p, Fraction(lo), Fraction(hi), brackets)
    brackets.sort()
    return [_refine(p.coeffs, a, b, bits) for a, b in brackets]


@lru_cache(maxsize=None)
def unit_disk_roots(m: int, precision_bits: int = 128) -> RootSet:
    """The m-1 roots of E_{2m-2} in (-1, 0), ascending.

    Brackets are refined until their width is below 2^-precision_bits
    (and below that fraction of the root's magnitude), then the midpoint is
    rounded into a ``precision_bits`` mpmath number.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    p = euler_polynomial(2 * m - 2)
    refined = tuple(isolate_roots(p, -1, 0, precision_bits))
    if len(refined) != m - 1:
        raise ArithmeticError(
            f"expected {m - 1} roots of E_{2 * m - 2} in (-1, 0), isolated {len(refined)}"
        )
    ctx = context(precision_bits)
    roots = []
    for lo, hi in refined:
        mid = (lo + hi) / 2
        roots.append(ctx.mpf(mid.numerator) / mid.denominator)
    return RootSet(m, tuple(roots), precision_bits, refined)
