"""Exact integer and rational building blocks.

Bernoulli numbers, forward differences of powers at zero, and the two
power-sum closed forms that the coefficient formulas are built from.
Rationals are :class:`fractions.Fraction`; big integers are plain ``int``.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

__all__ = [
    "binomial",
    "bernoulli",
    "fd_zero",
    "fd_at",
    "power_sum_bernoulli",
    "geometric_power_sum",
]


def binomial(n: int, k: int) -> int:
    """C(n, k), zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be non-negative")
    return comb(n, k)


_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2.

    Values are produced by the recurrence sum_{k=0}^{n} C(n+1, k) B_k = 0
    and memoized.  The cache only ever grows, and it is extended under a
    lock, so concurrent readers see a consistent prefix.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        table = list(_bern)
        for k in range(len(table), n + 1):
            if k > 1 and k % 2 == 1:
                table.append(Fraction(0))
                continue
            s = sum((comb(k + 1, j) * table[j] for j in range(k)), Fraction(0))
            table.append(-s / (k + 1))
        # publish atomically
        _bern[len(_bern):] = table[len(_bern):]
    return _bern[n]


def fd_zero(i: int, k: int) -> int:
    """Forward difference Delta^i gamma^k evaluated at gamma = 0.

    Exact alternating sum sum_j (-1)^(i-j) C(i, j) j^k; equals i! S(k, i).
    """
    return fd_at(i, k, 0)


def fd_at(i: int, k: int, n: int) -> int:
    """Delta^i gamma^k evaluated at gamma = n (unit step)."""
    if i < 0 or k < 0:
        raise ValueError("order and power must be non-negative")
    return sum((-1) ** (i - j) * comb(i, j) * (n + j) ** k for j in range(i + 1))


def power_sum_bernoulli(beta: int, k: int) -> Fraction:
    """sum_{gamma=0}^{beta-1} gamma^k through the Bernoulli expansion.

    Only used as an independent check of direct summation.
    """
    if beta < 0 or k < 0:
        raise ValueError("arguments must be non-negative")
    total = Fraction(0)
    for j in range(1, k + 2):
        total += Fraction(comb(k + 1, j), k + 1) * bernoulli(k + 1 - j) * beta**j
    return total


def geometric_power_sum(q, n: int, k: int):
    """Closed form of sum_{gamma=0}^{n-1} q^gamma gamma^k for q != 1.

    ``q`` may be a float, a Fraction or an mpmath number; the result has the
    same kind.
    """
    if q == 1:
        raise ValueError("geometric_power_sum is singular at q = 1")
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    one = q - q + 1
    r = q / (one - q)
    head = sum(r**i * fd_zero(i, k) for i in range(k + 1))
    tail = sum(r**i * fd_at(i, k, n) for i in range(k + 1))
    return (head - q**n * tail) / (one - q)
