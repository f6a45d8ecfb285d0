"""Private mpmath contexts.

Every public computation builds its own :class:`mpmath.MPContext` so the
precision never leaks through mpmath's global ``mp`` object and callers in
different threads cannot clobber each other's setting.
"""

from __future__ import annotations

import os

import mpmath

ENV_VAR = "OPTQUAD_PRECISION_BITS"
FALLBACK_BITS = 128
MIN_BITS = 64


def default_bits() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return FALLBACK_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    return max(bits, MIN_BITS)


def context(bits: int) -> mpmath.MPContext:
    if bits < MIN_BITS:
        raise ValueError(f"precision_bits must be >= {MIN_BITS}")
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def powi(x, n: int):
    """x**n for integer n >= 0 by square-and-multiply (keeps the sign of negative x exact)."""
    if n < 0:
        raise ValueError("negative exponent")
    result = x - x + 1
    base = x
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result
