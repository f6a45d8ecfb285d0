"""Dense Gaussian elimination with partial pivoting over mpmath numbers.

The systems here are small (at most a few hundred unknowns) but badly
scaled, so the solver works in whatever precision the caller's context
carries and follows the factorization with one step of iterative
refinement whose residual is accumulated at twice that precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import SingularSystemError

logger = logging.getLogger(__name__)

PIVOT_TOL = None
GROWTH_WARN = 1e6


def pivot_floor(bits: int) -> float:
    """Relative pivot threshold: half the working digits.

    At 53 bits this is ~1e-8; at the default 128 bits ~5e-20.
    """
    return 2.0 ** (-(bits // 2))


@dataclass(frozen=True)
class DenseSolution:
    x: list
    residual_norm: object
    growth_factor: float

    @property
    def ill_conditioned(self) -> bool:
        return self.growth_factor > GROWTH_WARN


def _lu(ctx, a, pivot_tol):
    n = len(a)
    if pivot_tol is None:
        pivot_tol = pivot_floor(ctx.prec)
    lu = [[ctx.mpf(v) for v in row] for row in a]
    perm = list(range(n))
    biggest = max((abs(v) for row in lu for v in row), default=ctx.zero)
    if biggest == 0:
        raise SingularSystemError("zero matrix")
    floor = biggest * pivot_tol
    running = biggest
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(lu[r][col]))
        if abs(lu[piv][col]) <= floor:
            raise SingularSystemError(
                f"singular system: pivot {ctx.nstr(abs(lu[piv][col]), 5)} in column {col} "
                f"below {pivot_tol:.3g} x largest entry"
            )
        if piv != col:
            lu[col], lu[piv] = lu[piv], lu[col]
            perm[col], perm[piv] = perm[piv], perm[col]
        pivot = lu[col][col]
        for r in range(col + 1, n):
            f = lu[r][col] / pivot
            lu[r][col] = f
            if f:
                row_r, row_c = lu[r], lu[col]
                for c in range(col + 1, n):
                    row_r[c] -= f * row_c[c]
        tail = max((abs(lu[r][c]) for r in range(col + 1, n) for c in range(col + 1, n)), default=ctx.zero)
        running = max(running, tail)
    return lu, perm, float(running / biggest)


def _substitute(lu, perm, b):
    n = len(lu)
    y = [b[p] for p in perm]
    for i in range(n):
        row = lu[i]
        s = y[i]
        for j in range(i):
            s -= row[j] * y[j]
        y[i] = s
    for i in range(n - 1, -1, -1):
        row = lu[i]
        s = y[i]
        for j in range(i + 1, n):
            s -= row[j] * y[j]
        y[i] = s / row[i]
    return y


def _residual(ctx, a, x, b):
    with ctx.extraprec(ctx.prec):
        return [ctx.mpf(bi) - ctx.fsum(ctx.mpf(aij) * xj for aij, xj in zip(row, x)) for row, bi in zip(a, b)]


def _pow2_scale(ctx, values):
    big = max((abs(v) for v in values), default=ctx.zero)
    if big == 0:
        return ctx.one
    return ctx.ldexp(1, -int(ctx.floor(ctx.log(big, 2))))


def _equilibrate(ctx, a):
    """Power-of-two row then column scales, so scaling itself is exact."""
    n = len(a)
    rs = [_pow2_scale(ctx, row) for row in a]
    scaled = [[v * r for v in row] for row, r in zip(a, rs)]
    cs = [_pow2_scale(ctx, [scaled[i][j] for i in range(n)]) for j in range(n)]
    scaled = [[v * c for v, c in zip(row, cs)] for row in scaled]
    return scaled, rs, cs


def solve_dense(ctx, a, b, pivot_tol: float | None = PIVOT_TOL, equilibrate: bool = True) -> DenseSolution:
    """Solve ``a x = b`` in the precision of ``ctx``.

    Rows and columns are first equilibrated by powers of two.  Raises
    :class:`SingularSystemError` when a pivot falls below ``pivot_tol``
    times the largest (equilibrated) entry; by default the threshold
    follows the context precision (see :func:`pivot_floor`).  The
    returned residual is measured on the original, unscaled system.
    """
    n = len(a)
    if n == 0:
        return DenseSolution([], ctx.zero, 1.0)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("matrix must be square and match the right-hand side")
    a = [[ctx.mpf(v) for v in row] for row in a]
    rhs = [ctx.mpf(v) for v in b]
    if equilibrate:
        work, rs, cs = _equilibrate(ctx, a)
    else:
        work, rs, cs = a, [ctx.one] * n, [ctx.one] * n
    lu, perm, growth = _lu(ctx, work, pivot_tol)

    def step(res):
        y = _substitute(lu, perm, [v * r for v, r in zip(res, rs)])
        return [v * c for v, c in zip(y, cs)]

    x = step(rhs)
    # one refinement step
    r = [ctx.mpf(v) for v in _residual(ctx, a, x, rhs)]
    x = [xi + di for xi, di in zip(x, step(r))]
    res = max(abs(v) for v in _residual(ctx, a, x, rhs))
    if growth > GROWTH_WARN:
        logger.warning("elimination growth factor %.3g exceeds %.0e; consider more precision", growth, GROWTH_WARN)
    return DenseSolution(x, ctx.mpf(res), growth)
