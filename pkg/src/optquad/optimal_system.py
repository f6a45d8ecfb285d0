"""The reduced 2(m-1) x 2(m-1) system for the root weights d_k, p_k.

Interior weights of the optimal rule are
``h * (1 + sum_k d_k q_k^beta + p_k q_k^(N - beta))`` with q_k the roots of
E_{2m-2} inside the unit disk.  The unknowns d_k, p_k satisfy four families
of equations; rows are stacked in this fixed order:

1. j = 2..m-1:  sum_k sum_{i<=j} (d q + p q^(N+i) (-1)^(i+1)) / (q-1)^(i+1) D(i, j) = B_{j+1}/(j+1)
2. the same left side at j = 2m-2, equal to 0
3. j = 2..m-1:  sum_k sum_{i<=j} (1 - q^N) ((-1)^(i+1) d q^i - p q) / (q-1)^(i+1) D(i, j) = 0
4. sum_k sum_{i<=2m-2} ((-1)^(i+1) d q^(N+i) + p q) / (q-1)^(i+1) D(i, 2m-2) = 0

where D(i, j) = Delta^i 0^j.  Columns are d_1..d_{m-1}, p_1..p_{m-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinatorics import bernoulli, fd_zero
from .errors import ParameterError
from .euler_frobenius import RootSet
from .linalg import PIVOT_TOL, solve_dense
from .precision import context, powi

__all__ = ["SystemMatrix", "SystemSolution", "assemble", "solve", "z_p"]

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SystemMatrix:
    m: int
    N: int
    entries: tuple[tuple, ...]
    rhs: tuple
    precision_bits: int

    @property
    def dim(self) -> int:
        return len(self.rhs)


@dataclass(frozen=True)
class SystemSolution:
    m: int
    N: int
    d: tuple
    p: tuple
    residual_norm: object
    growth_factor: float
    precision_bits: int


def _row_first(ctx, qs, N, j):
    d_row, p_row = [], []
    for q in qs:
        qN = powi(q, N)
        inv = 1 / (q - 1)
        sd = sp = ctx.zero
        scale = inv
        qi = qN
        for i in range(j + 1):
            w = fd_zero(i, j)
            if w:
                sd += q * scale * w
                sp += (qi if i % 2 else -qi) * scale * w
            scale *= inv
            qi *= q
        d_row.append(sd)
        p_row.append(sp)
    return d_row + p_row


def _row_moment(ctx, qs, N, j):
    d_row, p_row = [], []
    for q in qs:
        factor = 1 - powi(q, N)
        inv = 1 / (q - 1)
        sd = sp = ctx.zero
        scale = inv
        qi = ctx.one
        for i in range(j + 1):
            w = fd_zero(i, j)
            if w:
                sd += (qi if i % 2 else -qi) * scale * w
                sp -= q * scale * w
            scale *= inv
            qi *= q
        d_row.append(factor * sd)
        p_row.append(factor * sp)
    return d_row + p_row


def _row_last(ctx, qs, N, j):
    d_row, p_row = [], []
    for q in qs:
        inv = 1 / (q - 1)
        sd = sp = ctx.zero
        scale = inv
        qi = powi(q, N)
        for i in range(j + 1):
            w = fd_zero(i, j)
            if w:
                sd += (qi if i % 2 else -qi) * scale * w
                sp += q * scale * w
            scale *= inv
            qi *= q
        d_row.append(sd)
        p_row.append(sp)
    return d_row + p_row


def assemble(m: int, N: int, roots: RootSet) -> SystemMatrix:
    if m < 2:
        raise ParameterError("m must be >= 2", "--m")
    if N < 2:
        raise ParameterError("N must be >= 2 for the closed-form construction", "--N")
    if len(roots) != m - 1 or roots.m != m:
        raise ValueError(f"need the {m - 1} roots for m={m}, got {len(roots)}")
    ctx = context(roots.precision_bits)
    qs = [ctx.mpf(q) for q in roots]
    rows, rhs = [], []
    for j in range(2, m):
        rows.append(_row_first(ctx, qs, N, j))
        b = bernoulli(j + 1) / (j + 1)
        rhs.append(ctx.mpf(b.numerator) / b.denominator)
    rows.append(_row_first(ctx, qs, N, 2 * m - 2))
    rhs.append(ctx.zero)
    for j in range(2, m):
        rows.append(_row_moment(ctx, qs, N, j))
        rhs.append(ctx.zero)
    rows.append(_row_last(ctx, qs, N, 2 * m - 2))
    rhs.append(ctx.zero)
    return SystemMatrix(m, N, tuple(tuple(r) for r in rows), tuple(rhs), roots.precision_bits)


def solve(sys: SystemMatrix, pivot_tol: float | None = PIVOT_TOL) -> SystemSolution:
    """Partial-pivoting elimination plus one refinement step.

    Raises :class:`~optquad.errors.SingularSystemError` on pivot collapse.
    """
    ctx = context(sys.precision_bits)
    out = solve_dense(ctx, sys.entries, sys.rhs, pivot_tol)
    k = sys.m - 1
    bnorm = max((abs(v) for v in sys.rhs), default=ctx.zero)
    if out.residual_norm >= RESIDUAL_TOL * (1 + bnorm):
        raise ArithmeticError(f"residual {ctx.nstr(out.residual_norm, 5)} too large after refinement")
    return SystemSolution(
        sys.m, sys.N, tuple(out.x[:k]), tuple(out.x[k:]), out.residual_norm, out.growth_factor, sys.precision_bits
    )


def z_p(sol: SystemSolution, roots: RootSet, p: int):
    """Z_p = sum_k sum_{i<=p} (d_k q^(N+i) + p_k q (-1)^(i+1)) / (1 - q)^(i+1) D(i, p)."""
    if p < 0 or p > 2 * sol.m:
        raise ValueError("p must lie in 0..2m")
    ctx = context(sol.precision_bits)
    total = ctx.zero
    for q, dk, pk in zip(roots, sol.d, sol.p):
        q = ctx.mpf(q)
        inv = 1 / (1 - q)
        scale = inv
        qi = powi(q, sol.N)
        for i in range(p + 1):
            w = fd_zero(i, p)
            if w:
                total += (dk * qi + (pk * q if i % 2 else -pk * q)) * scale * w
            scale *= inv
            qi *= q
    return total
