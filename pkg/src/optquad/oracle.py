"""Brute-force ground truth: the full Lagrange (Wiener-Hopf) system.

Unknowns are C[0..N], A, B and the multipliers lambda_0..lambda_{m-1};
nothing about Euler-Frobenius roots is used, which is the point.  Every
entry is rational, so the matrix is built from Fractions and only rounded
when handed to the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .combinatorics import bernoulli, fd_zero
from .errors import ParameterError, SingularSystemError
from .euler_frobenius import RootSet
from .formula import QuadratureFormula, check_feasible
from .linalg import PIVOT_TOL, solve_dense
from .optimal_system import SystemSolution
from .precision import context, default_bits, powi

__all__ = ["WienerHopfSolution", "wiener_hopf_system", "solve_full", "lambda_closed", "DENSE_BUDGET"]

DENSE_BUDGET = 2000
RESIDUAL_TOL = 1e-10
MAX_AUTO_BITS = 4096


@dataclass(frozen=True)
class WienerHopfSolution:
    m: int
    N: int
    C: tuple
    A: object
    B: object
    lam: tuple
    residual_norm: object
    growth_factor: float
    precision_bits: int

    def formula(self) -> QuadratureFormula:
        return QuadratureFormula(self.m, self.N, self.C, self.A, self.B, self.precision_bits)


def _kernel_integral(m: int, a: Fraction) -> Fraction:
    # int_0^1 |x - a|^(2m-1) / (2 (2m-1)!) dx for 0 <= a <= 1
    return (a ** (2 * m) + (1 - a) ** (2 * m)) / (2 * factorial(2 * m))


def wiener_hopf_system(m: int, N: int) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact rows, ordered: node equations beta = 0..N, the two derivative
    equations, the constant and linear moments, then moments alpha = 2..m-1.

    Node rows are scaled by (2m-1)! so their entries are O(1).
    """
    h = Fraction(1, N)
    n = N + 3 + m
    f1 = factorial(2 * m - 1)
    f2 = factorial(2 * m - 2)
    f3 = factorial(2 * m - 3)
    iA, iB, il = N + 1, N + 2, N + 3
    rows, rhs = [], []
    scale = f1
    for beta in range(N + 1):
        x = h * beta
        row = [Fraction(0)] * n
        for gamma in range(N + 1):
            row[gamma] = scale * abs(x - h * gamma) ** (2 * m - 1) / (2 * f1)
        row[iA] = -scale * x ** (2 * m - 2) / (2 * f2)
        row[iB] = scale * (x - 1) ** (2 * m - 2) / (2 * f2)
        for alpha in range(m):
            row[il + alpha] = scale * x**alpha
        rows.append(row)
        rhs.append(scale * _kernel_integral(m, x))
    # derivative at 0
    row = [Fraction(0)] * n
    for gamma in range(N + 1):
        row[gamma] = (h * gamma) ** (2 * m - 2) / (2 * f2)
    row[iB] = Fraction(1, 2 * f3)
    row[il + 1] = Fraction(-1)
    rows.append(row)
    rhs.append(Fraction(1, 2 * f1))
    # derivative at 1
    row = [Fraction(0)] * n
    for gamma in range(N + 1):
        row[gamma] = (h * gamma - 1) ** (2 * m - 2) / (2 * f2)
    row[iA] = Fraction(-1, 2 * f3)
    for alpha in range(1, m):
        row[il + alpha] = Fraction(alpha)
    rows.append(row)
    rhs.append(Fraction(1, 2 * f1))
    row = [Fraction(0)] * n
    for gamma in range(N + 1):
        row[gamma] = Fraction(1)
    rows.append(row)
    rhs.append(Fraction(1))
    row = [Fraction(0)] * n
    for gamma in range(N + 1):
        row[gamma] = h * gamma
    row[iA] = row[iB] = Fraction(1)
    rows.append(row)
    rhs.append(Fraction(1, 2))
    for alpha in range(2, m):
        row = [Fraction(0)] * n
        for gamma in range(N + 1):
            row[gamma] = (h * gamma) ** alpha
        row[iB] = Fraction(alpha)
        rows.append(row)
        rhs.append(Fraction(1, alpha + 1))
    return rows, rhs


def _attempt(rows, rhs, bits, pivot_tol):
    ctx = context(bits)
    a = [[ctx.mpf(v.numerator) / v.denominator for v in row] for row in rows]
    b = [ctx.mpf(v.numerator) / v.denominator for v in rhs]
    return bits, ctx, solve_dense(ctx, a, b, pivot_tol), b


def solve_full(m: int, N: int, precision_bits: int | None = None, pivot_tol: float | None = PIVOT_TOL) -> WienerHopfSolution:
    if m < 2:
        raise ParameterError("m must be >= 2", "--m")
    if N < 1:
        raise ParameterError("N must be >= 1", "--N")
    if N + 3 + m > DENSE_BUDGET:
        raise ParameterError(f"N + 3 + m exceeds the dense budget of {DENSE_BUDGET}", "--N")
    check_feasible(m, N)
    rows, rhs = wiener_hopf_system(m, N)
    if precision_bits is not None:
        bits, ctx, out, b = _attempt(rows, rhs, precision_bits, pivot_tol)
    else:
        # inputs are exact rationals, so escalating precision is always sound
        bits = 2 * default_bits()
        while True:
            try:
                bits, ctx, out, b = _attempt(rows, rhs, bits, pivot_tol)
                break
            except SingularSystemError:
                if bits >= MAX_AUTO_BITS:
                    raise
                bits *= 2
    bnorm = max(abs(v) for v in b)
    if out.residual_norm >= RESIDUAL_TOL * (1 + bnorm):
        raise ArithmeticError(f"residual {ctx.nstr(out.residual_norm, 5)} too large after refinement")
    x = out.x
    return WienerHopfSolution(
        m, N, tuple(x[: N + 1]), x[N + 1], x[N + 2], tuple(x[N + 3 :]), out.residual_norm, out.growth_factor, bits
    )


def lambda_closed(sol: SystemSolution, roots: RootSet, f: QuadratureFormula, j: int):
    """Multiplier lambda_j from the root weights and the built rule.

    j = 0 uses the moment of order 2m-1; j >= 1 additionally needs the
    Bernoulli term and the root sum of order 2m-1-j.
    """
    m, N = sol.m, sol.N
    if not 0 <= j <= m - 1:
        raise ValueError(f"j must lie in 0..{m - 1}")
    ctx = context(sol.precision_bits)
    h = ctx.one / N
    xs = [ctx.mpf(b) / N for b in range(N + 1)]
    B = ctx.mpf(f.B)
    if j == 0:
        mom = ctx.fsum(ctx.mpf(c) * powi(-x, 2 * m - 1) for c, x in zip(f.C, xs))
        return 1 / (2 * ctx.mpf(factorial(2 * m))) + mom / (2 * factorial(2 * m - 1)) - B / (2 * factorial(2 * m - 2))
    r = 2 * m - 1 - j
    s = 2 * m - j
    bern = bernoulli(s)
    roots_sum = ctx.zero
    for q, dk, pk in zip(roots, sol.d, sol.p):
        q = ctx.mpf(q)
        inv = 1 / (q - 1)
        scale = inv
        qi = powi(q, N)
        for i in range(r + 1):
            w = fd_zero(i, r)
            if w:
                roots_sum += (-dk * q + (-qi * pk if i % 2 else qi * pk)) * scale * w
            scale *= inv
            qi *= q
    mom = ctx.fsum(ctx.mpf(c) * powi(-x, r) for c, x in zip(f.C, xs))
    inner = (
        ctx.mpf((-1) ** s) / (2 * s)
        - ctx.mpf(bern.numerator) / bern.denominator * powi(h, s) / s
        - powi(h, s) * roots_sum
        + mom / 2
        - r * B * (-1) ** (2 * m - 2 - j) / 2
    )
    return inner / (factorial(r) * factorial(j))
