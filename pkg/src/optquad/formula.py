"""The optimal rule itself: node weights C[0..N] and endpoint-derivative weights A, B."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParameterError, SingularSystemError
from .euler_frobenius import RootSet, unit_disk_roots
from .optimal_system import SystemSolution, assemble, solve
from .precision import context, default_bits, powi

__all__ = ["QuadratureFormula", "build", "build_with_parts", "check_feasible", "interior_weight", "M_MAX"]

M_MAX = 20
MAX_AUTO_BITS = 1024


@dataclass(frozen=True)
class QuadratureFormula:
    """int_0^1 phi ~ sum C[b] phi(b h) + A phi'(0) + B phi'(1).

    Weights are mpmath numbers at ``precision_bits``.
    """

    m: int
    N: int
    C: tuple
    A: object
    B: object
    precision_bits: int
    h: object = field(init=False)

    def __post_init__(self):
        if len(self.C) != self.N + 1:
            raise ValueError("C must have N + 1 entries")
        ctx = context(self.precision_bits)
        object.__setattr__(self, "h", ctx.one / self.N)

    def nodes(self):
        ctx = context(self.precision_bits)
        return [ctx.mpf(b) / self.N for b in range(self.N + 1)]

    def moment(self, alpha: int):
        """sum C[b] (h b)^alpha + alpha B, the quadrature of x^alpha."""
        ctx = context(self.precision_bits)
        s = ctx.fsum(c * powi(x, alpha) for c, x in zip(self.C, self.nodes()))
        if alpha == 1:
            return s + self.A + self.B
        return s + alpha * self.B

    def to_floats(self) -> dict:
        return {
            "h": float(self.h),
            "C": [float(c) for c in self.C],
            "A": float(self.A),
            "B": float(self.B),
        }


def _check_range(m: int, N: int):
    if not isinstance(m, int) or m < 2 or m > M_MAX:
        raise ParameterError(f"m must be an integer in 2..{M_MAX}, got {m!r}", "--m")
    if not isinstance(N, int) or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N!r}", "--N")
    check_feasible(m, N)


def check_feasible(m: int, N: int):
    """N + 3 weights cannot meet m moment conditions when N + 3 < m."""
    if N + 3 < m:
        raise ParameterError(
            f"no rule with N={N} can integrate all polynomials of degree < {m}; need N >= {m - 3}", "--N"
        )


def interior_weight(sol: SystemSolution, roots: RootSet, beta: int):
    """h (1 + sum_k d_k q_k^beta + p_k q_k^(N - beta)) for 1 <= beta <= N-1."""
    if not 1 <= beta <= sol.N - 1:
        raise ValueError(f"beta must lie in 1..{sol.N - 1}")
    ctx = context(sol.precision_bits)
    s = ctx.one
    for q, dk, pk in zip(roots, sol.d, sol.p):
        q = ctx.mpf(q)
        s += dk * powi(q, beta) + pk * powi(q, sol.N - beta)
    return s / sol.N


def _assemble_formula(sol: SystemSolution, roots: RootSet) -> QuadratureFormula:
    ctx = context(sol.precision_bits)
    N = sol.N
    h = ctx.one / N
    c0 = cN = ctx.mpf(0.5)
    a = ctx.one / 12
    b = -ctx.one / 12
    for q, dk, pk in zip(roots, sol.d, sol.p):
        q = ctx.mpf(q)
        qN = powi(q, N)
        c0 += (pk * qN - dk * q) / (1 - q)
        cN += (dk * qN - pk * q) / (1 - q)
        a -= (dk * q + pk * qN * q) / (1 - q) ** 2
        b += (dk * qN * q + pk * q) / (1 - q) ** 2
    C = [h * c0] + [interior_weight(sol, roots, beta) for beta in range(1, N)] + [h * cN]
    return QuadratureFormula(sol.m, N, tuple(C), h * h * a, h * h * b, sol.precision_bits)


def build_with_parts(m: int, N: int, precision_bits: int | None = None):
    """Construct the rule and return ``(formula, roots, solution)``.

    With ``precision_bits=None`` the working precision starts at the
    default and doubles whenever elimination reports a singular pivot.
    """
    _check_range(m, N)
    if precision_bits is not None:
        return _build_at(m, N, precision_bits)
    # no explicit request: escalate until elimination stops collapsing
    bits = default_bits()
    while True:
        try:
            return _build_at(m, N, bits)
        except SingularSystemError:
            if bits >= MAX_AUTO_BITS:
                raise
            bits *= 2


def _build_at(m: int, N: int, bits: int):
    roots = unit_disk_roots(m, bits)
    sol = solve(assemble(m, N, roots))
    return _assemble_formula(sol, roots), roots, sol


def build(m: int, N: int, precision_bits: int | None = None) -> QuadratureFormula:
    """Optimal rule for L2^(m)(0,1) on N + 1 equispaced nodes.

    >>> f = build(2, 2)
    >>> [float(c) for c in f.C], float(f.A)
    ([0.25, 0.5, 0.25], 0.020833333333333332)
    """
    return build_with_parts(m, N, precision_bits)[0]
