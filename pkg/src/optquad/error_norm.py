"""Squared norm of the error functional, three independent ways.

``closed``
    the two-term expression in the Bernoulli number B_{2m} and the root
    weights d_k, p_k;
``direct``
    the quadratic form in (C, A, B) built from the kernel
    G(x) = |x|^(2m-1) / (2 (2m-1)!), with every integral in closed form;
``extremal``
    the Riesz representer psi = (-1)^m (l * G) assembled as an explicit
    piecewise polynomial and paired with the functional.

All three cancel many digits (terms of size 1/(2m+1)! against a result of
size h^(2m)), so they run in the rule's precision plus guard bits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb, factorial

from .combinatorics import bernoulli, fd_zero
from .euler_frobenius import RootSet
from .formula import QuadratureFormula
from .optimal_system import SystemSolution
from .precision import context, powi

__all__ = [
    "Method",
    "ErrorNorm",
    "ExtremalSpline",
    "norm_sq_closed",
    "norm_sq_direct",
    "build_extremal",
    "pair_with_functional",
    "MOMENT_TOL",
]

GUARD_BITS = 64
MOMENT_TOL = 1e-10


class Method(str, enum.Enum):
    CLOSED = "closed_form"
    DIRECT = "quadratic_form"
    EXTREMAL = "extremal_pairing"


@dataclass(frozen=True)
class ErrorNorm:
    m: int
    N: int
    value_sq: object
    method: Method

    @property
    def value(self):
        """The norm itself (square root of ``value_sq``)."""
        return self.value_sq.context.sqrt(self.value_sq)


def _ctx_for(bits):
    return context(bits + GUARD_BITS)


def norm_sq_closed(sol: SystemSolution, roots: RootSet) -> ErrorNorm:
    m, N = sol.m, sol.N
    ctx = _ctx_for(sol.precision_bits)
    h = ctx.one / N
    b2m = bernoulli(2 * m)
    lead = ctx.mpf(b2m.numerator) / b2m.denominator * powi(h, 2 * m) / factorial(2 * m)
    acc = ctx.zero
    for q, dk, pk in zip(roots, sol.d, sol.p):
        q, dk, pk = ctx.mpf(q), ctx.mpf(dk), ctx.mpf(pk)
        damp = 1 - powi(q, N)
        inv = 1 / (1 - q)
        scale = inv
        qi = ctx.one
        for i in range(2 * m + 1):
            w = fd_zero(i, 2 * m)
            if w:
                acc += damp * (dk * qi + (-pk * q if i % 2 else pk * q)) * scale * w
            scale *= inv
            qi *= q
    tail = powi(h, 2 * m + 1) / factorial(2 * m) * acc
    sign = 1 if (m + 1) % 2 == 0 else -1
    return ErrorNorm(m, N, sign * (lead + tail), Method.CLOSED)


def _check_moments(f: QuadratureFormula):
    ctx = context(f.precision_bits)
    for alpha in range(f.m):
        dev = abs(ctx.mpf(f.moment(alpha)) - ctx.one / (alpha + 1))
        if dev > MOMENT_TOL:
            raise ValueError(
                f"formula does not integrate x^{alpha} exactly (deviation {float(dev):.3g}); "
                "the quadratic form is only the norm on the annihilator of polynomials of degree < m"
            )


def norm_sq_direct(f: QuadratureFormula) -> ErrorNorm:
    """Quadratic form in (C, A, B) with closed-form kernel integrals.

    Raises ``ValueError`` if the rule is not exact on x^0..x^(m-1) to 1e-10.
    """
    _check_moments(f)
    m, N = f.m, f.N
    ctx = _ctx_for(f.precision_bits)
    C = [ctx.mpf(c) for c in f.C]
    A, B = ctx.mpf(f.A), ctx.mpf(f.B)
    xs = [ctx.mpf(b) / N for b in range(N + 1)]
    f1, f2, f3 = factorial(2 * m - 1), factorial(2 * m - 2), factorial(2 * m - 3)
    f0 = factorial(2 * m)

    ab = A * B / f3
    # int_0^1 x^(2m-2) / (2 (2m-2)!) and the (x-1) twin both equal 1/(2 (2m-1)!)
    ends = -2 * (A / (2 * f1) - B / (2 * f1))
    cross = 2 * ctx.fsum(
        c * (A * powi(x, 2 * m - 2) - B * powi(x - 1, 2 * m - 2)) / (2 * f2) for c, x in zip(C, xs)
    )
    single = 2 * ctx.fsum(c * (powi(x, 2 * m) + powi(1 - x, 2 * m)) / (2 * f0) for c, x in zip(C, xs))
    double = ctx.fsum(
        C[b] * C[g] * powi(abs(xs[b] - xs[g]), 2 * m - 1) for b in range(N + 1) for g in range(N + 1)
    ) / (2 * f1)
    square = ctx.one / factorial(2 * m + 1)
    bracket = ab + ends + cross + single - double - square
    sign = 1 if (m + 1) % 2 == 0 else -1
    return ErrorNorm(m, N, sign * bracket, Method.DIRECT)


# ---------------------------------------------------------------- extremal function

@dataclass(frozen=True)
class ExtremalSpline:
    """Piecewise polynomial on the nodes 0, h, ..., 1.

    ``pieces[b]`` holds ascending coefficients in the local variable
    t = x - breakpoints[b].
    """

    breakpoints: tuple
    pieces: tuple
    precision_bits: int

    @property
    def degree(self) -> int:
        return max(len(p) for p in self.pieces) - 1

    def _ctx(self):
        return context(self.precision_bits)

    def _locate(self, x, side):
        n = len(self.pieces)
        for b in range(n):
            lo, hi = self.breakpoints[b], self.breakpoints[b + 1]
            if lo < x < hi:
                return b
            if x == lo:
                return b if side == "right" or b == 0 else b - 1
            if x == hi and b == n - 1:
                return b
        raise ValueError("x outside [0, 1]")

    def derivative(self, x, order: int = 0, side: str = "right"):
        ctx = self._ctx()
        x = ctx.mpf(x)
        b = self._locate(x, side)
        t = x - self.breakpoints[b]
        coeffs = self.pieces[b]
        acc = ctx.zero
        for k in range(len(coeffs) - 1, order - 1, -1):
            fall = factorial(k) // factorial(k - order)
            acc = acc * t + coeffs[k] * fall
        return acc

    def __call__(self, x, side: str = "right"):
        return self.derivative(x, 0, side)

    def integral(self):
        ctx = self._ctx()
        total = ctx.zero
        for b, coeffs in enumerate(self.pieces):
            w = self.breakpoints[b + 1] - self.breakpoints[b]
            total += ctx.fsum(c * powi(w, k + 1) / (k + 1) for k, c in enumerate(coeffs))
        return total

    def jump(self, b: int, order: int):
        """Difference of the order-th derivative across interior breakpoint b."""
        x = self.breakpoints[b]
        return self.derivative(x, order, "right") - self.derivative(x, order, "left")


def _shifted(ctx, n, shift, scale):
    """Ascending coefficients of scale * (t + shift)^n."""
    return [scale * comb(n, k) * powi(shift, n - k) for k in range(n + 1)]


def build_extremal(f: QuadratureFormula) -> ExtremalSpline:
    """psi = (-1)^m [int_0^1 G(x-y) dy - sum C G(x - x_g) + A G'(x) + B G'(x-1)].

    The free polynomial of degree m-1 is taken as zero; the functional
    annihilates it, so the pairing does not depend on it.  On [0, 1] the
    first term is (x^(2m) + (1-x)^(2m)) / (2 (2m)!), so pieces have degree 2m.
    """
    _check_moments(f)
    m, N = f.m, f.N
    ctx = _ctx_for(f.precision_bits)
    C = [ctx.mpf(c) for c in f.C]
    A, B = ctx.mpf(f.A), ctx.mpf(f.B)
    xs = [ctx.mpf(b) / N for b in range(N + 1)]
    n1, n2 = 2 * m - 1, 2 * m - 2
    g1 = ctx.one / (2 * factorial(n1))
    g2 = ctx.one / (2 * factorial(n2))
    g0 = ctx.one / (2 * factorial(2 * m))
    sign = 1 if m % 2 == 0 else -1
    pieces = []
    for b in range(N):
        x0 = xs[b]
        poly = [ctx.zero] * (2 * m + 1)

        def add(coeffs):
            for k, c in enumerate(coeffs):
                poly[k] += c

        add(_shifted(ctx, 2 * m, x0, g0))
        # (1 - x)^(2m) = (x - 1)^(2m)
        add(_shifted(ctx, 2 * m, x0 - 1, g0))
        for g in range(N + 1):
            s = 1 if g <= b else -1
            add(_shifted(ctx, n1, x0 - xs[g], -C[g] * s * g1))
        add(_shifted(ctx, n2, x0, A * g2))
        add(_shifted(ctx, n2, x0 - 1, -B * g2))
        pieces.append(tuple(sign * c for c in poly))
    return ExtremalSpline(tuple(xs), tuple(pieces), f.precision_bits + GUARD_BITS)


def pair_with_functional(f: QuadratureFormula, psi: ExtremalSpline) -> ErrorNorm:
    """(l, psi) = int psi - sum C psi(x_b) - A psi'(0) - B psi'(1)."""
    ctx = context(psi.precision_bits)
    xs = psi.breakpoints
    nodes = ctx.fsum(ctx.mpf(c) * psi(x) for c, x in zip(f.C, xs))
    val = psi.integral() - nodes - ctx.mpf(f.A) * psi.derivative(0, 1) - ctx.mpf(f.B) * psi.derivative(1, 1, "left")
    return ErrorNorm(f.m, f.N, val, Method.EXTREMAL)
