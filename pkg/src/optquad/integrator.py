"""Apply a rule to concrete integrands and check it against the norm bound.

For any phi in L2^(m)(0,1) the quadrature error obeys
``|(l, phi)| <= ||l|| * ||phi^(m)||_L2``, so each registered test function
carries its exact integral and the closed form of ``||phi^(m)||_L2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial
from typing import Callable

from .error_norm import GUARD_BITS, norm_sq_direct
from .formula import QuadratureFormula, build
from .precision import context

__all__ = [
    "TestFunction",
    "CORPUS",
    "get_function",
    "apply",
    "error_and_bound",
    "convergence_sweep",
    "SweepRow",
]


@dataclass(frozen=True)
class TestFunction:
    """An integrand with analytically known data.

    ``value`` and ``deriv`` receive mpmath numbers and evaluate in the
    number's own context; ``integral`` and ``seminorm`` receive the context.
    """

    __test__ = False  # not a pytest class

    name: str
    value: Callable
    deriv: Callable
    integral: Callable
    seminorm: Callable | None = None
    degree: int | None = None  # set for polynomials


def _monomial(k: int, name: str | None = None) -> TestFunction:
    def seminorm(ctx, m):
        if m > k:
            return ctx.zero
        c = ctx.mpf(factorial(k) // factorial(k - m))
        return c / ctx.sqrt(2 * (k - m) + 1)

    return TestFunction(
        name or f"x{k}",
        lambda x: x**k,
        (lambda x: k * x ** (k - 1)) if k else (lambda x: x - x),
        lambda ctx: ctx.one / (k + 1),
        seminorm,
        degree=k,
    )


def _exp() -> TestFunction:
    return TestFunction(
        "expx",
        lambda x: x.context.exp(x),
        lambda x: x.context.exp(x),
        lambda ctx: ctx.e - 1,
        lambda ctx, m: ctx.sqrt((ctx.exp(2) - 1) / 2),
    )


def _sin2pi() -> TestFunction:
    return TestFunction(
        "sin2pix",
        lambda x: x.context.sinpi(2 * x),
        lambda x: 2 * x.context.pi * x.context.cospi(2 * x),
        lambda ctx: ctx.zero,
        lambda ctx, m: (2 * ctx.pi) ** m / ctx.sqrt(2),
    )


def _inv1px() -> TestFunction:
    def seminorm(ctx, m):
        # int_0^1 (m! (1+x)^(-m-1))^2 dx
        sq = ctx.mpf(factorial(m)) ** 2 * (1 - ctx.ldexp(1, -(2 * m + 1))) / (2 * m + 1)
        return ctx.sqrt(sq)

    return TestFunction(
        "inv1px",
        lambda x: 1 / (1 + x),
        lambda x: -1 / (1 + x) ** 2,
        lambda ctx: ctx.ln2,
        seminorm,
    )


CORPUS: dict[str, Callable[[int], TestFunction]] = {
    "one": lambda m: _monomial(0, "one"),
    "x": lambda m: _monomial(1, "x"),
    "x2": lambda m: _monomial(2),
    "x3": lambda m: _monomial(3),
    "xm": lambda m: _monomial(m, "xm"),
    "expx": lambda m: _exp(),
    "sin2pix": lambda m: _sin2pi(),
    "inv1px": lambda m: _inv1px(),
}


def get_function(name: str, m: int) -> TestFunction:
    try:
        return CORPUS[name](m)
    except KeyError:
        raise KeyError(f"unknown function {name!r}; choose from {', '.join(sorted(CORPUS))}") from None


def apply(f: QuadratureFormula, g: TestFunction):
    """sum C[b] g(x_b) + A g'(0) + B g'(1), at the rule's precision plus guard bits."""
    ctx = context(f.precision_bits + GUARD_BITS)
    nodes = [ctx.mpf(b) / f.N for b in range(f.N + 1)]
    s = ctx.fsum(ctx.mpf(c) * g.value(x) for c, x in zip(f.C, nodes))
    return s + ctx.mpf(f.A) * g.deriv(ctx.zero) + ctx.mpf(f.B) * g.deriv(ctx.one)


def _floor(f: QuadratureFormula, g: TestFunction):
    """Smallest error distinguishable from rounding in the rule's weights."""
    ctx = context(f.precision_bits + GUARD_BITS)
    nodes = [ctx.mpf(b) / f.N for b in range(f.N + 1)]
    scale = ctx.fsum(abs(ctx.mpf(c) * g.value(x)) for c, x in zip(f.C, nodes)) + 1
    return scale * ctx.ldexp(1, -(f.precision_bits - 16))


def error_and_bound(f: QuadratureFormula, g: TestFunction, norm_sq=None):
    """Return ``(error, bound, ratio)``.

    ``bound`` is ||l|| * ||g^(m)||; the norm is evaluated from the rule's
    own weights unless ``norm_sq`` is supplied.  ratio is 0 when the bound
    is 0 (g a polynomial of degree < m).
    """
    if g.seminorm is None:
        raise ValueError(f"{g.name} has no registered seminorm")
    ctx = context(f.precision_bits + GUARD_BITS)
    error = abs(g.integral(ctx) - apply(f, g))
    if norm_sq is None:
        norm_sq = norm_sq_direct(f).value_sq
    norm_sq = ctx.mpf(norm_sq)
    bound = ctx.sqrt(max(norm_sq, ctx.zero)) * g.seminorm(ctx, f.m)
    if bound == 0:
        ratio = ctx.zero if error <= _floor(f, g) else ctx.inf
    else:
        ratio = error / bound
    return error, bound, ratio


@dataclass(frozen=True)
class SweepRow:
    N: int
    error: object
    bound: object
    ratio: object
    at_floor: bool
    observed_order: float | None  # against the previous row; None when undefined
    bound_order: int


def convergence_sweep(m: int, Ns, g: TestFunction, precision_bits: int | None = None) -> list[SweepRow]:
    """Error table over ascending N with the observed order between consecutive rows.

    order = log(e_prev / e) / log(N / N_prev); rows whose error is at the
    rounding floor get ``observed_order = None``, as does the first row.
    """
    Ns = list(Ns)
    if any(n < 2 for n in Ns) or Ns != sorted(Ns) or len(set(Ns)) != len(Ns):
        raise ValueError("Ns must be strictly ascending and each >= 2")
    rows: list[SweepRow] = []
    prev = None
    for N in Ns:
        f = build(m, N, precision_bits)
        err, bound, ratio = error_and_bound(f, g)
        floor = err <= _floor(f, g)
        order = None
        if prev is not None and not floor and not prev.at_floor:
            order = math.log(float(prev.error / err)) / math.log(N / prev.N)
        row = SweepRow(N, err, bound, ratio, floor, order, m)
        rows.append(row)
        prev = row
    return rows
