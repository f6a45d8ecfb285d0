import pytest

from optquad import build
from optquad.integrator import CORPUS, apply, convergence_sweep, error_and_bound, get_function
from optquad.precision import context

NS = [4, 8, 16, 32, 64]


@pytest.mark.parametrize("name", sorted(CORPUS))
@pytest.mark.parametrize("m", [2, 3, 5])
def test_bound_holds_for_corpus(parts, name, m):
    g = get_function(name, m)
    for N in (4, 16):
        err, bound, ratio = error_and_bound(parts(m, N)[0], g)
        assert 0 <= ratio <= 1 + 1e-10, (N, err, bound)


def test_seminorms_against_quadrature():
    ctx = context(128)
    for name in ("x3", "expx", "sin2pix", "inv1px"):
        for m in (2, 3):
            g = get_function(name, m)
            d = lambda x: ctx.diff(g.value, x, m)  # noqa: E731
            ref = ctx.sqrt(ctx.quad(lambda x: d(x) ** 2, [0, 1]))
            assert abs(g.seminorm(ctx, m) - ref) < 1e-20 * (1 + ref), (name, m)


def test_integrals_against_quadrature():
    ctx = context(128)
    for name in sorted(CORPUS):
        g = get_function(name, 4)
        assert abs(g.integral(ctx) - ctx.quad(g.value, [0, 1])) < 1e-30, name


def test_derivatives_against_numeric():
    ctx = context(128)
    for name in sorted(CORPUS):
        g = get_function(name, 4)
        for x in (ctx.zero, ctx.one):
            assert abs(g.deriv(x) - ctx.diff(g.value, x)) < 1e-25, name


@pytest.mark.parametrize("m", [2, 4, 6])
def test_apply_exact_on_low_monomials(parts, m):
    f = parts(m, 8)[0]
    for alpha in range(m):
        g = get_function("xm", alpha)
        assert abs(apply(f, g) - g.integral(f.h.context)) <= 1e-13


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_expx_order_at_least_m(m):
    rows = convergence_sweep(m, NS, get_function("expx", m))
    for r in rows[1:]:
        assert r.observed_order is not None and r.observed_order >= m, r
        assert r.bound_order == m
    assert all(r.ratio <= 1 for r in rows)


def test_sine_is_annihilated_by_symmetry():
    rows = convergence_sweep(4, NS, get_function("sin2pix", 4))
    assert all(r.at_floor and r.observed_order is None for r in rows)


def test_polynomial_below_order_has_zero_bound(parts):
    err, bound, ratio = error_and_bound(parts(4, 8)[0], get_function("x3", 4))
    assert bound == 0 and ratio == 0


def test_sweep_validation():
    with pytest.raises(ValueError):
        convergence_sweep(3, [8, 4], get_function("expx", 3))
    with pytest.raises(KeyError):
        get_function("cosh", 3)


def test_explicit_precision_is_used():
    rows = convergence_sweep(2, [4, 8], get_function("expx", 2), precision_bits=96)
    assert rows[1].observed_order == pytest.approx(4, abs=0.05)
    assert build(2, 4, 96).precision_bits == 96
