from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from optquad.combinatorics import fd_zero
from optquad.euler_frobenius import (
    count_real_roots,
    euler_polynomial,
    isolate_roots,
    reciprocal_check,
    unit_disk_roots,
)
from optquad.precision import context


def test_small_polynomials():
    assert euler_polynomial(2).coeffs == (1, 4, 1)
    assert euler_polynomial(4).coeffs == (1, 26, 66, 26, 1)


@pytest.mark.parametrize("k", range(0, 21))
def test_palindrome_and_value_at_one(k):
    p = euler_polynomial(k)
    assert reciprocal_check(p)
    assert p(1) == factorial(k + 1)
    if p.degree >= 1:
        assert p.coeffs[0] == p.coeffs[-1] == 1


@pytest.mark.parametrize("m", range(2, 11))
def test_root_counts(m):
    p = euler_polynomial(2 * m - 2)
    assert count_real_roots(p, -1, 0) == m - 1
    assert count_real_roots(p, None, -1) == m - 1
    assert count_real_roots(p, 0, None) == 0
    assert p(Fraction(-1)) != 0
    assert p(0) != 0
    assert count_real_roots(p) == 2 * m - 2


@pytest.mark.parametrize("m", range(2, 11))
def test_rootset_invariants(m):
    rs = unit_disk_roots(m)
    p = euler_polynomial(2 * m - 2)
    assert len(rs) == m - 1
    assert list(rs.roots) == sorted(rs.roots)
    assert len(set(rs.roots)) == m - 1
    ctx = context(rs.precision_bits)
    tol = ctx.ldexp(1, -(rs.precision_bits // 2))
    for q in rs:
        assert -1 < q < 0
        assert abs(p(q)) < tol * p.magnitude(q)


@pytest.mark.parametrize("m", range(2, 9))
def test_reciprocal_pairing(m):
    rs = unit_disk_roots(m)
    p = euler_polynomial(2 * m - 2)
    bound = 1 + max(abs(c) for c in p.coeffs)
    outer = isolate_roots(p, -bound, -1, rs.precision_bits)
    assert len(outer) == m - 1
    ctx = context(rs.precision_bits)
    outer_roots = [ctx.mpf((a + b).numerator) / (2 * (a + b).denominator) for a, b in outer]
    tol = ctx.ldexp(1, -(rs.precision_bits // 2))
    for q in rs:
        partner = min(outer_roots, key=lambda r: abs(r - 1 / q))
        assert abs(q * partner - 1) < tol


def test_known_roots():
    assert abs(float(unit_disk_roots(2).roots[0]) - (3**0.5 - 2)) < 1e-15
    # x + 1/x = y with y^2 + 26 y + 64 = 0
    ctx = context(128)
    expected = []
    for y in (-13 + ctx.sqrt(105), -13 - ctx.sqrt(105)):
        expected.append((y + ctx.sqrt(y * y - 4)) / 2)
    got = unit_disk_roots(3).roots
    assert abs(got[0] - min(expected)) < 1e-35 and abs(got[1] - max(expected)) < 1e-35


def _reflection_sides(d, p, q, alpha, N):
    lhs = sum(
        (d * q + p * q ** (N + i) * (-1) ** (i + 1)) / (q - 1) ** (i + 1) * fd_zero(i, alpha)
        for i in range(alpha + 1)
    )
    rhs = (-1) ** (alpha + 1) * sum(
        (d * q**i + p * q ** (N + 1) * (-1) ** (i + 1)) / (1 - q) ** (i + 1) * fd_zero(i, alpha)
        for i in range(alpha + 1)
    )
    return lhs, rhs


unit_open = st.fractions(min_value=-1, max_value=0, max_denominator=10**6).filter(lambda x: -1 < x < 0)


@settings(max_examples=200, deadline=None)
@given(d=unit_open, p=unit_open, q=unit_open, alpha=st.integers(1, 8), N=st.integers(1, 12))
def test_reflection_identity_exact(d, p, q, alpha, N):
    lhs, rhs = _reflection_sides(d, p, q, alpha, N)
    assert lhs == rhs


@settings(max_examples=50, deadline=None)
@given(q=unit_open, alpha=st.integers(1, 10))
def test_sum_against_euler_polynomial(q, alpha):
    # sum_i Delta^i 0^alpha / (q-1)^(i+1) = E_{alpha-1}(q) / (q-1)^(alpha+1)
    s = sum(Fraction(fd_zero(i, alpha)) / (q - 1) ** (i + 1) for i in range(alpha + 1))
    assert s == euler_polynomial(alpha - 1)(q) / (q - 1) ** (alpha + 1)
