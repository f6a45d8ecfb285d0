import pytest

from optquad import build, build_with_parts
from optquad.errors import ParameterError
from optquad.formula import interior_weight
from optquad.integrator import apply, get_function
from optquad.precision import ENV_VAR

GRID_N = [2, 4, 8, 16, 32, 64]


def feasible(m, N):
    return N + 3 >= m


def check_invariants(f, tol_moment=1e-12, tol_sym=1e-11):
    m, N = f.m, f.N
    assert len(f.C) == N + 1
    assert abs(sum(f.C) - 1) <= tol_moment
    for alpha in range(1, m):
        assert abs(f.moment(alpha) - f.h.context.one / (alpha + 1)) <= tol_moment, alpha
    for b in range(N + 1):
        assert abs(f.C[b] - f.C[N - b]) <= tol_sym * f.h
    assert abs(f.A + f.B) <= tol_sym * f.h**2


@pytest.mark.parametrize("m", range(2, 9))
@pytest.mark.parametrize("N", GRID_N)
def test_formula_invariants(parts, m, N):
    if not feasible(m, N):
        pytest.skip("infeasible: fewer weights than moment conditions")
    check_invariants(parts(m, N)[0])


@pytest.mark.parametrize("m", range(2, 9))
@pytest.mark.parametrize("N", [4, 16, 64])
def test_monomials_integrate_exactly(parts, m, N):
    if not feasible(m, N):
        pytest.skip("infeasible")
    f = parts(m, N)[0]
    for alpha in range(m):
        g = get_function("xm", alpha)  # x^alpha
        err = abs(apply(f, g) - g.integral(f.h.context))
        assert err <= 1e-13, alpha


@pytest.mark.parametrize("N", GRID_N)
def test_trapezoid_with_end_corrections(N):
    f = build(2, N)
    h = f.h
    assert abs(f.C[0] - h / 2) <= 1e-13 * h and abs(f.C[N] - h / 2) <= 1e-13 * h
    for c in f.C[1:-1]:
        assert abs(c - h) <= 1e-13 * h
    assert abs(f.A - h * h / 12) <= 1e-13 * h * h
    assert abs(f.B + h * h / 12) <= 1e-13 * h * h


def test_interior_weights_decay_geometrically(parts):
    f, roots, sol = parts(4, 64)
    rho = max(abs(q) for q in roots)
    h = f.h
    K = h * sum(abs(d) + abs(p) for d, p in zip(sol.d, sol.p))
    dev = [abs(c - h) for c in f.C]
    for b in range(1, 64):
        assert dev[b] <= K * rho ** min(b, 64 - b) * (1 + 1e-20)
    # dominated by the root of largest modulus away from both ends
    assert abs(dev[17] / dev[16] - rho) < 1e-4


def test_interior_weight_matches_stored(parts):
    f, roots, sol = parts(5, 12)
    for b in range(1, 12):
        assert interior_weight(sol, roots, b) == f.C[b]
    with pytest.raises(ValueError):
        interior_weight(sol, roots, 0)


@pytest.mark.parametrize(
    "m, N, flag",
    [(1, 4, "--m"), (21, 40, "--m"), (3, 1, "--N"), (8, 4, "--N"), (2, 0, "--N")],
)
def test_parameter_errors_name_the_flag(m, N, flag):
    with pytest.raises(ParameterError) as info:
        build(m, N)
    assert info.value.flag == flag


def test_precision_env_and_override(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "192")
    assert build(3, 4).precision_bits == 192
    assert build(3, 4, precision_bits=160).precision_bits == 160


def test_high_order_escalates_precision():
    f = build(16, 20)
    assert f.precision_bits > 128
    check_invariants(f)


def test_to_floats_roundtrip():
    d = build(2, 4).to_floats()
    assert d["C"] == [0.125, 0.25, 0.25, 0.25, 0.125]
    assert d["h"] == 0.25
