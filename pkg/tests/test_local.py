import numpy as np
import pytest

from nlvc.domain import build_domain
from nlvc.local import LocalProblem, solve_local_analytic, solve_local_numeric
from nlvc.poly import Polynomial

EPS = 0.125
DOM = build_domain(0, 1, EPS)
R = 1 + EPS


def _cases():
    yield Polynomial([0, 0, 0, -20]), 2 + 5 * EPS**4, R * (2 + R**4), Polynomial([0, 2, 0, 0, 0, 1])
    yield Polynomial([0]), 1.0, R, Polynomial([0, 1])
    yield Polynomial([0, -6]), 3 * EPS**2, R**3, Polynomial.monomial(3)


@pytest.mark.parametrize("s,g,v,exact", list(_cases()))
def test_analytic_recovers_manufactured(s, g, v, exact):
    u = solve_local_analytic(LocalProblem(DOM, s, g, v))
    np.testing.assert_allclose(u.coefficients, exact.coefficients, atol=1e-12)


def test_analytic_rejects_callable_source():
    with pytest.raises(TypeError):
        solve_local_analytic(LocalProblem(DOM, lambda x: 0 * x, 1.0, 0.0))


def _max_error(s, g, v, exact, n):
    sol = solve_local_numeric(LocalProblem(DOM, s, g, v), n)
    return float(np.max(np.abs(sol.values - exact(sol.grid))))


def test_numeric_cubic_second_order():
    s, g, v, exact = list(_cases())[2]
    ratio = _max_error(s, g, v, exact, 64) / _max_error(s, g, v, exact, 128)
    assert 3.5 < ratio < 4.5


def test_numeric_quintic_second_order_with_sampled_source():
    s, g, v, exact = list(_cases())[0]
    sampled = lambda x: -20 * np.asarray(x) ** 3
    errs = [_max_error(sampled, g, v, exact, n) for n in (64, 128, 256)]
    assert all(3.5 < a / b < 4.5 for a, b in zip(errs, errs[1:]))


def test_numeric_linear_exact():
    s, g, v, exact = list(_cases())[1]
    assert _max_error(s, g, v, exact, 16) < 1e-12


def test_numeric_interpolant_between_grid_points():
    s, g, v, exact = list(_cases())[0]
    sol = solve_local_numeric(LocalProblem(DOM, s, g, v), 4096)
    x = np.linspace(DOM.left, DOM.right, 1001)
    assert np.max(np.abs(sol(x) - exact(x))) < 1e-5


def test_numeric_rejects_tiny_grid():
    with pytest.raises(ValueError):
        solve_local_numeric(LocalProblem(DOM, Polynomial([0]), 1.0, 0.0), 2)


def test_numeric_nonfinite_source():
    with pytest.raises(ValueError, match="not finite"):
        solve_local_numeric(LocalProblem(DOM, lambda x: np.full_like(x, np.nan), 1.0, 0.0), 8)
