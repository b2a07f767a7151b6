import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from nlvc import operators as ops
from nlvc.domain import build_domain, build_mesh
from nlvc.errors import NotInNeumannLayer, OutsideDomain, OutsideFullBall
from nlvc.fem import NodalField
from nlvc.kernel import Kernel
from nlvc.poly import Polynomial

x4 = Polynomial.monomial(4)


def test_L_quartic_value():
    eps = 2.0**-3
    assert ops.apply_L(x4, Kernel(eps), build_domain(0, 1, eps), 0.5) == pytest.approx(3.01875, rel=1e-12)


def test_L_constant_is_zero():
    dom = build_domain(0, 1, 0.25)
    for x in (-0.25, 0.1, 1.2):
        assert ops.apply_L(lambda y: 7.0 + 0 * np.asarray(y), Kernel(0.25), dom, x) == 0.0


def test_L_of_interpolant():
    eps, h = 2.0**-3, 2.0**-6
    dom = build_domain(0, 1, eps)
    mesh = build_mesh(dom, h)
    u = NodalField(mesh, mesh.nodes**2)
    value = ops.apply_L(u, Kernel(eps), dom, 0.5)
    oracle = quad(lambda y: (u(y) - u(0.5)) * 3 / eps**3, 0.5 - eps, 0.5 + eps,
                  points=list(mesh.nodes[np.abs(mesh.nodes - 0.5) < eps]), limit=200)[0]
    assert value == pytest.approx(oracle, rel=1e-12)
    # the interpolation error averages h**2/6 over the window and vanishes at the node
    assert value == pytest.approx(2.0 + h**2 / eps**2, rel=1e-12)


def test_L_callable_matches_quad():
    eps = 0.25
    dom = build_domain(0, 1, eps)
    f = np.sin
    for x in (-0.2, 0.0, 0.6, 1.2):
        lo, hi = max(dom.left, x - eps), min(dom.right, x + eps)
        oracle = quad(lambda y: (f(y) - f(x)) * 3 / eps**3, lo, hi, epsabs=1e-12, epsrel=1e-12)[0]
        assert ops.apply_L(f, Kernel(eps), dom, x) == pytest.approx(oracle, rel=1e-9, abs=1e-12)


def test_L_outside():
    with pytest.raises(OutsideDomain):
        ops.apply_L(x4, Kernel(0.25), build_domain(0, 1, 0.25), 1.3)


def test_neumann_operator_quartic_record():
    eps = 0.25
    dom = build_domain(0, 1, eps)
    x = -eps / 2
    integrand = Polynomial([x**4]) - x4
    oracle = 3 / eps**3 * integrand.integrate(-eps, x + eps)
    value = ops.neumann_operator(x4, Kernel(eps), dom, x)
    assert value == pytest.approx(oracle, rel=1e-12)
    assert value == pytest.approx(-0.02109375, rel=1e-12)


def test_neumann_operator_linear_matches_quad():
    eps = 0.25
    dom = build_domain(0, 1, eps)
    for x in (-0.24, -0.1, -0.01):
        oracle = quad(lambda y: (x - y) * 3 / eps**3, dom.left, x + eps)[0]
        assert ops.neumann_operator(lambda y: y, Kernel(eps), dom, x) == pytest.approx(oracle, rel=1e-12)


def test_neumann_operator_constant():
    dom = build_domain(0, 1, 0.25)
    assert ops.neumann_operator(lambda y: 3.0 + 0 * np.asarray(y), Kernel(0.25), dom, -0.1) == 0.0


def test_neumann_operator_outside_layer():
    with pytest.raises(NotInNeumannLayer):
        ops.neumann_operator(x4, Kernel(0.25), build_domain(0, 1, 0.25), 0.1)


def test_gauss_quadratic():
    eps = 2.0**-3
    lhs, rhs = ops.gauss_check(Polynomial.monomial(2), Kernel(eps), build_domain(0, 1, eps))
    assert lhs == pytest.approx(rhs, rel=1e-7)


def test_gauss_constant():
    lhs, rhs = ops.gauss_check(Polynomial([2.0]), Kernel(0.25), build_domain(0, 1, 0.25))
    assert abs(lhs) < 1e-14 and abs(rhs) < 1e-14


def test_gauss_random_quintic_fixed_seed():
    p = Polynomial(np.random.default_rng(7).uniform(-1, 1, 6))
    lhs, rhs = ops.gauss_check(p, Kernel(0.25), build_domain(0, 1, 0.25))
    assert lhs == pytest.approx(rhs, rel=1e-7)


def test_gauss_piecewise_linear_field():
    eps, h = 0.25, 2.0**-4
    dom = build_domain(0, 1, eps)
    mesh = build_mesh(dom, h)
    u = NodalField(mesh, np.cos(3 * mesh.nodes))
    lhs, rhs = ops.gauss_check(u, Kernel(eps), dom)
    assert lhs == pytest.approx(rhs, rel=1e-7)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6), st.sampled_from([0.25, 0.125]))
def test_gauss_property(coeffs, eps):
    lhs, rhs = ops.gauss_check(Polynomial(coeffs), Kernel(eps), build_domain(0, 1, eps))
    assert abs(lhs - rhs) <= 1e-7 * max(abs(lhs), abs(rhs), 1.0)


@pytest.mark.parametrize("eps", [2.0**-k for k in range(2, 6)])
def test_taylor_remainders(eps):
    dom, k = build_domain(0, 1, eps), Kernel(eps)
    assert ops.taylor_remainder(x4, k, dom, 0.3) == pytest.approx(1.2 * eps**2, rel=1e-8)
    assert abs(ops.taylor_remainder(Polynomial.monomial(3), k, dom, 0.7)) < 1e-10
    assert abs(ops.taylor_remainder(Polynomial.monomial(5), k, dom, 0.5) - 3 * eps**2) < 1e-8 * eps**2


def test_taylor_requires_full_ball():
    with pytest.raises(OutsideFullBall):
        ops.taylor_remainder(x4, Kernel(0.25), build_domain(0, 1, 0.25), -0.1)
