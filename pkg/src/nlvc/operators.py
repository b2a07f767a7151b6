"""Strong-form nonlocal operators evaluated by quadrature.

All operators use the factor-free convention

    L u(x)   = int_{W(x)} (u(y) - u(x)) gamma(x, y) dy
    N u(x)   = int_{W(x)} (u(x) - u(y)) gamma(x, y) dy     (x in a layer)

with ``W(x)`` the horizon ball clipped to the closure.  With the normalized
constant kernel this makes ``L u -> u''``.
"""

from __future__ import annotations

import numpy as np

from . import poly
from .domain import Domain1D, Region, classify
from .errors import NotInNeumannLayer, OutsideDomain, OutsideFullBall
from .kernel import Kernel
from .quadrature import QuadratureSpec, map_rule

# panels per window for callables that expose no breakpoints
SMOOTH_PANELS = 16


def breakpoints_of(u) -> np.ndarray | None:
    mesh = getattr(u, "mesh", None)
    return None if mesh is None else mesh.nodes


def _pieces(lo: float, hi: float, breaks: np.ndarray | None) -> np.ndarray:
    if breaks is None:
        return np.linspace(lo, hi, SMOOTH_PANELS + 1)
    inner = breaks[(breaks > lo) & (breaks < hi)]
    return np.concatenate(([lo], inner, [hi]))


def window_rule(u, kernel: Kernel, domain: Domain1D, x: float, q: QuadratureSpec):
    """Quadrature points and weights over the clipped horizon window of ``x``."""
    lo = max(domain.left, x - kernel.epsilon)
    hi = min(domain.right, x + kernel.epsilon)
    edges = _pieces(lo, hi, breakpoints_of(u))
    y, w = map_rule(edges[:-1], edges[1:], q.points)
    return y.ravel(), w.ravel()


def _check_inside(domain: Domain1D, x: float):
    if classify(domain, x, tol=1e-12 * domain.length) is Region.OUTSIDE:
        raise OutsideDomain(f"x={x} lies outside the closure {domain.closure}")


def apply_L(u, kernel: Kernel, domain: Domain1D, x: float, q: QuadratureSpec = QuadratureSpec()) -> float:
    x = float(x)
    _check_inside(domain, x)
    y, w = window_rule(u, kernel, domain, x, q)
    return float(np.sum(w * (u(y) - u(x)) * kernel(x, y)))


def neumann_operator(u, kernel: Kernel, domain: Domain1D, x: float, q: QuadratureSpec = QuadratureSpec()) -> float:
    x = float(x)
    if classify(domain, x) is not Region.NEUMANN_LAYER:
        raise NotInNeumannLayer(f"x={x} is not in the Neumann layer {domain.neumann_layer}")
    return -apply_L(u, kernel, domain, x, q)


def _region_integral(f, lo: float, hi: float, breaks, q: QuadratureSpec) -> float:
    edges = _pieces(lo, hi, breaks)
    xs, ws = map_rule(edges[:-1], edges[1:], q.points)
    return float(sum(w * f(float(x)) for x, w in zip(xs.ravel(), ws.ravel())))


def gauss_check(u, kernel: Kernel, domain: Domain1D, q: QuadratureSpec = QuadratureSpec()) -> tuple[float, float]:
    """Both sides of the nonlocal Gauss theorem for the flux of ``u``.

    Returns ``(int_Omega L u dx, int_{Omega_I} N u dx)``, the divergence of the
    nonlocal gradient over the interior against the interaction operator over
    both layers.  For a field with breakpoints the outer integrals are split
    wherever the integrand has a kink: at those breakpoints and their shifts by
    ``+-eps``.  Smooth callables use uniform panels instead.
    """
    breaks = breakpoints_of(u)
    if breaks is not None:
        eps = kernel.epsilon
        breaks = np.union1d(breaks, np.concatenate((breaks - eps, breaks + eps)))
    lhs = _region_integral(lambda x: apply_L(u, kernel, domain, x, q), domain.a, domain.b, breaks, q)
    n_op = lambda x: -apply_L(u, kernel, domain, x, q)
    rhs = _region_integral(n_op, domain.left, domain.a, breaks, q)
    rhs += _region_integral(n_op, domain.b, domain.right, breaks, q)
    return lhs, rhs


def taylor_remainder(u: poly.Polynomial, kernel: Kernel, domain: Domain1D, x: float) -> float:
    """``L u(x) - u''(x)`` for a point whose horizon ball lies inside the closure."""
    x = float(x)
    tol = 1e-12 * domain.length
    if not domain.a - tol <= x <= domain.b + tol:
        raise OutsideFullBall(f"x={x} has a truncated horizon ball")
    return poly.apply_L_truncated(u, kernel, domain, x) - u.derivative(2)(x)
