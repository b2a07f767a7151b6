"""Surrogate local Poisson problem on the closure.

Solves ``-u'' = s`` on ``(a - eps, b + eps)`` with the flux ``u'(a - eps) = g``
(outward normal -1 at the left end) and the trace ``u(b + eps) = v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .domain import Domain1D
from .errors import SingularSystem
from .poly import Polynomial

Source = Union[Polynomial, Callable]


@dataclass(frozen=True)
class LocalProblem:
    domain: Domain1D
    source: Source
    flux: float
    trace: float


@dataclass(frozen=True)
class LocalSolution:
    """Grid values of the numeric surrogate solution plus a C2 interpolant."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "_spline", CubicSpline(self.grid, self.values))

    def __call__(self, x):
        out = self._spline(np.asarray(x, dtype=float))
        return out if np.ndim(out) else float(out)


def solve_local_analytic(prob: LocalProblem) -> Polynomial:
    if not isinstance(prob.source, Polynomial):
        raise TypeError("analytic local solve needs a polynomial source")
    dom = prob.domain
    # particular solution of u'' = -s vanishing with its derivative at 0
    part = (-prob.source).antiderivative().antiderivative()
    dpart = part.derivative()
    slope = prob.flux - dpart(dom.left)
    offset = prob.trace - part(dom.right) - slope * dom.right
    return Polynomial(part.coefficients) + Polynomial([offset, slope])


def solve_local_numeric(prob: LocalProblem, n_cells: int) -> LocalSolution:
    """Second-order finite differences on a uniform auxiliary grid.

    The flux condition uses a ghost node eliminated against the equation at
    the left end, which keeps the system tridiagonal and second-order.
    """
    if n_cells < 4:
        raise ValueError("need at least 4 cells")
    dom = prob.domain
    grid = np.linspace(dom.left, dom.right, n_cells + 1)
    H = dom.length / n_cells
    s = np.asarray(prob.source(grid), dtype=float) * np.ones_like(grid)
    if not np.all(np.isfinite(s)):
        raise ValueError("source is not finite on the auxiliary grid")

    n = n_cells  # unknowns at nodes 0..n-1; node n is the Dirichlet trace
    ab = np.zeros((3, n))
    ab[1, :] = 2.0
    ab[0, 1:] = -1.0
    ab[2, :-1] = -1.0
    ab[0, 1] = -2.0
    rhs = H * H * s[:n]
    rhs[0] -= 2.0 * H * prob.flux
    rhs[-1] += prob.trace
    try:
        u = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(u)):
        raise SingularSystem("non-finite local solution")
    return LocalSolution(grid, np.append(u, prob.trace))
