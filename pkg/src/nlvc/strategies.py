"""Conversion of local flux data into nonlocal volume constraints.

Both pipelines first solve the surrogate Poisson problem on the closure.  The
Neumann strategy turns the local solution into a force density on the
Neumann layer and solves a mixed Neumann/Dirichlet nonlocal problem; the
Dirichlet strategy prescribes the local solution itself on the layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import fem
from .domain import Domain1D, Mesh1D
from .kernel import Kernel
from .local import LocalProblem, LocalSolution, solve_local_analytic, solve_local_numeric
from .operators import neumann_operator
from .poly import Polynomial, neumann_data_function
from .quadrature import QuadratureSpec, gauss_legendre

NEUMANN = "neumann"
DIRICHLET = "dirichlet"
STRATEGIES = (NEUMANN, DIRICHLET)


@dataclass(frozen=True)
class ConversionProblem:
    domain: Domain1D
    kernel: Kernel
    mesh: Mesh1D
    source: Union[Polynomial, Callable]
    flux: float
    dirichlet_data: Union[Polynomial, Callable]
    trace: Optional[float] = None
    quad: QuadratureSpec = QuadratureSpec()
    # None -> exact polynomial surrogate; an int -> finite differences on that many cells
    local_cells: Optional[int] = None

    @property
    def trace_value(self) -> float:
        if self.trace is not None:
            return float(self.trace)
        return float(self.dirichlet_data(self.domain.right))


@dataclass
class StrategyResult:
    strategy: str
    solution: fem.NodalField
    local_solution: Union[Polynomial, LocalSolution]
    gtilde_points: Optional[np.ndarray] = None
    gtilde_values: Optional[np.ndarray] = None
    pivots: Optional[np.ndarray] = None


def local_solution(p: ConversionProblem):
    prob = LocalProblem(p.domain, p.source, p.flux, p.trace_value)
    if p.local_cells is None and isinstance(p.source, Polynomial):
        return solve_local_analytic(prob)
    return solve_local_numeric(prob, p.local_cells or 4096)


def layer_force(p: ConversionProblem, ul):
    """Vectorized ``x -> N u_l(x)`` on the Neumann layer."""
    if isinstance(ul, Polynomial):
        return neumann_data_function(ul, p.kernel, p.domain)

    def gtilde(x):
        xa = np.asarray(x, dtype=float)
        flat = [neumann_operator(ul, p.kernel, p.domain, float(xi), p.quad) for xi in xa.ravel()]
        return np.array(flat).reshape(xa.shape)

    return gtilde


def constrained_nodes(mesh: Mesh1D, strategy: str) -> tuple[np.ndarray, np.ndarray]:
    """Indices prescribed on the Dirichlet layer and (Dirichlet strategy) the Neumann layer.

    Layers are taken closed, ``[b, b + eps]`` and ``[a - eps, a]``: the hats at
    ``a`` and ``b`` reach into a layer where the interior equation does not
    hold, so leaving them free breaks exactness for linear solutions.
    """
    dom, tol = mesh.domain, mesh.tol
    x = mesh.nodes
    right = np.flatnonzero(x >= dom.b - tol)
    if strategy == NEUMANN:
        left = np.array([], dtype=int)
    elif strategy == DIRICHLET:
        left = np.flatnonzero(x <= dom.a + tol)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return left, right


def _quad_points_on_layer(mesh: Mesh1D, q: QuadratureSpec) -> np.ndarray:
    xi, _ = gauss_legendre(q.points)
    k = mesh.horizon_cells
    return (mesh.nodes[:k, None] + mesh.h * (xi + 1.0)[None, :] / 2.0).ravel()


def _solve(p: ConversionProblem, strategy: str, ul, gtilde) -> tuple[fem.NodalField, np.ndarray]:
    stiffness = fem.assemble_stiffness(p.mesh, p.kernel, p.quad)
    rhs = fem.assemble_load(p.mesh, p.source, gtilde, p.quad)
    left, right = constrained_nodes(p.mesh, strategy)
    x = p.mesh.nodes
    values = {int(i): float(v) for i, v in zip(right, np.atleast_1d(p.dirichlet_data(x[right])))}
    values.update({int(i): float(v) for i, v in zip(left, np.atleast_1d(ul(x[left])))})
    system = fem.apply_dirichlet(stiffness, rhs, p.mesh, values)
    field = fem.solve(system)
    return field, system.pivots


def neumann_strategy(p: ConversionProblem) -> StrategyResult:
    ul = local_solution(p)
    gtilde = layer_force(p, ul)
    field, pivots = _solve(p, NEUMANN, ul, gtilde)
    pts = _quad_points_on_layer(p.mesh, p.quad)
    return StrategyResult(NEUMANN, field, ul, pts, np.asarray(gtilde(pts)), pivots)


def dirichlet_strategy(p: ConversionProblem) -> StrategyResult:
    ul = local_solution(p)
    field, pivots = _solve(p, DIRICHLET, ul, None)
    return StrategyResult(DIRICHLET, field, ul, pivots=pivots)


def run_strategy(p: ConversionProblem, strategy: str) -> StrategyResult:
    if strategy == NEUMANN:
        return neumann_strategy(p)
    if strategy == DIRICHLET:
        return dirichlet_strategy(p)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
