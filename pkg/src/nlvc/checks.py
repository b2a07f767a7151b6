"""Property suite run by ``nlvc check``.

Each check returns a :class:`CheckResult` holding the measured quantity and
the threshold it is compared with, so the same code backs the CLI report and
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fem, kernel as kern, operators
from .domain import build_domain, build_mesh
from .poly import Polynomial, apply_L_truncated
from .quadrature import QuadratureSpec
from .strategies import DIRICHLET, NEUMANN, constrained_nodes

DEFAULT_EPSILONS = tuple(2.0**-k for k in range(2, 6))


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<34} value={self.value:.3e}  limit={self.threshold:.1e}"


def random_polynomials(count: int, max_degree: int = 5, seed: int = 0) -> list[Polynomial]:
    rng = np.random.default_rng(seed)
    return [Polynomial(rng.uniform(-1.0, 1.0, size=rng.integers(1, max_degree + 2))) for _ in range(count)]


def gauss_theorem(epsilons=DEFAULT_EPSILONS, count: int = 3, seed: int = 0) -> CheckResult:
    """Worst relative mismatch between ``int_Omega L u`` and ``int_{Omega_I} N u``."""
    worst = 0.0
    q = QuadratureSpec()
    for eps in epsilons:
        dom = build_domain(0.0, 1.0, eps)
        k = kern.Kernel(eps)
        for p in random_polynomials(count, seed=seed):
            lhs, rhs = operators.gauss_check(p, k, dom, q)
            scale = max(abs(lhs), abs(rhs), 1.0)
            worst = max(worst, abs(lhs - rhs) / scale)
    return CheckResult("gauss theorem (relative)", worst, 1e-7)


def _stiffness_cases(epsilons, h: float):
    for eps in epsilons:
        dom = build_domain(0.0, 1.0, eps)
        mesh = build_mesh(dom, h)
        k = kern.Kernel(eps)
        yield mesh, k, fem.assemble_stiffness(mesh, k)


def stiffness_symmetry(epsilons=DEFAULT_EPSILONS, h: float = 2.0**-7) -> CheckResult:
    worst = 0.0
    for _, _, A in _stiffness_cases(epsilons, h):
        worst = max(worst, A.symmetry_error() / A.max_abs())
    return CheckResult("stiffness symmetry (relative)", worst, 1e-12)


def row_sums(epsilons=DEFAULT_EPSILONS, h: float = 2.0**-7) -> CheckResult:
    worst = 0.0
    for _, _, A in _stiffness_cases(epsilons, h):
        worst = max(worst, float(np.max(np.abs(A.row_sums()))) / A.max_abs())
    return CheckResult("row sums (relative)", worst, 1e-12)


def positive_pivots(epsilons=DEFAULT_EPSILONS, h: float = 2.0**-7) -> CheckResult:
    """Smallest Cholesky pivot over both constraint patterns, negated so that ``<= 0`` passes."""
    smallest = np.inf
    for mesh, _, A in _stiffness_cases(epsilons, h):
        for strategy in (NEUMANN, DIRICHLET):
            left, right = constrained_nodes(mesh, strategy)
            fixed = {int(i): 0.0 for i in np.concatenate((left, right))}
            system = fem.apply_dirichlet(A, np.zeros(mesh.n_nodes), mesh, fixed)
            try:
                fem.solve(system)
            except ArithmeticError:
                return CheckResult("cholesky pivots (-min)", np.inf, 0.0)
            smallest = min(smallest, float(np.min(system.pivots)))
    return CheckResult("cholesky pivots (-min)", -smallest, 0.0)


def taylor_remainder(epsilons=DEFAULT_EPSILONS, samples: int = 9) -> CheckResult:
    """For ``u = x**5`` the remainder ``L u - u''`` equals ``eps**2 u''''(x) / 20``; error scaled by ``eps**2``."""
    u = Polynomial.monomial(5)
    u4 = u.derivative(4)
    worst = 0.0
    for eps in epsilons:
        dom = build_domain(0.0, 1.0, eps)
        k = kern.Kernel(eps)
        for x in np.linspace(dom.a, dom.b, samples):
            r = operators.taylor_remainder(u, k, dom, float(x))
            worst = max(worst, abs(r - eps**2 * u4(x) / 20.0) / eps**2)
    return CheckResult("taylor remainder / eps^2", worst, 1e-8)


def moments(epsilons=DEFAULT_EPSILONS) -> CheckResult:
    worst = 0.0
    for eps in epsilons:
        k = kern.Kernel(eps)
        worst = max(worst, abs(kern.moment(k, 2) - 2.0) / 2.0)
        for order in (0, 2, 4):
            exact = kern.moment(k, order)
            worst = max(worst, abs(kern.numeric_moment(k, order) - exact) / exact)
        worst = max(worst, abs(kern.moment(k, 4) - 6.0 * eps**2 / 5.0) / (6.0 * eps**2 / 5.0))
    return CheckResult("kernel moments (relative)", worst, 1e-10)


def cubic_consistency(epsilons=DEFAULT_EPSILONS, count: int = 4, seed: int = 1, samples: int = 9) -> CheckResult:
    """``L p = p''`` at full-ball points for random polynomials of degree at most three."""
    worst = 0.0
    for eps in epsilons:
        dom = build_domain(0.0, 1.0, eps)
        k = kern.Kernel(eps)
        x = np.linspace(dom.a, dom.b, samples)
        for p in random_polynomials(count, max_degree=3, seed=seed):
            worst = max(worst, float(np.max(np.abs(apply_L_truncated(p, k, dom, x) - p.derivative(2)(x)))))
    return CheckResult("degree<=3 consistency", worst, 1e-9)


SUITE = (gauss_theorem, stiffness_symmetry, row_sums, positive_pivots, taylor_remainder, moments, cubic_consistency)


def run_all() -> list[CheckResult]:
    return [check() for check in SUITE]
