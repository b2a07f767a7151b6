"""Pre-registered experiments: consistency, local-limit convergence, and the
Neumann/Dirichlet comparison near the Neumann boundary.

Every experiment returns a :class:`ResultSet` that serializes to CSV (one row
per case/strategy/horizon) and to JSON (full precision plus metadata and any
sampled curves).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import metrics
from .domain import build_domain, build_mesh
from .kernel import Kernel
from .metrics import ConvergenceRecord
from .poly import Polynomial
from .quadrature import QuadratureSpec
from .strategies import DIRICHLET, NEUMANN, ConversionProblem, run_strategy

CSV_COLUMNS = ("case", "strategy", "h", "eps", "eE", "rateE", "e0", "rate0")
CONVENTION = "factor-free L and N; a(u,z) = 1/2 int int; closed-layer constraints"

A_DEFAULT, B_DEFAULT = 0.0, 1.0

# (s, g_l, v_n) as functions of the horizon
CaseData = Callable[[float], tuple[Polynomial, float, Polynomial]]


@dataclass(frozen=True)
class GridRule:
    mode: str
    h: Optional[float] = None

    def h_for(self, eps: float) -> float:
        if self.mode == "fixed_h":
            return float(self.h)
        if self.mode == "quadratic":
            return eps * eps
        if self.mode == "linear":
            return eps / 4.0
        raise ValueError(f"unknown grid mode {self.mode!r}")


@dataclass(frozen=True)
class ExperimentCase:
    name: str
    data: CaseData
    strategies: tuple[str, ...]
    grid: GridRule
    epsilons: tuple[float, ...]


def _consistency_a(eps):
    return Polynomial([0.0]), 1.0, Polynomial([0.0, 1.0])


def _consistency_b(eps):
    return Polynomial([0.0, -6.0]), 3.0 * eps**2, Polynomial([0.0, 0.0, 0.0, 1.0])


def _benchmark(eps):
    return Polynomial([0.0, 0.0, 0.0, -20.0]), 2.0 + 5.0 * eps**4, Polynomial([0.0, 2.0, 0.0, 0.0, 0.0, 1.0])


def _comparison_a(eps):
    s = Polynomial([-1.2 * eps**2, 0.0, -12.0])
    return s, -4.0 * eps**3, Polynomial.monomial(4)


def _comparison_b(eps):
    s = Polynomial([-1.2 * eps**2, 0.0, -12.0])
    g = 0.4 * eps**2 * (8.0 - 13.0 * eps)
    c = 0.6 * eps**2
    v = Polynomial([c * (-3.0 - 4.0 * eps - eps**2), 2.0 + 2.0 * c, c, 0.0, 1.0])
    return s, g, v


CASE_DATA: dict[str, CaseData] = {
    "consistency-A": _consistency_a,
    "consistency-B": _consistency_b,
    "benchmark": _benchmark,
    "comparison-A": _comparison_a,
    "comparison-B": _comparison_b,
}

CONSISTENCY_EPS = tuple(2.0**-k for k in range(2, 6))
CONVERGENCE_SETUPS = {
    "fixed_h": (GridRule("fixed_h", 2.0**-12), tuple(2.0**-k for k in range(2, 6))),
    "quadratic": (GridRule("quadratic"), tuple(2.0**-k for k in range(2, 6))),
    "linear": (GridRule("linear"), tuple(2.0**-k for k in range(2, 7))),
}
COMPARISON_H, COMPARISON_EPS = 2.0**-8, 2.0**-3


@dataclass(frozen=True)
class ResultRow:
    case: str
    strategy: str
    record: ConvergenceRecord


@dataclass
class ResultSet:
    name: str
    rows: list[ResultRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    curves: Optional[dict] = None

    def records(self, case: str, strategy: str) -> list[ConvergenceRecord]:
        return [r.record for r in self.rows if r.case == case and r.strategy == strategy]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            r = row.record
            writer.writerow([row.case, row.strategy, repr(r.h), repr(r.epsilon), repr(r.e_E),
                             _opt(r.rate_E), repr(r.e_0), _opt(r.rate_0)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "metadata": self.metadata,
            "rows": [{"case": r.case, "strategy": r.strategy, **asdict(r.record)} for r in self.rows],
            "checks": self.checks,
            "curves": self.curves,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        """Human-readable table: errors to 3 significant figures, rates to 2 decimals."""
        lines = [f"{'case':<14} {'strategy':<9} {'h':>9} {'eps':>9} {'e_E':>9} {'rate':>5} {'e_0':>9} {'rate':>5}"]
        for row in self.rows:
            r = row.record
            lines.append(
                f"{row.case:<14} {row.strategy:<9} {r.h:9.3e} {r.epsilon:9.3e} {r.e_E:9.2e} "
                f"{_fmt_rate(r.rate_E):>5} {r.e_0:9.2e} {_fmt_rate(r.rate_0):>5}"
            )
        return "\n".join(lines)


def _opt(v: Optional[float]) -> str:
    return "-" if v is None else repr(v)


def _fmt_rate(v: Optional[float]) -> str:
    return "-" if v is None else f"{v:.2f}"


def build_problem(data: CaseData, eps: float, h: float, quad: QuadratureSpec,
                  a: float = A_DEFAULT, b: float = B_DEFAULT, local_cells: Optional[int] = None) -> ConversionProblem:
    s, g, v = data(eps)
    dom = build_domain(a, b, eps)
    return ConversionProblem(dom, Kernel(eps), build_mesh(dom, h), s, g, v, quad=quad, local_cells=local_cells)


def solve_cell(data: CaseData, eps: float, h: float, strategy: str, quad: QuadratureSpec, **geometry):
    """One (horizon, mesh, strategy) run; returns the strategy result and its errors.

    ``geometry`` is forwarded to :func:`build_problem` (``a``, ``b``, ``local_cells``).
    """
    prob = build_problem(data, eps, h, quad, **geometry)
    res = run_strategy(prob, strategy)
    err = metrics.errors(res.solution, res.local_solution, prob.kernel, quad)
    return res, ConvergenceRecord(h, eps, err.e_E, err.e_0)


def _map(func, items, threads: int):
    if threads <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _halving(eps_list) -> bool:
    return all(abs(p / c - 2.0) <= 1e-9 for p, c in zip(eps_list, eps_list[1:]))


def run_case(case: ExperimentCase, quad: QuadratureSpec = QuadratureSpec(), threads: int = 1,
             keep_solutions: bool = False, **geometry):
    """Run every (strategy, horizon) cell of ``case``; rows ordered by strategy, horizon descending.

    Rates are filled in when the horizons halve from row to row and left empty otherwise.
    """
    eps_list = sorted(case.epsilons, reverse=True)
    cells = [(st, eps) for st in case.strategies for eps in eps_list]
    results = _map(lambda c: solve_cell(case.data, c[1], case.grid.h_for(c[1]), c[0], quad, **geometry),
                   cells, threads)
    rows, solutions = [], {}
    for st in case.strategies:
        recs = [rec for (cst, _), (_, rec) in zip(cells, results) if cst == st]
        if _halving(eps_list):
            recs = metrics.rates(recs)
        rows += [ResultRow(case.name, st, r) for r in recs]
    if keep_solutions:
        solutions = {cell: res for cell, (res, _) in zip(cells, results)}
    return rows, solutions


def _metadata(quad: QuadratureSpec, **extra) -> dict:
    return {"quadrature_points": quad.points, "convention": CONVENTION, "kernel": "constant",
            "a": A_DEFAULT, "b": B_DEFAULT, **extra}


def run_consistency(h: float = 2.0**-6, epsilons=CONSISTENCY_EPS, quad: QuadratureSpec = QuadratureSpec(),
                    threads: int = 1) -> ResultSet:
    out = ResultSet("consistency", metadata=_metadata(quad, h=h, epsilons=list(epsilons)))
    gaps = {}
    for name in ("consistency-A", "consistency-B"):
        case = ExperimentCase(name, CASE_DATA[name], (NEUMANN, DIRICHLET), GridRule("fixed_h", h), tuple(epsilons))
        rows, sols = run_case(case, quad, threads, keep_solutions=True)
        out.rows += rows
        gaps[name] = {
            repr(eps): float(np.max(np.abs(sols[(NEUMANN, eps)].solution.values
                                           - sols[(DIRICHLET, eps)].solution.values)))
            for eps in sorted(epsilons, reverse=True)
        }
    out.checks["strategy_nodal_gap"] = gaps
    return out


def run_convergence(mode: str, strategy: str, quad: QuadratureSpec = QuadratureSpec(), threads: int = 1,
                    epsilons=None) -> ResultSet:
    if mode not in CONVERGENCE_SETUPS:
        raise ValueError(f"unknown mode {mode!r}; expected one of {tuple(CONVERGENCE_SETUPS)}")
    grid, default_eps = CONVERGENCE_SETUPS[mode]
    eps = tuple(epsilons) if epsilons is not None else default_eps
    strategies = (NEUMANN, DIRICHLET) if strategy == "both" else (strategy,)
    case = ExperimentCase("benchmark", CASE_DATA["benchmark"], strategies, grid, eps)
    rows, _ = run_case(case, quad, threads)
    meta = _metadata(quad, mode=mode, h=grid.h, epsilons=list(eps))
    return ResultSet(f"convergence-{mode}", rows, meta)


def run_comparison(case: str, h: float = COMPARISON_H, eps: float = COMPARISON_EPS,
                   quad: QuadratureSpec = QuadratureSpec()) -> ResultSet:
    """Both strategies on one grid, with curves sampled on ``[a - eps, a + 3 eps]``."""
    name = f"comparison-{case}"
    if name not in CASE_DATA:
        raise ValueError(f"unknown comparison case {case!r}; expected 'A' or 'B'")
    data = CASE_DATA[name]
    res_n, rec_n = solve_cell(data, eps, h, NEUMANN, quad)
    res_d, rec_d = solve_cell(data, eps, h, DIRICHLET, quad)
    ul = res_n.local_solution
    mesh = res_n.solution.mesh
    x = mesh.nodes
    a = mesh.domain.a
    layer = np.flatnonzero(x <= a + mesh.tol)
    window = np.flatnonzero((x >= a - eps - mesh.tol) & (x <= a + 3 * eps + mesh.tol))

    # discretization floor: cubic consistency data on the same grid
    _, floor_rec = solve_cell(CASE_DATA["consistency-B"], eps, h, NEUMANN, quad)
    floor = floor_rec.e_E
    gap = float(np.max(np.abs(res_n.solution.values[layer] - ul(x[layer]))))
    dir_dev = float(np.max(np.abs(res_d.solution.values[layer] - ul(x[layer]))))
    checks = {
        "dirichlet_max_deviation_on_layer": dir_dev,
        "neumann_max_gap_on_layer": gap,
        "consistency_floor": floor,
        "dirichlet_matches_local": dir_dev == 0.0,
        "neumann_departs_from_local": gap > 10.0 * floor,
    }
    curves = {
        "x": x[window].tolist(),
        "u_neumann": res_n.solution.values[window].tolist(),
        "u_dirichlet": res_d.solution.values[window].tolist(),
        "u_local": np.asarray(ul(x[window])).tolist(),
    }
    rows = [ResultRow(name, NEUMANN, rec_n), ResultRow(name, DIRICHLET, rec_d)]
    meta = _metadata(quad, h=h, epsilons=[eps], note="discretization unstated in the source; defaults chosen")
    return ResultSet(name, rows, meta, checks, curves)


def run_custom(cfg, threads: int = 1) -> ResultSet:
    """Run a problem described by a :class:`nlvc.config.RunConfig`."""
    quad = QuadratureSpec(cfg.quad_points)
    strategies = (NEUMANN, DIRICHLET) if cfg.problem.strategy == "both" else (cfg.problem.strategy,)
    case = ExperimentCase("custom", cfg.problem.resolve, strategies, GridRule(cfg.grid_mode, cfg.h), cfg.epsilons)
    local_cells = cfg.problem.local_cells if cfg.problem.local_solver == "numeric" else None
    rows, _ = run_case(case, quad, threads, a=cfg.a, b=cfg.b, local_cells=local_cells)
    meta = _metadata(quad, mode=cfg.grid_mode, h=cfg.h, epsilons=list(cfg.epsilons),
                     local_solver=cfg.problem.local_solver)
    meta.update(a=cfg.a, b=cfg.b)
    return ResultSet("custom", rows, meta)
