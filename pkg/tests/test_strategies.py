import numpy as np
import pytest

from nlvc import fem, harness, strategies
from nlvc.domain import build_domain, build_mesh
from nlvc.kernel import Kernel
from nlvc.quadrature import QuadratureSpec
from nlvc.strategies import DIRICHLET, NEUMANN

Q = QuadratureSpec()
EPSILONS = [2.0**-k for k in range(2, 6)]


def _problem(case, eps, h, **kw):
    return harness.build_problem(harness.CASE_DATA[case], eps, h, Q, **kw)


@pytest.mark.parametrize("strategy", [NEUMANN, DIRICHLET])
@pytest.mark.parametrize("eps", EPSILONS)
def test_linear_data_reproduced_at_nodes(strategy, eps):
    res = strategies.run_strategy(_problem("consistency-A", eps, 2.0**-6), strategy)
    np.testing.assert_allclose(res.solution.values, res.solution.mesh.nodes, atol=1e-12)


@pytest.mark.parametrize("eps", EPSILONS)
def test_linear_data_strategies_agree(eps):
    p = _problem("consistency-A", eps, 2.0**-6)
    gap = strategies.run_strategy(p, NEUMANN).solution.values - strategies.run_strategy(p, DIRICHLET).solution.values
    assert np.max(np.abs(gap)) < 1e-8


def test_constrained_node_sets():
    mesh = build_mesh(build_domain(0, 1, 0.25), 0.0625)
    left, right = strategies.constrained_nodes(mesh, NEUMANN)
    assert len(left) == 0
    np.testing.assert_allclose(mesh.nodes[right], np.linspace(1, 1.25, 5))
    left, right = strategies.constrained_nodes(mesh, DIRICHLET)
    np.testing.assert_allclose(mesh.nodes[left], np.linspace(-0.25, 0, 5))
    with pytest.raises(ValueError):
        strategies.constrained_nodes(mesh, "robin")


def test_dirichlet_layer_carries_local_solution():
    p = _problem("comparison-B", 2.0**-3, 2.0**-6)
    res = strategies.run_strategy(p, DIRICHLET)
    left, right = strategies.constrained_nodes(p.mesh, DIRICHLET)
    x = p.mesh.nodes
    np.testing.assert_array_equal(res.solution.values[left], res.local_solution(x[left]))
    np.testing.assert_array_equal(res.solution.values[right], p.dirichlet_data(x[right]))


def test_neumann_result_reports_layer_force():
    p = _problem("benchmark", 2.0**-3, 2.0**-6)
    res = strategies.run_strategy(p, NEUMANN)
    assert res.gtilde_points.shape == (p.mesh.horizon_cells * Q.points,)
    assert np.all(res.gtilde_points < p.domain.a)
    assert np.all(res.pivots > 0)


@pytest.mark.parametrize("strategy", [NEUMANN, DIRICHLET])
def test_galerkin_orthogonality_with_doubled_quadrature(strategy):
    p = _problem("benchmark", 2.0**-3, 2.0**-6)
    res = strategies.run_strategy(p, strategy)
    q2 = Q.doubled()
    A = fem.assemble_stiffness(p.mesh, p.kernel, q2)
    g = strategies.layer_force(p, res.local_solution) if strategy == NEUMANN else None
    rhs = fem.assemble_load(p.mesh, p.source, g, q2)
    left, right = strategies.constrained_nodes(p.mesh, strategy)
    free = np.setdiff1d(np.arange(p.mesh.n_nodes), np.concatenate((left, right)))
    residual = A.matvec(res.solution.values) - rhs
    assert np.max(np.abs(residual[free])) < 1e-9


def test_neumann_solution_independent_of_local_solver():
    exact = strategies.run_strategy(_problem("benchmark", 2.0**-3, 2.0**-6), NEUMANN)
    numeric = strategies.run_strategy(_problem("benchmark", 2.0**-3, 2.0**-6, local_cells=2**16), NEUMANN)
    x = np.linspace(-0.125, 1.125, 257)
    assert np.max(np.abs(exact.local_solution(x) - numeric.local_solution(x))) < 1e-9
    assert np.max(np.abs(exact.solution.values - numeric.solution.values)) < 1e-9


@pytest.mark.parametrize("case", ["comparison-A", "comparison-B"])
def test_neumann_departs_from_local_on_layer(case):
    p = _problem(case, 2.0**-3, 2.0**-8)
    res = strategies.run_strategy(p, NEUMANN)
    layer = p.mesh.nodes <= p.domain.a
    gap = np.abs(res.solution.values[layer] - res.local_solution(p.mesh.nodes[layer]))
    assert gap.max() > 1e-3


def test_unknown_strategy():
    with pytest.raises(ValueError):
        strategies.run_strategy(_problem("benchmark", 0.25, 0.0625), "robin")


def test_trace_defaults_to_dirichlet_data():
    p = _problem("benchmark", 0.25, 0.0625)
    assert p.trace_value == pytest.approx(p.dirichlet_data(1.25))


def test_fixed_h_neumann_coarsest_horizon(fixed_h_tables):
    assert fixed_h_tables.records("benchmark", NEUMANN)[0].e_E == pytest.approx(9.99e-2, rel=0.05)


def test_fixed_h_dirichlet_second_horizon(fixed_h_tables):
    rec = fixed_h_tables.records("benchmark", DIRICHLET)[1]
    assert rec.e_E == pytest.approx(1.56e-2, rel=0.05)
    assert rec.e_0 == pytest.approx(5.19e-3, rel=0.05)


def test_dirichlet_more_accurate(fixed_h_tables, quadratic_tables):
    for result in (fixed_h_tables, quadratic_tables):
        for n, d in zip(result.records("benchmark", NEUMANN), result.records("benchmark", DIRICHLET)):
            assert d.e_E < n.e_E and d.e_0 < n.e_0
