"""Piecewise-linear finite elements for the volume-constrained problem.

The bilinear form is

    a(u, z) = 1/2 int int (u(x) - u(y)) (z(x) - z(y)) gamma(x, y) dy dx

over the closure squared, which for the constant kernel splits into a mass
term weighted by the clipped kernel volume ``m(x) = int gamma(x, y) dy`` and a
coupling term ``int phi_i(x) int_{W(x)} phi_j(y) gamma dy dx``.  With the
horizon a multiple of ``h`` the inner integral of a hat function is piecewise
quadratic in ``x`` with breaks at nodes, so element-wise Gauss rules integrate
both terms exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded

from .domain import Mesh1D, Region
from .errors import EmptyFreeSet, FactorizationFailure, MisalignedHorizon, OutsideDomain
from .kernel import Kernel
from .quadrature import QuadratureSpec, gauss_legendre

RESIDUAL_TOL = 1e-10
_CHUNK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class NodalField:
    """Continuous piecewise-linear function given by its nodal values."""

    mesh: Mesh1D
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.mesh.n_nodes:
            raise ValueError(f"expected {self.mesh.n_nodes} values, got {len(self.values)}")

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        lo, hi = self.mesh.nodes[0], self.mesh.nodes[-1]
        tol = self.mesh.tol
        if np.any(xa < lo - tol) or np.any(xa > hi + tol):
            raise OutsideDomain(f"evaluation outside [{lo}, {hi}]")
        out = np.interp(xa, self.mesh.nodes, self.values)
        return out if np.ndim(out) else float(out)


class BandedMatrix:
    """Square matrix stored by diagonals: ``band[i, p + d] = A[i, i + d]``."""

    def __init__(self, band: np.ndarray):
        self.band = band
        self.p = (band.shape[1] - 1) // 2

    @property
    def n(self) -> int:
        return self.band.shape[0]

    def toarray(self) -> np.ndarray:
        n, p = self.n, self.p
        dense = np.zeros((n, n))
        for d in range(-p, p + 1):
            rows = np.arange(max(0, -d), min(n, n - d))
            dense[rows, rows + d] = self.band[rows, p + d]
        return dense

    def matvec(self, x: np.ndarray) -> np.ndarray:
        n, p = self.n, self.p
        out = np.zeros(n)
        for d in range(-p, p + 1):
            lo, hi = max(0, -d), min(n, n - d)
            out[lo:hi] += self.band[lo:hi, p + d] * x[lo + d:hi + d]
        return out

    def row_sums(self) -> np.ndarray:
        return self.band.sum(axis=1)

    def symmetry_error(self) -> float:
        """``max |A_ij - A_ji|``."""
        n, p = self.n, self.p
        err = 0.0
        for d in range(1, p + 1):
            rows = np.arange(0, n - d)
            if len(rows):
                err = max(err, float(np.max(np.abs(self.band[rows, p + d] - self.band[rows + d, p - d]))))
        return err

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.band)))

    def block(self, lo: int, hi: int) -> "BandedMatrix":
        """Principal submatrix on the contiguous index range ``[lo, hi)``."""
        sub = self.band[lo:hi].copy()
        p = self.p
        for i in range(min(p, hi - lo)):
            sub[i, : p - i] = 0.0
            sub[hi - lo - 1 - i, p + i + 1:] = 0.0
        return BandedMatrix(sub)

    def lapack_upper(self) -> np.ndarray:
        """Upper storage ``ab[p + i - j, j] = A[i, j]`` as used by LAPACK ``pbtrf``."""
        n, p = self.n, self.p
        ab = np.zeros((p + 1, n))
        for d in range(p + 1):
            ab[p - d, d:] = self.band[: n - d, p + d]
        return ab


def _hat_cumulative(t):
    """Integral of the unit hat ``max(0, 1 - |s|)`` from -inf to ``t``."""
    tc = np.clip(t, -1.0, 1.0)
    return np.where(tc < 0.0, 0.5 * (tc + 1.0) ** 2, 1.0 - 0.5 * (1.0 - tc) ** 2)


def _check_aligned(mesh: Mesh1D, kernel: Kernel):
    k = kernel.epsilon / mesh.h
    if abs(k - round(k)) > 1e-12 * max(1.0, k) or abs(kernel.epsilon - mesh.domain.epsilon) > 1e-15:
        raise MisalignedHorizon(
            f"kernel horizon {kernel.epsilon} must equal the mesh horizon and be a multiple of h={mesh.h}"
        )


def assemble_stiffness(mesh: Mesh1D, kernel: Kernel, q: QuadratureSpec = QuadratureSpec()) -> BandedMatrix:
    """Assemble the full band (both triangles) of the stiffness matrix.

    Coordinates are handled in units of ``h`` relative to the element so that
    window edges and hat supports are computed without cancellation.
    """
    _check_aligned(mesh, kernel)
    k = mesh.horizon_cells
    n, ne = mesh.n_nodes, mesh.n_elements
    p = k + 1
    xi, w = gauss_legendre(q.points)
    t = (xi + 1.0) / 2.0
    wt = w / 2.0
    phi = (1.0 - t, t)
    scale = kernel.strength * mesh.h**2
    band = np.zeros((n, 2 * p + 1))

    # mass term weighted by the clipped kernel volume (in units of h)
    e = np.arange(ne)
    xq = e[:, None] + t[None, :]
    vol = np.minimum(xq + k, n - 1) - np.maximum(xq - k, 0)
    for a in range(2):
        for b in range(2):
            loc = scale * np.sum(wt * vol * phi[a] * phi[b], axis=1)
            band[e + a, p + b - a] += loc

    # coupling term: element e against hats j = e + d, d in [-k, k + 1]
    d = np.arange(-k, k + 2)
    chunk = max(1, _CHUNK_ENTRIES // (len(t) * len(d)))
    for start in range(0, ne, chunk):
        ec = np.arange(start, min(ne, start + chunk))
        xq = ec[:, None] + t[None, :]                  # (c, q)
        upper = np.minimum(xq + k, n - 1)[:, :, None]
        lower = np.maximum(xq - k, 0)[:, :, None]
        j = ec[:, None] + d[None, :]                   # (c, D)
        rel = j[:, None, :]
        inner = _hat_cumulative(upper - rel) - _hat_cumulative(lower - rel)
        valid = (j >= 0) & (j < n)
        for a in range(2):
            contrib = scale * np.einsum("q,q,cqd->cd", wt, phi[a], inner)
            contrib[~valid] = 0.0
            # row ec + a, column ec + d  ->  offset d - a
            offs = p + d - a
            band[(ec + a)[:, None], offs[None, :]] -= contrib
    return BandedMatrix(band)


def assemble_load(mesh: Mesh1D, source, gtilde=None, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """``int_Omega s phi_i`` plus, when given, ``int_{Omega_N} gtilde phi_i``.

    ``source`` and ``gtilde`` are vectorized callables.
    """
    k = mesh.horizon_cells
    ne = mesh.n_elements
    rhs = np.zeros(mesh.n_nodes)
    xi, w = gauss_legendre(q.points)
    t = (xi + 1.0) / 2.0
    wt = w / 2.0 * mesh.h

    def add(func, elems):
        if len(elems) == 0:
            return
        xq = mesh.nodes[elems][:, None] + mesh.h * t[None, :]
        vals = np.asarray(func(xq), dtype=float) * np.ones_like(xq)
        rhs[elems] += np.sum(wt * vals * (1.0 - t), axis=1)
        rhs[elems + 1] += np.sum(wt * vals * t, axis=1)

    add(source, np.arange(k, ne - k))
    if gtilde is not None:
        add(gtilde, np.arange(0, k))
    return rhs


@dataclass
class ReducedSystem:
    mesh: Mesh1D
    matrix: BandedMatrix
    rhs: np.ndarray
    free: slice
    fixed_index: np.ndarray
    fixed_values: np.ndarray
    pivots: np.ndarray | None = field(default=None, repr=False)


def apply_dirichlet(matrix: BandedMatrix, rhs: np.ndarray, mesh: Mesh1D, values: dict[int, float]) -> ReducedSystem:
    """Eliminate the prescribed nodes by lifting; the free nodes must be contiguous."""
    n = mesh.n_nodes
    fixed = np.array(sorted(values), dtype=int)
    mask = np.ones(n, dtype=bool)
    mask[fixed] = False
    free_idx = np.flatnonzero(mask)
    if len(free_idx) == 0:
        raise EmptyFreeSet("every node is constrained")
    lo, hi = int(free_idx[0]), int(free_idx[-1]) + 1
    if hi - lo != len(free_idx):
        raise ValueError("free nodes must form a contiguous block")
    fixed_vals = np.array([values[i] for i in fixed], dtype=float)
    lift = np.zeros(n)
    lift[fixed] = fixed_vals
    reduced_rhs = rhs[lo:hi] - matrix.matvec(lift)[lo:hi]
    return ReducedSystem(mesh, matrix.block(lo, hi), reduced_rhs, slice(lo, hi), fixed, fixed_vals)


def dirichlet_values(mesh: Mesh1D, func, regions=(Region.DIRICHLET_LAYER,)) -> dict[int, float]:
    idx = np.concatenate([mesh.indices(r) for r in regions]) if regions else np.array([], int)
    vals = np.asarray(func(mesh.nodes[idx]), dtype=float) * np.ones(len(idx))
    return {int(i): float(v) for i, v in zip(idx, vals)}


def solve(system: ReducedSystem) -> NodalField:
    """Banded Cholesky solve followed by re-expansion to all nodes."""
    ab = system.matrix.lapack_upper()
    try:
        factor = cholesky_banded(ab, lower=False)
    except LinAlgError as exc:
        raise FactorizationFailure(f"constrained stiffness matrix is not positive definite: {exc}") from exc
    system.pivots = factor[-1].copy()
    if not np.all(system.pivots > 0):
        raise FactorizationFailure("non-positive pivot in banded Cholesky")
    u = cho_solve_banded((factor, False), system.rhs)
    resid = np.max(np.abs(system.matrix.matvec(u) - system.rhs), initial=0.0)
    scale = max(np.max(np.abs(system.rhs), initial=0.0), system.matrix.max_abs() * np.max(np.abs(u), initial=0.0))
    if scale > 0 and resid / scale > RESIDUAL_TOL:
        raise FactorizationFailure(f"relative residual {resid / scale:.3e} exceeds {RESIDUAL_TOL}")
    full = np.zeros(system.mesh.n_nodes)
    full[system.free] = u
    full[system.fixed_index] = system.fixed_values
    return NodalField(system.mesh, full)


def write_triplets(path, matrix: BandedMatrix, rhs: np.ndarray | None = None) -> None:
    """Dump nonzero entries as ``i j value`` rows, then ``rhs i value`` rows."""
    p = matrix.p
    with open(path, "w") as fh:
        for i in range(matrix.n):
            for d in range(-p, p + 1):
                v = float(matrix.band[i, p + d])
                if v != 0.0:
                    fh.write(f"{i} {i + d} {v!r}\n")
        if rhs is not None:
            for i, v in enumerate(rhs):
                fh.write(f"rhs {i} {float(v)!r}\n")
