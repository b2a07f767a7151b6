"""Error norms and observed convergence rates."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .domain import Mesh1D
from .errors import NonHalvingEpsilon
from .kernel import Kernel
from .quadrature import QuadratureSpec, gauss_legendre

_CHUNK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class ErrorPair:
    e_E: float
    e_0: float


@dataclass(frozen=True)
class ConvergenceRecord:
    h: float
    epsilon: float
    e_E: float
    e_0: float
    rate_E: Optional[float] = None
    rate_0: Optional[float] = None


class Difference:
    """``field - reference`` as a vectorized callable, keeping the field's mesh."""

    def __init__(self, field, reference):
        self.field = field
        self.reference = reference
        self.mesh = field.mesh

    def __call__(self, x):
        return self.field(x) - self.reference(x)


def energy_seminorm(v, kernel: Kernel, mesh: Mesh1D, q: QuadratureSpec = QuadratureSpec()) -> float:
    """``sqrt(1/2 int int (v(y) - v(x))**2 gamma dy dx)`` over the closure squared.

    Outer Gauss points on every element; for each, the clipped window is split
    at mesh nodes and at ``x +- eps`` and integrated with the same rule.  ``v``
    is evaluated pointwise, so an exact reference stays exact.
    """
    k = mesh.horizon_cells
    ne, h = mesh.n_elements, mesh.h
    left, right = mesh.nodes[0], mesh.nodes[-1]
    eps = kernel.epsilon
    xi, w = gauss_legendre(q.points)
    t = (xi + 1.0) / 2.0
    r = np.arange(-k, k + 1)
    per_elem = len(t) * len(r) * len(t)
    chunk = max(1, _CHUNK_ENTRIES // per_elem)
    total = 0.0
    for start in range(0, ne, chunk):
        e = np.arange(start, min(ne, start + chunk))
        x = mesh.nodes[e][:, None] + h * t[None, :]            # (c, q)
        wx = h * w / 2.0
        vx = v(x)
        inner_e = e[:, None, None] + r[None, None, :]          # (c, 1, R)
        elo = left + inner_e * h
        lo = np.maximum(np.maximum(elo, x[:, :, None] - eps), left)
        hi = np.minimum(np.minimum(elo + h, x[:, :, None] + eps), right)
        length = np.where((inner_e >= 0) & (inner_e < ne), np.maximum(hi - lo, 0.0), 0.0)
        # empty slots (outside the closure) get zero weight; keep their points inside
        y = np.clip(lo[..., None] + length[..., None] * t, left, right)  # (c, q, R, q)
        wy = length[..., None] * (w / 2.0)
        diff2 = (v(y) - vx[:, :, None, None]) ** 2
        inner = np.sum(wy * diff2, axis=(2, 3))                # (c, q)
        total += float(np.sum(wx * inner))
    return math.sqrt(max(0.5 * kernel.strength * total, 0.0))


def l2_norm(v, mesh: Mesh1D, q: QuadratureSpec = QuadratureSpec()) -> float:
    xi, w = gauss_legendre(q.points)
    x = mesh.nodes[:-1, None] + mesh.h * (xi + 1.0)[None, :] / 2.0
    return math.sqrt(float(np.sum(mesh.h * w / 2.0 * v(x) ** 2)))


def errors(field, reference, kernel: Kernel, q: QuadratureSpec = QuadratureSpec()) -> ErrorPair:
    diff = Difference(field, reference)
    return ErrorPair(energy_seminorm(diff, kernel, field.mesh, q), l2_norm(diff, field.mesh, q))


def _rate(prev: float, cur: float) -> Optional[float]:
    if prev <= 0.0 or cur <= 0.0:
        return None
    return math.log2(prev / cur)


def rates(records: list[ConvergenceRecord]) -> list[ConvergenceRecord]:
    """Fill ``rate = log2(previous / current)``; the horizon must halve row to row."""
    out = []
    for i, rec in enumerate(records):
        if i == 0:
            out.append(replace(rec, rate_E=None, rate_0=None))
            continue
        prev = records[i - 1]
        if abs(prev.epsilon / rec.epsilon - 2.0) > 1e-9:
            raise NonHalvingEpsilon(
                f"epsilon must halve between rows, got {prev.epsilon} -> {rec.epsilon}"
            )
        out.append(replace(rec, rate_E=_rate(prev.e_E, rec.e_E), rate_0=_rate(prev.e_0, rec.e_0)))
    return out
