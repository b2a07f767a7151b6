"""One-dimensional domain layout and uniform meshes.

The configuration is ``Omega = (a, b)`` surrounded by two layers of thickness
``epsilon``: the Neumann layer ``(a - eps, a)`` on the left and the Dirichlet
layer ``(b, b + eps)`` on the right.  The closure ``[a - eps, b + eps]`` is the
computational domain.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometry, MisalignedDomain, MisalignedHorizon

_ALIGN_RTOL = 1e-12


class Region(enum.Enum):
    INTERIOR = "interior"
    NEUMANN_LAYER = "neumann_layer"
    DIRICHLET_LAYER = "dirichlet_layer"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Domain1D:
    a: float
    b: float
    epsilon: float

    @property
    def left(self) -> float:
        """Left end of the closure, also the Neumann boundary point."""
        return self.a - self.epsilon

    @property
    def right(self) -> float:
        """Right end of the closure, also the Dirichlet boundary point."""
        return self.b + self.epsilon

    @property
    def closure(self) -> tuple[float, float]:
        return (self.left, self.right)

    @property
    def neumann_layer(self) -> tuple[float, float]:
        return (self.left, self.a)

    @property
    def dirichlet_layer(self) -> tuple[float, float]:
        return (self.b, self.right)

    @property
    def length(self) -> float:
        return self.right - self.left


def build_domain(a: float, b: float, epsilon: float) -> Domain1D:
    a, b, epsilon = float(a), float(b), float(epsilon)
    if not b > a:
        raise InvalidGeometry(f"need b > a, got a={a}, b={b}")
    if not 0.0 < epsilon < (b - a) / 2:
        raise InvalidGeometry(
            f"horizon must satisfy 0 < epsilon < (b - a)/2 = {(b - a) / 2}, got {epsilon}"
        )
    return Domain1D(a, b, epsilon)


def classify(domain: Domain1D, x: float, tol: float = 0.0) -> Region:
    """Region containing ``x``.

    ``[a, b]`` is interior, ``[a - eps, a)`` is the Neumann layer and
    ``(b, b + eps]`` the Dirichlet layer.  ``tol`` widens the closed ends.
    """
    if x < domain.left - tol or x > domain.right + tol:
        return Region.OUTSIDE
    if x < domain.a - tol:
        return Region.NEUMANN_LAYER
    if x <= domain.b + tol:
        return Region.INTERIOR
    return Region.DIRICHLET_LAYER


def _integer_ratio(num: float, den: float) -> int | None:
    ratio = num / den
    n = round(ratio)
    if n < 1 or abs(ratio - n) > _ALIGN_RTOL * max(1.0, abs(ratio)):
        return None
    return n


@dataclass(frozen=True)
class Mesh1D:
    domain: Domain1D
    h: float
    nodes: np.ndarray = field(repr=False)
    regions: tuple[Region, ...] = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1

    @property
    def horizon_cells(self) -> int:
        """Number of elements spanned by the horizon (``eps / h``)."""
        return int(round(self.domain.epsilon / self.h))

    @property
    def tol(self) -> float:
        return self.h * 1e-9

    def indices(self, region: Region) -> np.ndarray:
        return np.array([i for i, r in enumerate(self.regions) if r is region], dtype=int)

    def element_of(self, x):
        """Index of the element containing ``x`` (right end maps to the last element)."""
        e = np.floor((np.asarray(x, dtype=float) - self.nodes[0]) / self.h).astype(int)
        return np.clip(e, 0, self.n_elements - 1)


def build_mesh(domain: Domain1D, h: float) -> Mesh1D:
    h = float(h)
    if h <= 0:
        raise MisalignedHorizon(f"mesh size must be positive, got {h}")
    if _integer_ratio(domain.epsilon, h) is None:
        raise MisalignedHorizon(
            f"epsilon/h = {domain.epsilon / h:.6g} is not a positive integer; "
            "choose h dividing the horizon"
        )
    if _integer_ratio(domain.b - domain.a, h) is None:
        raise MisalignedDomain(f"(b - a)/h = {(domain.b - domain.a) / h:.6g} is not an integer")
    n = round(domain.length / h)
    nodes = domain.left + h * np.arange(n + 1, dtype=float)
    nodes[-1] = domain.right
    tol = h * 1e-9
    regions = tuple(classify(domain, float(x), tol) for x in nodes)
    return Mesh1D(domain, h, nodes, regions)
