"""Compactly supported interaction kernels and their moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrder
from .quadrature import gauss_legendre

FAMILIES = ("constant",)


@dataclass(frozen=True)
class Kernel:
    """Symmetric kernel ``gamma(x, y) = strength * 1(|x - y| < epsilon)``.

    ``scale`` multiplies the normalized strength ``3 / epsilon**3``; it is 1
    for every physical run and exists so mis-normalized kernels can be
    represented in checks.
    """

    epsilon: float
    family: str = "constant"
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; known: {FAMILIES}")
        if not self.epsilon > 0:
            raise ValueError(f"horizon must be positive, got {self.epsilon}")

    @property
    def strength(self) -> float:
        return self.scale * 3.0 / self.epsilon**3

    def __call__(self, x, y):
        return gamma(self, x, y)


def gamma(kernel: Kernel, x, y):
    dist = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    out = np.where(dist < kernel.epsilon, kernel.strength, 0.0)
    return out if out.ndim else float(out)


def moment(kernel: Kernel, order: int) -> float:
    """Closed-form ``int_{-eps}^{eps} s**order gamma(s) ds`` over the full ball."""
    if order not in (0, 2, 4):
        raise UnsupportedOrder(f"moment order must be 0, 2 or 4, got {order}")
    eps = kernel.epsilon
    return kernel.strength * 2.0 * eps ** (order + 1) / (order + 1)


def numeric_moment(kernel: Kernel, order: int, points: int = 4, panels: int = 2) -> float:
    """Same integral by composite Gauss-Legendre, split at the origin."""
    eps = kernel.epsilon
    edges = np.linspace(-eps, eps, 2 * panels + 1)
    xi, w = gauss_legendre(points)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        s = lo + (hi - lo) * (xi + 1) / 2
        total += (hi - lo) / 2 * np.sum(w * s**order * gamma(kernel, 0.0, s))
    return float(total)


def local_limit_check(kernel: Kernel, rtol: float = 1e-10) -> bool:
    """True when the second moment equals 2, i.e. ``L u -> u''`` as eps -> 0."""
    return abs(moment(kernel, 2) - 2.0) <= rtol * 2.0
