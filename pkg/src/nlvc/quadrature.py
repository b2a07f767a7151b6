"""Gauss-Legendre rules and the quadrature settings object."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    xi, w = np.polynomial.legendre.leggauss(n)
    xi.setflags(write=False)
    w.setflags(write=False)
    return xi, w


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Abscissae and weights on ``[-1, 1]``."""
    return _rule(int(n))


def map_rule(lo, hi, n: int):
    """Gauss points/weights on ``[lo, hi]``; broadcasts over array endpoints.

    Returns arrays with a trailing axis of length ``n``.
    """
    xi, w = gauss_legendre(n)
    lo = np.asarray(lo, dtype=float)[..., None]
    hi = np.asarray(hi, dtype=float)[..., None]
    half = (hi - lo) / 2
    return lo + half * (xi + 1), half * w


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss points per subinterval.

    Integrals are always split at element boundaries, kernel support edges and
    the ends of the closure; only the per-piece order is configurable.
    """

    points: int = 4

    def __post_init__(self):
        if not 2 <= self.points <= 16:
            raise ValueError(f"points per subinterval must be in [2, 16], got {self.points}")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(min(2 * self.points, 16))
