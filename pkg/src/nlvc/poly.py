"""Exact polynomial calculus for manufactured solutions and data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .domain import Domain1D
from .errors import OutsideDomain
from .kernel import Kernel

MAX_DEGREE = 12


@dataclass(frozen=True, init=False)
class Polynomial:
    """Power-basis polynomial ``sum(c[k] * x**k)``, constant term first."""

    coefficients: tuple[float, ...]

    def __init__(self, coefficients):
        c = [float(v) for v in coefficients] or [0.0]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if len(c) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(c) - 1} exceeds the cap of {MAX_DEGREE}")
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def monomial(cls, k: int, scale: float = 1.0) -> "Polynomial":
        return cls([0.0] * k + [scale])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        out = P.polyval(np.asarray(x, dtype=float), self.coefficients)
        return out if np.ndim(out) else float(out)

    def __add__(self, other):
        return Polynomial(P.polyadd(self.coefficients, _coeffs(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(P.polysub(self.coefficients, _coeffs(other)))

    def __rsub__(self, other):
        return Polynomial(P.polysub(_coeffs(other), self.coefficients))

    def __mul__(self, other):
        return Polynomial(P.polymul(self.coefficients, _coeffs(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial([-c for c in self.coefficients])

    def derivative(self, order: int = 1) -> "Polynomial":
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        if order == 0:
            return self
        return Polynomial(P.polyder(self.coefficients, order))

    def antiderivative(self) -> "Polynomial":
        """Antiderivative vanishing at 0 (may exceed the degree cap by one)."""
        c = P.polyint(self.coefficients)
        return _Unchecked(c)

    def integrate(self, lo, hi):
        anti = P.polyint(self.coefficients)
        return P.polyval(hi, anti) - P.polyval(lo, anti)

    def __str__(self):
        terms = [f"{c:g}*x^{k}" for k, c in enumerate(self.coefficients) if c != 0.0]
        return " + ".join(terms) or "0"


class _Unchecked(Polynomial):
    def __init__(self, coefficients):
        object.__setattr__(self, "coefficients", tuple(float(v) for v in coefficients))


def _coeffs(other) -> tuple[float, ...]:
    if isinstance(other, Polynomial):
        return other.coefficients
    return (float(other),)


def window(domain: Domain1D, x, epsilon: float):
    """Interaction window ``[x - eps, x + eps]`` clipped to the closure."""
    x = np.asarray(x, dtype=float)
    return np.maximum(domain.left, x - epsilon), np.minimum(domain.right, x + epsilon)


def apply_L_truncated(p: Polynomial, kernel: Kernel, domain: Domain1D, x):
    """Exact ``int_{window(x)} (p(y) - p(x)) gamma(x, y) dy``; vectorized in ``x``."""
    xa = np.asarray(x, dtype=float)
    tol = 1e-12 * max(1.0, domain.length)
    if np.any(xa < domain.left - tol) or np.any(xa > domain.right + tol):
        raise OutsideDomain(f"x outside the closure {domain.closure}")
    lo, hi = window(domain, xa, kernel.epsilon)
    anti = P.polyint(p.coefficients)
    val = kernel.strength * (P.polyval(hi, anti) - P.polyval(lo, anti) - (hi - lo) * p(xa))
    return val if np.ndim(val) else float(val)


def neumann_data_function(p: Polynomial, kernel: Kernel, domain: Domain1D):
    """Vectorized ``x -> int_{window(x)} (p(x) - p(y)) gamma dy`` (layer force)."""

    def gtilde(x):
        return -apply_L_truncated(p, kernel, domain, x)

    return gtilde


def local_neumann_data(p: Polynomial, domain: Domain1D) -> float:
    """Flux datum ``g_l = -p'(x) n`` at the left end, where the outward normal is -1."""
    return p.derivative()(domain.left)
