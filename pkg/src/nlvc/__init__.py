"""Nonlocal diffusion in one dimension with volume constraints derived from local Neumann data."""

from .domain import Domain1D, Mesh1D, Region, build_domain, build_mesh, classify
from .kernel import Kernel
from .poly import Polynomial
from .quadrature import QuadratureSpec
from .strategies import ConversionProblem, run_strategy

__all__ = [
    "ConversionProblem",
    "Domain1D",
    "Kernel",
    "Mesh1D",
    "Polynomial",
    "QuadratureSpec",
    "Region",
    "build_domain",
    "build_mesh",
    "classify",
    "run_strategy",
]
__version__ = "0.1.0"
