"""Run configuration: YAML document validated against a bundled JSON schema.

Numbers may be written in decimal or power-of-two notation (``"2^-12"``).
Problem data may depend on the horizon through the name ``eps``, for example
``g_l: "2 + 5*eps^4"``.
"""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import jsonschema
import yaml

from .errors import ConfigError
from .poly import Polynomial

Scalar = Union[int, float, str]

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def load_schema() -> dict:
    text = resources.files("nlvc").joinpath("run_config.schema.json").read_text()
    return json.loads(text)


def evaluate(expr: Scalar, eps: Optional[float] = None) -> float:
    """Evaluate a number or an arithmetic string; ``^`` means power and ``eps`` the horizon."""
    if isinstance(expr, bool):
        raise ConfigError(f"expected a number, got {expr!r}")
    if isinstance(expr, (int, float)):
        return float(expr)
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {expr!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "eps":
            if eps is None:
                raise ConfigError(f"{expr!r} uses eps where no horizon is defined")
            return float(eps)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](walk(node.operand))
        raise ConfigError(f"unsupported element in {expr!r}")

    try:
        return float(walk(tree))
    except ZeroDivisionError:
        raise ConfigError(f"division by zero in {expr!r}") from None


@dataclass(frozen=True)
class ProblemSpec:
    source: tuple[Scalar, ...]
    g_l: Scalar
    v_n: tuple[Scalar, ...]
    strategy: str = "both"
    local_solver: str = "analytic"
    local_cells: int = 4096

    def resolve(self, eps: float) -> tuple[Polynomial, float, Polynomial]:
        s = Polynomial([evaluate(c, eps) for c in self.source])
        v = Polynomial([evaluate(c, eps) for c in self.v_n])
        return s, evaluate(self.g_l, eps), v


@dataclass(frozen=True)
class RunConfig:
    a: float
    b: float
    family: str
    epsilons: tuple[float, ...]
    grid_mode: str
    h: Optional[float]
    problem: ProblemSpec
    quad_points: int = 4
    output_path: Optional[str] = None
    formats: tuple[str, ...] = field(default=("csv", "json"))


def parse(document: dict) -> RunConfig:
    """Validate a decoded document and convert it to a :class:`RunConfig`."""
    try:
        jsonschema.validate(document, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"schema violation at {where}: {exc.message}") from None

    dom = document.get("domain", {})
    ker = document["kernel"]
    grid = document["grid"]
    prob = document["problem"]
    local = prob.get("local", {})
    out = document.get("output", {})

    raw_eps = [ker["epsilon"]] if "epsilon" in ker else ker["epsilon_list"]
    epsilons = tuple(evaluate(e) for e in raw_eps)
    if any(e <= 0 for e in epsilons):
        raise ConfigError("kernel horizons must be positive")
    h = evaluate(grid["h"]) if "h" in grid else None
    if grid["mode"] == "fixed_h" and h is None:
        raise ConfigError("grid.mode 'fixed_h' needs grid.h")

    problem = ProblemSpec(
        source=tuple(prob["source"]),
        g_l=prob["g_l"],
        v_n=tuple(prob["v_n"]),
        strategy=prob.get("strategy", "both"),
        local_solver=local.get("solver", "analytic"),
        local_cells=int(local.get("cells", 4096)),
    )
    for eps in epsilons:
        problem.resolve(eps)  # surface expression errors before any solve

    return RunConfig(
        a=evaluate(dom.get("a", 0.0)),
        b=evaluate(dom.get("b", 1.0)),
        family=ker.get("family", "constant"),
        epsilons=epsilons,
        grid_mode=grid["mode"],
        h=h,
        problem=problem,
        quad_points=int(document.get("quad", {}).get("points", 4)),
        output_path=out.get("path"),
        formats=tuple(out.get("formats", ("csv", "json"))),
    )


def load(path: Union[str, Path]) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    if not isinstance(document, dict):
        raise ConfigError(f"config {path} must be a mapping at the top level")
    return parse(document)
