"""Tiny arithmetic-expression compiler for declarative problem files.

Accepts plain math over the decision vector ``x``: literals, ``x[i]``
indexing, +, -, *, /, **, %, unary minus, and a whitelist of math
functions. Anything else (names, attributes, calls outside the whitelist)
is rejected at load time, so problem files cannot run arbitrary code.
"""

from __future__ import annotations

import ast
import math

from .core import ConfigurationError

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "asin": math.asin,
    "acos": math.acos,
    "atan": math.atan,
    "atan2": math.atan2,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "exp": math.exp,
    "log": math.log,
    "log2": math.log2,
    "log10": math.log10,
    "sqrt": math.sqrt,
    "abs": abs,
    "floor": math.floor,
    "ceil": math.ceil,
    "hypot": math.hypot,
    "min": min,
    "max": max,
}

_CONSTANTS = {"pi": math.pi, "e": math.e}

_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.Mod)
_UNARYOPS = (ast.UAdd, ast.USub)


def _validate(node: ast.AST, dimension: int, src: str) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body, dimension, src)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ConfigurationError(f"non-numeric literal in expression: {src!r}")
    elif isinstance(node, ast.Name):
        if node.id not in _CONSTANTS and node.id != "x":
            raise ConfigurationError(f"unknown name {node.id!r} in expression: {src!r}")
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _BINOPS):
            raise ConfigurationError(f"operator not allowed in expression: {src!r}")
        _validate(node.left, dimension, src)
        _validate(node.right, dimension, src)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, _UNARYOPS):
            raise ConfigurationError(f"operator not allowed in expression: {src!r}")
        _validate(node.operand, dimension, src)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ConfigurationError(f"function not allowed in expression: {src!r}")
        if node.keywords:
            raise ConfigurationError(f"keyword arguments not allowed: {src!r}")
        for arg in node.args:
            _validate(arg, dimension, src)
    elif isinstance(node, ast.Subscript):
        if not (isinstance(node.value, ast.Name) and node.value.id == "x"):
            raise ConfigurationError(f"only x[...] may be indexed: {src!r}")
        idx = node.slice
        if not (isinstance(idx, ast.Constant) and isinstance(idx.value, int)):
            raise ConfigurationError(f"x index must be an integer literal: {src!r}")
        if not 0 <= idx.value < dimension:
            raise ConfigurationError(
                f"x[{idx.value}] out of range for dimension {dimension}: {src!r}"
            )
    else:
        raise ConfigurationError(
            f"unsupported syntax ({type(node).__name__}) in expression: {src!r}"
        )


def compile_expression(src: str, dimension: int):
    """Compile an expression string into a callable of the point array."""
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ConfigurationError(f"cannot parse expression {src!r}: {exc}") from None
    _validate(tree, dimension, src)
    code = compile(tree, f"<expression {src!r}>", "eval")
    env = {"__builtins__": {}}
    env.update(_FUNCTIONS)
    env.update(_CONSTANTS)

    def evaluate(x):
        return float(eval(code, env, {"x": x}))

    return evaluate
