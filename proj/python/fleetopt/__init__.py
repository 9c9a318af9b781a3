"""Python access to the fleetopt core."""

import json
from fractions import Fraction

from . import _core
from ._core import CompileError, ParseError, digest, export_model, generate, run_cli, simplify

__all__ = [
    "CompileError",
    "ParseError",
    "digest",
    "export_model",
    "generate",
    "max_coverage",
    "min_fleet",
    "run_cli",
    "simplify",
    "solve",
]


def solve(text, mode="greedy", n_bunch=1, backend="exact", seed=0, time_limit_ms=5000):
    """Solve an instance given as text; returns the fleet as a dict."""
    return json.loads(_core.solve(text, mode, n_bunch, backend, seed, time_limit_ms))


def min_fleet(text, cap=8):
    """Brute-force minimum fleet size, or None above cap."""
    return _core.oracle_min_fleet(text, cap)


def max_coverage(text, n):
    """Brute-force best weighted coverage with n vehicles."""
    return Fraction(_core.oracle_max_coverage(text, n))
