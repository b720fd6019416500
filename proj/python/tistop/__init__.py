"""Equilibrium stopping under non-exponential discounting.

Functions take a configuration as a dict (same layout as the CLI's JSON
config) and return plain Python objects.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    Error,
    InadmissibleRegion,
    NoBracket,
    NotBoundaryPoint,
    OpenPieceError,
    ParameterError,
    SolverError,
)

__version__ = _core.__version__


def _doc(config):
    return config if isinstance(config, str) else _json.dumps(config)


def classify(config, overrides=()):
    """Equilibrium report (dict) for the configured region."""
    return _json.loads(_core.classify(_doc(config), list(overrides)))


def values(config, xs):
    """J(x, S) for each x."""
    return _core.values(_doc(config), [float(x) for x in xs])


def solve_threshold(config, overrides=()):
    return _json.loads(_core.solve_threshold(_doc(config), list(overrides)))


def reproduce(example, mc=False, paths=100000, seed=20240601):
    """Run one of the worked examples ("ex61", "ex62", "ex63")."""
    return _json.loads(_core.reproduce(example, mc, paths, seed))


def describe(config):
    return _json.loads(_core.describe(_doc(config)))


__all__ = [
    "classify", "values", "solve_threshold", "reproduce", "describe",
    "Error", "ConfigError", "DomainError", "InadmissibleRegion", "NoBracket",
    "NotBoundaryPoint", "OpenPieceError", "ParameterError", "SolverError",
]
