"""Greedy approximation experiments in quasi-Banach sequence spaces.

Spaces and vectors are plain dicts/lists in the same JSON shape the CLI uses.
"""

import csv
import io
import json

from . import _core
from ._core import ConfigError, NumericGuard, set_threads, preset_names

__all__ = [
    "ConfigError", "NumericGuard", "set_threads", "preset_names",
    "quasi_norm", "greedy_set", "greedy_approximation", "restricted_truncation",
    "phi_upper", "phi_lower", "mu", "fit_power_log",
    "hyperbolic_norm", "disjoint_norm", "marriage", "run_experiment",
]


def _dump(x):
    return x if isinstance(x, str) else json.dumps(x)


def quasi_norm(space, f):
    return _core.quasi_norm(_dump(space), _dump(f))


def greedy_set(f, m):
    return _core.greedy_set(_dump(f), m)


def greedy_approximation(f, m):
    return json.loads(_core.greedy_approximation(_dump(f), m))


def restricted_truncation(f, m):
    return json.loads(_core.restricted_truncation(_dump(f), m))


def phi_upper(space, m, strategy="auto", ambient=0, seed=0):
    return _core.phi_upper(_dump(space), m, strategy, ambient, seed)


def phi_lower(space, m, strategy="auto", ambient=0, seed=0):
    return _core.phi_lower(_dump(space), m, strategy, ambient, seed)


def mu(space, m, ambient=0, seed=0):
    return _core.mu(_dump(space), m, ambient, seed)


def fit_power_log(ms, values):
    return json.loads(_core.fit_power_log(list(ms), list(values)))


def hyperbolic_norm(k, d, p):
    return _core.hyperbolic_norm(k, d, p)


def disjoint_norm(count, d, level, p):
    return _core.disjoint_norm(count, d, level, p)


def marriage(sets, K):
    return json.loads(_core.marriage(sets, K))


def run_experiment(config):
    """Runs a preset/config and returns (csv_text, rows as dicts)."""
    text = _core.run_experiment(_dump(config))
    return text, list(csv.DictReader(io.StringIO(text)))
