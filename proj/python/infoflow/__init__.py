"""Trace-distance non-Markovianity of open quantum systems.

Thin wrappers over the native module. Configs are plain dicts with the same
layout as the CLI's JSON files.
"""

import csv
import io
import json

from ._core import (
    ConfigError,
    NumericalError,
    __version__,
    dephasing_coherence,
    hilbert_schmidt_distance,
    jc_amplitude,
    jc_map,
    jc_rates,
    lambda_rates,
    relative_entropy,
    run_cli,
    trace_distance,
)
from . import _core

__all__ = [
    "ConfigError",
    "NumericalError",
    "__version__",
    "dephasing_coherence",
    "hilbert_schmidt_distance",
    "jc_amplitude",
    "jc_map",
    "jc_rates",
    "lambda_rates",
    "measure",
    "relative_entropy",
    "resolve_config",
    "run_cli",
    "sweep",
    "trace_distance",
    "trajectory",
]


def resolve_config(config=None):
    return json.loads(_core.resolve_config(json.dumps(config or {})))


def _table(text):
    lines = [line for line in text.splitlines() if not line.startswith("# ")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    return [{k: (float(v) if v != "" else None) for k, v in row.items()} for row in rows]


def trajectory(config=None):
    """Rows of t, D, sigma, growth_flag for config["pair"]."""
    return _table(_core.trajectory_csv(json.dumps(config or {})))


def measure(config=None, threads=1):
    """The measure document as a dict."""
    return json.loads(_core.measure_json(json.dumps(config or {}), threads))


def sweep(config, threads=1):
    """Rows of sweep_value, N_best, N_candidate_i."""
    return _table(_core.sweep_csv(json.dumps(config), threads))
