"""Numerical checks for annealed Brownian motion in a heavy-tailed Poissonian potential."""

import json

from ._fklab import (
    ConfigError,
    __version__,
    constants,
    ground_state,
    ids,
    log_laplace,
    log_mgf,
    scenarios,
)
from ._fklab import run_scenario as _run_scenario


def run_scenario(name, out_dir="", **settings):
    """Run a scenario; returns the record as a dict."""
    return json.loads(_run_scenario(name, settings, out_dir))


__all__ = [
    "ConfigError",
    "__version__",
    "constants",
    "ground_state",
    "ids",
    "log_laplace",
    "log_mgf",
    "run_scenario",
    "scenarios",
]
