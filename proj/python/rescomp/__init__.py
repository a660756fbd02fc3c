"""Python access to the rescomp scenario runner and divergence engines."""

import json

import numpy as np

from ._rescomp import NumericalError, SchemaError
from . import _rescomp

__all__ = [
    "NumericalError",
    "SchemaError",
    "builtin_scenario",
    "builtin_scenarios",
    "dmax",
    "hypothesis_testing",
    "relative_entropy",
    "run_scenario",
    "schema",
    "validate",
    "version",
]

version = _rescomp.version
builtin_scenarios = _rescomp.builtin_scenarios


def builtin_scenario(name):
    return json.loads(_rescomp.builtin_scenario(name))


def schema():
    return json.loads(_rescomp.schema())


def validate(scenario):
    """Raise SchemaError if the scenario document is malformed."""
    _rescomp.validate(json.dumps(scenario))


def run_scenario(scenario, seed=None, gap=None):
    """Run a scenario given as a dict or a built-in name; returns the report dict."""
    if isinstance(scenario, str):
        scenario = builtin_scenario(scenario)
    return json.loads(_rescomp.run(json.dumps(scenario), seed, gap))


def _divergence(quantity, rho, free_set, epsilon=0.1):
    rho = np.asarray(rho, dtype=np.complex128)
    return json.loads(_rescomp.divergence(quantity, rho, json.dumps(free_set), epsilon))


def relative_entropy(rho, free_set):
    return _divergence("relative_entropy", rho, free_set)


def dmax(rho, free_set):
    return _divergence("dmax", rho, free_set)


def hypothesis_testing(rho, free_set, epsilon):
    return _divergence("hypothesis", rho, free_set, epsilon)
