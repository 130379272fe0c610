"""Lindblad and Kraus dynamics with decay-rate positivity checks."""

import json as _json

import numpy as _np

from ._opensys import (
    Error,
    SpecError,
    amplitude_damping,
    apply_kraus,
    builtin_scenario_names,
    check_state,
    compose_kraus,
    devectorize,
    dissipator_from_rates,
    eigvals,
    generator_spectrum,
    hamiltonian_superop,
    is_invertible_element,
    kraus_to_superop,
    kron,
    lindblad_superop,
    mat_exp,
    propagate,
    two_level_analytic,
    two_level_det,
    two_level_exact_det,
    two_level_hamiltonian,
    validate_kraus,
    vectorize,
)
from . import _opensys

__all__ = [name for name in dir() if not name.startswith("_")] + [
    "check_two_level",
    "check_n_level",
    "builtin_scenario",
    "run_scenario",
    "series_to_csv",
    "series_states",
]


def check_two_level(gamma12, gamma21, Gamma):
    """Constraint report for a two-level rate set, as a dict."""
    return _json.loads(_opensys._check_two_level(gamma12, gamma21, Gamma))


def check_n_level(gamma, Gamma, tol=1e-10):
    """Constraint report for rate tables gamma[n][k] (k -> n) and symmetric Gamma."""
    return _json.loads(_opensys._check_n_level(gamma, Gamma, tol))


def builtin_scenario(name):
    """Built-in scenario spec as a dict."""
    return _json.loads(_opensys._builtin_scenario(name))


def run_scenario(spec, tol=1e-9, threads=1):
    """Run a scenario given as a dict, JSON text or built-in name; returns the time series dict."""
    if isinstance(spec, str) and not spec.lstrip().startswith("{"):
        spec = _opensys._builtin_scenario(spec)
    elif not isinstance(spec, str):
        spec = _json.dumps(spec)
    return _json.loads(_opensys._run_scenario(spec, tol, threads))


def series_to_csv(series):
    return _opensys.scenario_csv(_json.dumps(series))


def series_states(series):
    """Stack the density matrices of a time series into an (T, N, N) complex array."""
    states = [_np.asarray(r["re"]) + 1j * _np.asarray(r["im"]) for r in series["records"]]
    n = series["dim"]
    return _np.asarray(states).reshape(len(states), n, n)
