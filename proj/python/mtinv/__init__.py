"""Volume-fraction recovery for dielectric composites."""

import json

from ._mtinv import (
    VACUUM_PERMITTIVITY,
    DegenerateScale,
    EmptyMinimizerSet,
    Error,
    InfeasibleMeasurement,
    NonPositiveFrequency,
    NumericalFailure,
    SingularDenominator,
    SingularSensitivity,
    ValidationError,
    depolarization_q,
    error_bound,
    forward,
    invert,
    invert_single,
    ordered_edges,
    ordered_simplex_minimizers,
    ordered_vertices,
    permittivities,
    pq,
    sensitivity,
    simplex_minimizers,
    solve_lp,
    tangent_basis,
)
from ._mtinv import run_campaign as _run_campaign


def run_campaign(system, m_values, samples=1000, noise=0.1, seed=42, workers=0):
    """Monte Carlo campaign; returns (list of per-m aggregates, CSV text)."""
    summary, csv = _run_campaign(system, list(m_values), samples, noise, seed, workers)
    return json.loads(summary), csv


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
