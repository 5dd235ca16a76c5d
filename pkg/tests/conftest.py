"""Shared oracle helpers for the test suite.

Tests check the package against scipy.integrate.quad and closed forms;
the library itself never uses scipy, so the two routes stay independent.
"""

from __future__ import annotations

from scipy.integrate import quad as scipy_quad


def oracle_quad(f, a, b, points=None) -> float:
    """High-accuracy reference integral, independent of the package engine."""
    value, _ = scipy_quad(
        f, a, b, epsabs=1e-13, epsrel=1e-13, limit=500, points=points
    )
    return value
