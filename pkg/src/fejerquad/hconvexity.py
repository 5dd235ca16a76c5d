"""Sampling-based falsifier for h-convexity of a nonnegative function.

The check enumerates grid triples (x, y, lambda) and tests
phi(l*x + (1-l)*y) <= h(l)*phi(x) + h(1-l)*phi(y) up to a scale-aware
tolerance.  Zero violations means "not refuted at this grid resolution",
never a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonnegativityError
from .kernel import HKernel, kernel_value

__all__ = ["Violation", "ConvexityReport", "check_h_convex"]

_NOTE = "zero violations means not refuted at this grid resolution, not a proof"


@dataclass(frozen=True)
class Violation:
    x: float
    y: float
    lam: float
    lhs: float
    rhs: float

    @property
    def excess(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "lambda": self.lam,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "excess": self.excess,
        }


@dataclass(frozen=True)
class ConvexityReport:
    checked_triples: int
    violations: tuple
    max_violation: float
    grid: int
    hc_tol: float

    @property
    def refuted(self) -> bool:
        return bool(self.violations)

    def to_dict(self, max_listed: int = 20) -> dict:
        worst = sorted(self.violations, key=lambda v: -v.excess)[:max_listed]
        return {
            "checked_triples": self.checked_triples,
            "violation_count": len(self.violations),
            "violations": [v.to_dict() for v in worst],
            "max_violation": self.max_violation,
            "grid": self.grid,
            "hc_tol": self.hc_tol,
            "refuted": self.refuted,
            "note": _NOTE,
        }


def check_h_convex(
    phi: Callable[[float], float],
    h: HKernel,
    a: float,
    b: float,
    grid: int = 21,
    hc_tol: float | None = None,
) -> ConvexityReport:
    """Test phi for h-convexity on [a, b] over all grid triples.

    x and y run over a closed uniform grid; lambda over the open grid
    i/(grid+1) so kernels singular at 0 (power with k < 0) stay finite.
    Raises NonnegativityError when phi dips below -1e-12 on the grid,
    since h-convexity is defined for nonnegative functions.
    """
    if grid < 3:
        raise ValueError("grid must be at least 3")
    xs = np.linspace(a, b, grid)
    phis = np.array([phi(x) for x in xs])
    worst_neg = float(np.min(phis))
    if worst_neg < -1e-12:
        raise NonnegativityError(
            f"function takes negative value {worst_neg!r} on the grid"
        )
    if hc_tol is None:
        hc_tol = 1e-9 * (1.0 + float(np.max(np.abs(phis))))

    lams = [i / (grid + 1) for i in range(1, grid + 1)]
    h_lam = [kernel_value(h, lam) for lam in lams]
    h_coline = [kernel_value(h, 1.0 - lam) for lam in lams]

    violations = []
    checked = 0
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            px, py = phis[i], phis[j]
            for lam, hl, hc in zip(lams, h_lam, h_coline):
                checked += 1
                lhs = phi(lam * x + (1.0 - lam) * y)
                rhs = hl * px + hc * py
                if lhs > rhs + hc_tol:
                    violations.append(
                        Violation(float(x), float(y), lam, float(lhs), float(rhs))
                    )
    max_violation = max((v.excess for v in violations), default=0.0)
    return ConvexityReport(
        checked_triples=checked,
        violations=tuple(violations),
        max_violation=max_violation,
        grid=grid,
        hc_tol=hc_tol,
    )
