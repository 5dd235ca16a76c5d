"""Kernels h on [0, 1] for h-convexity and their cumulative sums.

The quantity that appears in every trapezoid bound is
``S(u) = integral of [h(t) + h(1-t)] over t in [0, u]``.  Power and
constant kernels use closed forms; custom kernels fall back to the
adaptive engine, which never samples the (possibly singular) endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import (
    DomainError,
    KernelValidationError,
    NonIntegrableKernelError,
)
from .expr import Expression, parse
from .integrate import QuadratureSettings, integrate

__all__ = [
    "HKernel",
    "kernel_value",
    "kernel_sum_cumulative",
    "kernel_sum_fn",
    "half_interval_kernel_integral",
]

_VALIDATION_GRID = 1001  # open grid on (0, 1)


@dataclass(frozen=True)
class HKernel:
    """Kernel h for the h-convexity inequality f(lx+(1-l)y) <= h(l)f(x)+h(1-l)f(y).

    Variants: ``power`` is h(t) = t^k, ``constant`` is h(t) = c, and
    ``custom`` evaluates an expression in t.  Construction validates
    h >= 0 and h not identically zero on an open sample grid.  Power
    kernels with k <= -1 (Godunova-Levin and beyond) are representable
    but rejected by cumulative-sum computations, where they diverge.
    """

    kind: str
    k: float | None = None
    c: float | None = None
    expr: Expression | None = None

    @staticmethod
    def power(k: float) -> "HKernel":
        return HKernel(kind="power", k=float(k))

    @staticmethod
    def constant(c: float) -> "HKernel":
        if c <= 0.0:
            raise KernelValidationError(
                "constant kernel must be positive (h >= 0 and h not identically 0)"
            )
        return HKernel(kind="constant", c=float(c))

    @staticmethod
    def custom(expr: Expression | str) -> "HKernel":
        if isinstance(expr, str):
            expr = parse(expr)
        positive = False
        for i in range(_VALIDATION_GRID):
            t = (i + 1) / (_VALIDATION_GRID + 1)
            v = expr(t)
            if v < -1e-12:
                raise KernelValidationError(
                    f"kernel takes negative value {v!r} at t={t!r}"
                )
            if v > 0.0:
                positive = True
        if not positive:
            raise KernelValidationError("kernel is identically zero on the sample grid")
        return HKernel(kind="custom", expr=expr)

    @staticmethod
    def from_spec(spec: dict) -> "HKernel":
        """Build from the JSON form {"kind": "power", "k": 0.5} etc."""
        kind = spec.get("kind")
        if kind == "power":
            return HKernel.power(spec["k"])
        if kind == "constant":
            return HKernel.constant(spec["c"])
        if kind == "custom":
            return HKernel.custom(spec["expr"])
        raise KernelValidationError(f"unknown kernel kind {kind!r}")

    def to_spec(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "k": self.k}
        if self.kind == "constant":
            return {"kind": "constant", "c": self.c}
        return {"kind": "custom", "expr": self.expr.source}

    def describe(self) -> str:
        if self.kind == "power":
            return f"power:{self.k!r}"
        if self.kind == "constant":
            return f"constant:{self.c!r}"
        return f"custom:{self.expr.source}"


def kernel_value(h: HKernel, t: float) -> float:
    """h(t) for t in (0, 1); endpoints allowed only where h stays finite."""
    if h.kind == "power":
        if t == 0.0 and h.k < 0.0:
            raise DomainError(f"t^{h.k!r}", t, "power kernel singular at t=0")
        return float(t) ** h.k
    if h.kind == "constant":
        return h.c
    return h.expr(t)


def _require_integrable(h: HKernel):
    if h.kind == "power" and h.k <= -1.0:
        raise NonIntegrableKernelError(
            f"power kernel with k={h.k!r} is not integrable on (0, 1)"
        )


def kernel_sum_cumulative(
    h: HKernel, u: float, settings: QuadratureSettings | None = None
) -> float:
    """S(u) = integral over [0, u] of h(t) + h(1 - t)."""
    if not -1e-12 <= u <= 1.0 + 1e-12:
        raise ValueError(f"u must lie in [0, 1], got {u!r}")
    u = min(max(u, 0.0), 1.0)
    _require_integrable(h)
    if h.kind == "power":
        kp1 = h.k + 1.0
        return (u**kp1 + 1.0 - (1.0 - u) ** kp1) / kp1
    if h.kind == "constant":
        return 2.0 * h.c * u
    if u == 0.0:
        return 0.0
    e = h.expr
    return integrate(lambda t: e(t) + e(1.0 - t), 0.0, u, settings)


def kernel_sum_fn(
    h: HKernel, settings: QuadratureSettings | None = None
) -> Callable[[float], float]:
    """S as a callable, with the integrability check done once up front."""
    _require_integrable(h)
    if h.kind == "power":
        kp1 = h.k + 1.0
        return lambda u: (u**kp1 + 1.0 - (1.0 - u) ** kp1) / kp1
    if h.kind == "constant":
        c2 = 2.0 * h.c
        return lambda u: c2 * u
    return lambda u: kernel_sum_cumulative(h, u, settings)


def half_interval_kernel_integral(
    h: HKernel, settings: QuadratureSettings | None = None
) -> float:
    """S(1/2); equals 1/(k+1) for power kernels."""
    return kernel_sum_cumulative(h, 0.5, settings)
