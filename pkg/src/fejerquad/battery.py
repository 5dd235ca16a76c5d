"""Built-in regression battery: every headline identity and bound.

Each case recomputes a quantity from the library and checks it against a
frozen closed-form value or a stated tolerance.  The CLI ``battery``
command runs the full list and exits nonzero if anything fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .applications import (
    DensitySpec,
    MeanParams,
    lambda_moment,
    means_bound_check,
    means_corollary_bound,
    moment_bound_check,
)
from .bounds import (
    DerivBounds,
    LipschitzConstant,
    bound_bounded_derivative,
    bound_convex_left,
    bound_convex_right,
    bound_h_convex,
    bound_h_convex_mirror,
    bound_lipschitz,
    bound_s_convex,
    fejer_triple,
)
from .fejer import (
    ProblemSpec,
    identity_defect,
    m_abs_integral,
    m_antisymmetry_defect,
    m_bound_holder,
    m_bound_sup,
    m_sign_violation,
    m_symmetric_form,
    m_value,
    make_problem,
    mirrored_identity_defect,
)
from .hconvexity import check_h_convex
from .kernel import HKernel
from .quadrature import (
    adaptive_refine,
    error_bound_power,
    run_quadrature,
    uniform_partition,
)

__all__ = ["BatteryCase", "BatterySummary", "battery_cases", "run_battery"]

_PI = repr(math.pi)


@dataclass(frozen=True)
class BatteryCase:
    name: str
    passed: bool
    detail: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class BatterySummary:
    cases: tuple
    total: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "failures": self.failures,
            "passed": self.passed,
            "cases": [c.to_dict() for c in self.cases],
        }


def _clipped_cos(a: float, b: float) -> str:
    m = repr(0.5 * (a + b))
    return f"(cos({_PI}*(x-{m}))+abs(cos({_PI}*(x-{m}))))/2"


def _case(name: str, passed: bool, **detail) -> BatteryCase:
    return BatteryCase(name=name, passed=bool(passed), detail=detail)


def _lemma_cases(p: ProblemSpec, tag: str) -> list:
    cases = []
    agree = max(
        abs(m_value(p, i / 100) - m_symmetric_form(p, i / 100)) for i in range(101)
    )
    cases.append(_case(f"lemma_agreement_{tag}", agree <= 1e-8, defect=agree))
    anti = m_antisymmetry_defect(p)
    cases.append(_case(f"lemma_antisymmetry_{tag}", anti <= 1e-8, defect=anti))
    sign = m_sign_violation(p)
    cases.append(_case(f"lemma_sign_{tag}", sign <= 1e-10, violation=sign))
    absint = m_abs_integral(p)
    sup = m_bound_sup(p, measured=absint)
    hol = m_bound_holder(p, (2.0, 2.0), measured=absint)
    cases.append(
        _case(
            f"lemma_sup_bound_{tag}",
            sup.slack >= -1e-8,
            measured=sup.measured,
            bound=sup.bound,
        )
    )
    cases.append(
        _case(
            f"lemma_holder_bound_{tag}",
            hol.slack >= -1e-8,
            measured=hol.measured,
            bound=hol.bound,
        )
    )
    return cases


def _identity_cases() -> list:
    cases = []
    combos = [
        ("x^2", "2*x", "1", 0.0, 1.0),
        ("x^3", "3*x^2", "1", 0.0, 1.0),
        ("exp(x)", "exp(x)", "x*(1-x)", 0.0, 1.0),
        ("exp(x)", "exp(x)", "1", 0.0, 2.0),
    ]
    for fsrc, fpsrc, gsrc, a, b in combos:
        p = make_problem(fsrc, fpsrc, gsrc, a, b)
        d = identity_defect(p)
        md = mirrored_identity_defect(p)
        tag = f"{fsrc}_{gsrc}".replace("*", "").replace("(", "").replace(")", "")
        cases.append(_case(f"identity_{tag}", d <= 1e-7, defect=d))
        cases.append(_case(f"identity_mirrored_{tag}", md <= 1e-7, defect=md))
    return cases


# (f, f', g, a, b, kernel) with |f'| h-convex for the matching kernel
def _dominance_combos() -> list:
    return [
        ("x^2", "2*x", "1", 0.0, 1.0, HKernel.power(1.0)),
        ("x^2", "2*x", "x*(1-x)", 0.0, 1.0, HKernel.power(1.0)),
        ("x^3", "3*x^2", "1", 0.0, 1.0, HKernel.power(1.0)),
        ("x^3", "3*x^2", "6*x*(1-x)", 0.0, 1.0, HKernel.power(1.0)),
        ("exp(x)", "exp(x)", "1", 0.0, 2.0, HKernel.power(1.0)),
        ("exp(x)", "exp(x)", "x*(2-x)", 0.0, 2.0, HKernel.power(1.0)),
        ("exp(x)", "exp(x)", _clipped_cos(0.0, 2.0), 0.0, 2.0, HKernel.power(1.0)),
        ("x^2", "2*x", "1", -1.0, 1.0, HKernel.power(1.0)),
        ("(2/3)*x^1.5", "sqrt(x)", "1", 0.0, 1.0, HKernel.power(0.5)),
        ("(2/3)*x^1.5", "sqrt(x)", "6*x*(1-x)", 0.0, 1.0, HKernel.power(0.5)),
        ("(4/7)*x^1.75", "x^0.75", "1", 0.0, 1.0, HKernel.power(0.75)),
        ("0.8*x^1.25", "x^0.25", "1", 0.0, 1.0, HKernel.power(0.25)),
        ("x^2", "2*x", "1", 0.0, 1.0, HKernel.constant(1.0)),
    ]


def _dominance_cases() -> list:
    cases = []
    for i, (fsrc, fpsrc, gsrc, a, b, h) in enumerate(_dominance_combos()):
        p = make_problem(fsrc, fpsrc, gsrc, a, b)
        convexity = check_h_convex(lambda x: abs(p.fprime_value(x)), h, a, b, grid=21)
        direct = bound_h_convex(p, h, check_hypotheses=False)
        mirror = bound_h_convex_mirror(p, h, check_hypotheses=False)
        ok = (
            not convexity.refuted
            and direct.slack >= -1e-8
            and abs(direct.bound - mirror.bound) <= 1e-8
        )
        cases.append(
            _case(
                f"dominance_{i:02d}_{h.describe().replace(':', '')}",
                ok,
                f=fsrc,
                g=gsrc,
                measured=direct.measured,
                bound=direct.bound,
                mirror_bound=mirror.bound,
                hconvex_refuted=convexity.refuted,
            )
        )
    return cases


def _consistency_cases() -> list:
    cases = []
    p = make_problem("x^2", "2*x", "1", 0.0, 1.0)
    conv = bound_convex_left(p, check_hypotheses=False)
    ok = abs(conv.bound - 0.25) <= 1e-12 and abs(conv.measured - 1.0 / 6.0) <= 1e-9
    cases.append(
        _case("convex_recapture_eighth", ok, measured=conv.measured, bound=conv.bound)
    )
    right = bound_convex_right(p, check_hypotheses=False)
    cases.append(
        _case(
            "convex_left_right_equal",
            abs(conv.bound - right.bound) <= 1e-9,
            left=conv.bound,
            right=right.bound,
        )
    )
    worst = 0.0
    for s in (0.25, 0.5, 0.75, 1.0):
        rs = bound_s_convex(p, s, check_hypotheses=False)
        rh = bound_h_convex(p, HKernel.power(s), check_hypotheses=False)
        worst = max(worst, abs(rs.bound - rh.bound))
    cases.append(_case("s_convex_matches_power_kernel", worst <= 1e-9, worst=worst))
    rh1 = bound_h_convex(p, HKernel.power(1.0), check_hypotheses=False)
    cases.append(
        _case(
            "power1_matches_convex",
            abs(rh1.bound - conv.bound) <= 1e-9,
            power1=rh1.bound,
            convex=conv.bound,
        )
    )
    p2 = make_problem("(2/3)*x^1.5", "sqrt(x)", "1", 0.0, 1.0)
    r2 = bound_h_convex(p2, HKernel.power(0.5), check_hypotheses=False)
    ok = abs(r2.measured - 1.0 / 15.0) <= 1e-8 and abs(r2.bound - 0.16094757082487299) <= 1e-8
    cases.append(
        _case("s_convex_worked_case", ok, measured=r2.measured, bound=r2.bound)
    )
    db = bound_bounded_derivative(p, DerivBounds(0.0, 2.0))
    cases.append(
        _case(
            "bounded_derivative_square",
            db.primary.satisfied
            and abs(db.primary.measured - 1.0 / 6.0) <= 1e-8
            and abs(db.primary.bound - 0.25) <= 1e-8,
            measured=db.primary.measured,
            bound=db.primary.bound,
        )
    )
    lb = bound_lipschitz(p, LipschitzConstant(2.0))
    cases.append(
        _case(
            "lipschitz_square_equality",
            abs(lb.primary.bound - 1.0 / 6.0) <= 1e-8
            and abs(lb.sup_form.bound - 1.0 / 6.0) <= 1e-9,
            primary=lb.primary.bound,
            sup_form=lb.sup_form.bound,
        )
    )
    return cases


def _triple_cases() -> list:
    cases = []
    p = make_problem("x^2", "2*x", "1", 0.0, 1.0)
    t = fejer_triple(p)
    ok = (
        t.left_satisfied
        and t.right_satisfied
        and abs(t.lhs - 0.25) <= 1e-9
        and abs(t.mid - 1.0 / 3.0) <= 1e-9
        and abs(t.rhs - 0.5) <= 1e-9
    )
    cases.append(_case("triple_square_uniform", ok, lhs=t.lhs, mid=t.mid, rhs=t.rhs))
    p2 = make_problem("x^2", "2*x", "6*x*(1-x)", 0.0, 1.0)
    t2 = fejer_triple(p2)
    ok = (
        t2.left_satisfied
        and t2.right_satisfied
        and abs(t2.mid - 0.3) <= 1e-9
    )
    cases.append(_case("triple_square_bump", ok, lhs=t2.lhs, mid=t2.mid, rhs=t2.rhs))
    return cases


def _means_cases() -> list:
    cases = []
    r = means_bound_check(MeanParams(1.0, 2.0, 2.0, 1.0))
    cases.append(
        _case(
            "means_n2_k1",
            r.satisfied and abs(r.measured - 1.0 / 6.0) <= 1e-12 and abs(r.bound - 0.75) <= 1e-12,
            measured=r.measured,
            bound=r.bound,
        )
    )
    r = means_bound_check(MeanParams(1.0, 2.0, 3.0, 1.0))
    corollary = means_corollary_bound(1.0, 2.0, 3.0)
    cases.append(
        _case(
            "means_n3_k1_corollary",
            r.satisfied
            and abs(r.measured - 0.75) <= 1e-12
            and abs(r.bound - 1.875) <= 1e-12
            and abs(r.bound - corollary) <= 1e-12,
            measured=r.measured,
            bound=r.bound,
            corollary=corollary,
        )
    )
    r = means_bound_check(MeanParams(1.0, 2.0, 2.0, 0.5))
    cases.append(
        _case(
            "means_n2_khalf",
            r.satisfied and abs(r.bound - 0.965685424949238) <= 1e-12,
            measured=r.measured,
            bound=r.bound,
        )
    )
    return cases


def _moment_cases() -> list:
    cases = []
    d = DensitySpec.create("6*(x-1)*(2-x)", 1.0, 2.0)
    r = moment_bound_check(d, "x", "1", HKernel.power(1.0))
    cases.append(
        _case(
            "moment_bump_mean",
            r.satisfied and abs(r.measured) <= 1e-9 and abs(r.bound - 0.5) <= 1e-12,
            measured=r.measured,
            bound=r.bound,
        )
    )
    du = DensitySpec.create("1", 1.0, 2.0)
    r = moment_bound_check(du, "x", "1", HKernel.power(0.0))
    cases.append(
        _case(
            "moment_uniform_k0",
            r.satisfied and abs(r.bound - 1.0) <= 1e-12,
            measured=r.measured,
            bound=r.bound,
        )
    )
    e2 = lambda_moment(du, 2.0)
    cases.append(
        _case("moment_uniform_second", abs(e2 - 7.0 / 3.0) <= 1e-9, value=e2)
    )
    r = moment_bound_check(du, "x^2/2", "x", HKernel.power(1.0))
    cases.append(
        _case(
            "moment_uniform_power2",
            r.satisfied
            and abs(r.measured - 1.0 / 12.0) <= 1e-9
            and abs(r.bound - 0.75) <= 1e-12,
            measured=r.measured,
            bound=r.bound,
        )
    )
    return cases


def _quadrature_cases() -> list:
    cases = []
    pe = make_problem("exp(x)", "exp(x)", "1", 0.0, 2.0)
    h1 = HKernel.power(1.0)
    bounds = {}
    for n in (2, 4, 8, 16):
        qr = run_quadrature(pe, h1, uniform_partition(0.0, 2.0, n))
        bounds[n] = qr.error_bound
        cases.append(
            _case(
                f"certificate_exp_n{n}",
                qr.actual_error <= qr.error_bound + 1e-8,
                value=qr.value,
                error_bound=qr.error_bound,
                actual_error=qr.actual_error,
            )
        )
    ratios = [bounds[2] / bounds[4], bounds[4] / bounds[8], bounds[8] / bounds[16]]
    cases.append(
        _case(
            "certificate_exp_halving",
            all(abs(r - 2.0) <= 0.2 for r in ratios),
            ratios=ratios,
        )
    )
    # classical (1/8) sum dx^2 (|f'|+|f'|) specialization
    P = uniform_partition(0.0, 2.0, 4)
    power_bound = error_bound_power(pe, 1.0, P)
    classical = sum(
        (hi - lo) ** 2 * (abs(math.exp(lo)) + abs(math.exp(hi))) / 8.0
        for lo, hi in P.intervals
    )
    cases.append(
        _case(
            "classical_specialization",
            abs(power_bound - classical) <= 1e-12,
            power_form=power_bound,
            classical=classical,
        )
    )
    p = make_problem("x^2", "2*x", "1", 0.0, 1.0)
    rr = adaptive_refine(p, h1, tol=0.13)
    cases.append(
        _case(
            "adaptive_refine_square",
            rr.converged and len(rr.partition) <= 2 and rr.error_bound <= 0.13,
            intervals=len(rr.partition),
            error_bound=rr.error_bound,
        )
    )
    return cases


def _checker_cases() -> list:
    cases = []
    r = check_h_convex(lambda x: x * x, HKernel.power(1.0), 0.0, 1.0, grid=21)
    cases.append(_case("hconvex_square_convex", not r.refuted, violations=len(r.violations)))
    r = check_h_convex(math.sqrt, HKernel.power(0.5), 0.0, 1.0, grid=21)
    cases.append(_case("hconvex_sqrt_half", not r.refuted, violations=len(r.violations)))
    r = check_h_convex(math.sqrt, HKernel.power(1.0), 0.0, 1.0, grid=21)
    cases.append(
        _case(
            "hconvex_sqrt_not_convex",
            r.refuted and r.max_violation > 0.1,
            violations=len(r.violations),
            max_violation=r.max_violation,
        )
    )
    return cases


def battery_cases() -> list:
    """Build and evaluate every battery case."""
    cases = []
    for tag, gsrc, a, b in (
        ("uniform", "1", 0.0, 1.0),
        ("bump", "x*(1-x)", 0.0, 1.0),
        ("clipped_cos", _clipped_cos(-1.0, 2.0), -1.0, 2.0),
    ):
        cases.extend(_lemma_cases(make_problem("x^2", "2*x", gsrc, a, b), tag))
    cases.extend(_identity_cases())
    cases.extend(_dominance_cases())
    cases.extend(_consistency_cases())
    cases.extend(_triple_cases())
    cases.extend(_means_cases())
    cases.extend(_moment_cases())
    cases.extend(_quadrature_cases())
    cases.extend(_checker_cases())
    return cases


def run_battery(cases: list | None = None) -> BatterySummary:
    """Run the battery; ``cases`` overrides the default list (for testing)."""
    if cases is None:
        cases = battery_cases()
    failures = sum(1 for c in cases if not c.passed)
    return BatterySummary(cases=tuple(cases), total=len(cases), failures=failures)
