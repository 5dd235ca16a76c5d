import math

import numpy as np
import pytest

from conftest import oracle_quad
from fejerquad.errors import (
    ConjugateExponentError,
    NonnegativityError,
    SymmetryViolationError,
)
from fejerquad.fejer import (
    BoundReport,
    identity_defect,
    m_abs_integral,
    m_antisymmetry_defect,
    m_bound_holder,
    m_bound_sup,
    m_integral,
    m_sign_violation,
    m_symmetric_form,
    m_value,
    make_problem,
    mirrored_identity_defect,
    trapezoid_gap,
)


def problem(f, fprime, g, a, b, **kw):
    return make_problem(f, fprime, g, a, b, **kw)


UNIFORM = problem("x^2", "2*x", "1", 0, 1)
BUMP = problem("x^2", "2*x", "x*(1-x)", 0, 1)
SLOPE = problem("x^2", "2*x", "x", 0, 1)  # not symmetric


class TestProblemValidation:
    def test_autodetect_flags(self):
        assert UNIFORM.g_symmetric and UNIFORM.g_nonnegative
        assert BUMP.g_symmetric and BUMP.g_nonnegative
        assert not SLOPE.g_symmetric and SLOPE.g_nonnegative

    def test_declared_symmetry_enforced(self):
        with pytest.raises(SymmetryViolationError):
            problem("x^2", "2*x", "x", 0, 1, g_symmetric=True)

    def test_declared_nonnegativity_enforced(self):
        with pytest.raises(NonnegativityError):
            problem("x^2", "2*x", "x-0.5", 0, 1, g_nonnegative=True)

    def test_interval_order(self):
        with pytest.raises(ValueError):
            problem("x^2", "2*x", "1", 1, 0)

    def test_numeric_derivative_fallback(self):
        p = problem("x^3", None, "1", 0, 1)
        assert p.fprime_value(0.5) == pytest.approx(0.75, abs=1e-8)


class TestMValue:
    def test_uniform_weight_closed_form(self):
        # M(t) = 1 - 2t for a unit weight on any interval
        assert m_value(UNIFORM, 0.25) == pytest.approx(0.5, abs=1e-10)

    def test_midpoint_forced_zero(self):
        for p in (UNIFORM, BUMP):
            assert m_value(p, 0.5) == pytest.approx(0.0, abs=1e-10)

    def test_bump_weight_at_zero(self):
        # M(0) = int_0^1 s(1-s) ds = 1/6
        assert m_value(BUMP, 0.0) == pytest.approx(1 / 6, abs=1e-10)

    def test_x_domain_oracle_cross_check(self):
        # M(t) = [int_a^u g - int_u^b g] / (b - a) with u = ta + (1-t)b
        p = problem("x^2", "2*x", "exp(-(x-1)^2)", 0, 2)
        for t in (0.1, 0.3, 0.5, 0.8):
            u = t * p.a + (1 - t) * p.b
            want = (
                oracle_quad(p.g, p.a, u) - oracle_quad(p.g, u, p.b)
            ) / (p.b - p.a)
            assert m_value(p, t) == pytest.approx(want, abs=1e-9)

    def test_t_range_checked(self):
        with pytest.raises(ValueError):
            m_value(UNIFORM, 1.2)


class TestSymmetricForm:
    def test_upper_branch(self):
        assert m_symmetric_form(UNIFORM, 0.25) == pytest.approx(0.5, abs=1e-10)

    def test_lower_branch(self):
        assert m_symmetric_form(UNIFORM, 0.75) == pytest.approx(-0.5, abs=1e-10)

    def test_midpoint_empty_integral(self):
        assert m_symmetric_form(BUMP, 0.5) == 0.0

    def test_requires_symmetry(self):
        with pytest.raises(SymmetryViolationError):
            m_symmetric_form(SLOPE, 0.25)

    def test_agreement_on_grid(self):
        for p in (UNIFORM, BUMP):
            for i in range(101):
                t = i / 100
                assert m_value(p, t) == pytest.approx(
                    m_symmetric_form(p, t), abs=1e-9
                )


class TestAntisymmetry:
    def test_uniform(self):
        assert m_antisymmetry_defect(UNIFORM) <= 1e-9

    def test_bump(self):
        assert m_antisymmetry_defect(BUMP) <= 1e-8

    def test_asymmetric_weight_reports_defect(self):
        # for g(x) = x on [0, 1]: M(t) + M(1-t) = 2t^2 - 2t, worst 0.5 at t = 1/2
        assert m_antisymmetry_defect(SLOPE) == pytest.approx(0.5, abs=1e-8)


class TestSignPattern:
    def test_holds_for_symmetric_nonnegative(self):
        for p in (UNIFORM, BUMP):
            assert m_sign_violation(p) <= 1e-10

    def test_requires_hypotheses(self):
        with pytest.raises(SymmetryViolationError):
            m_sign_violation(SLOPE)
        neg = problem("x^2", "2*x", "x*(1-x)-1", 0, 1)
        with pytest.raises(NonnegativityError):
            m_sign_violation(neg)


class TestAbsIntegral:
    def test_uniform(self):
        # int |1 - 2t| = 1/2
        assert m_abs_integral(UNIFORM) == pytest.approx(0.5, abs=1e-9)

    def test_bump_against_nested_oracle(self):
        # closed form M(t) = 1/6 - t^2 + 2t^3/3; the integral is 5/48
        want = oracle_quad(
            lambda t: abs(1 / 6 - t * t + 2 * t**3 / 3), 0, 1, points=[0.5]
        )
        got = m_abs_integral(BUMP)
        assert want == pytest.approx(5 / 48, abs=1e-12)
        assert got == pytest.approx(want, abs=1e-8)

    def test_zero_weight(self):
        zero = problem("x^2", "2*x", "0", 0, 1)
        assert m_abs_integral(zero) == 0.0

    def test_signed_integral_vanishes_for_symmetric(self):
        for p in (UNIFORM, BUMP):
            assert abs(m_integral(p)) <= 1e-9


class TestSupBound:
    def test_uniform_equality(self):
        r = m_bound_sup(UNIFORM)
        assert r.satisfied and r.measured == pytest.approx(0.5, abs=1e-9)
        assert r.bound == pytest.approx(0.5, abs=1e-12)

    def test_bump(self):
        r = m_bound_sup(BUMP)
        assert r.satisfied
        assert r.measured == pytest.approx(5 / 48, abs=1e-8)
        assert r.bound == pytest.approx(0.125, abs=1e-6)

    def test_scaled_uniform_equality(self):
        p = problem("x^2", "2*x", "5", 0, 1)
        r = m_bound_sup(p)
        assert r.measured == pytest.approx(2.5, abs=1e-8)
        assert r.bound == pytest.approx(2.5, abs=1e-12)
        assert r.satisfied

    def test_precomputed_measured_reused(self):
        r = m_bound_sup(UNIFORM, measured=0.5)
        assert r.measured == 0.5

    def test_requires_hypotheses(self):
        with pytest.raises(SymmetryViolationError):
            m_bound_sup(SLOPE)


class TestHolderBound:
    def test_uniform_p2(self):
        r = m_bound_holder(UNIFORM, (2.0, 2.0))
        # 2 * 1 * sqrt(1/2) * 2/3 = 0.9428090415820634
        assert r.bound == pytest.approx(0.9428090415820634, abs=1e-10)
        assert r.measured == pytest.approx(0.5, abs=1e-9)
        assert r.satisfied

    def test_weight_factor_closed_form_oracle(self):
        # int_0^1 |t - 1/2|^(1/2) dt = sqrt(2)/3
        want = oracle_quad(lambda t: abs(t - 0.5) ** 0.5, 0, 1, points=[0.5])
        assert want == pytest.approx(math.sqrt(2) / 3, abs=1e-10)
        from fejerquad.fejer import holder_weight_integral

        assert holder_weight_integral(2.0) == pytest.approx(want, abs=1e-10)

    def test_zero_weight(self):
        zero = problem("x^2", "2*x", "0", 0, 1)
        r = m_bound_holder(zero, (2.0, 2.0))
        assert r.measured == 0.0 and r.bound == 0.0 and r.satisfied

    @pytest.mark.parametrize("pq", [(2.0, 2.0), (3.0, 1.5), (1.5, 3.0)])
    def test_holds_on_standard_problems(self, pq):
        for p in (UNIFORM, BUMP):
            assert m_bound_holder(p, pq).slack >= -1e-8

    @pytest.mark.parametrize("pq", [(2.0, 3.0), (1.0, 2.0), (0.5, -1.0)])
    def test_conjugate_violations_rejected(self, pq):
        with pytest.raises(ConjugateExponentError):
            m_bound_holder(UNIFORM, pq)


class TestTrapezoidGap:
    def test_square_uniform(self):
        assert trapezoid_gap(UNIFORM) == pytest.approx(1 / 6, abs=1e-10)

    def test_linear_exact(self):
        p = problem("x", "1", "1", 0, 1)
        assert trapezoid_gap(p) == pytest.approx(0.0, abs=1e-12)

    def test_exponential(self):
        # closed form: (1 + e^2)/2 * 2 - (e^2 - 1) = 2
        p = problem("exp(x)", "exp(x)", "1", 0, 2)
        assert trapezoid_gap(p) == pytest.approx(2.0, abs=1e-8)


class TestIdentity:
    def test_square(self):
        assert identity_defect(UNIFORM) <= 1e-8
        assert mirrored_identity_defect(UNIFORM) <= 1e-8

    def test_constant_f(self):
        p = problem("3", "0", "x*(1-x)", 0, 1)
        assert identity_defect(p) <= 1e-12
        assert mirrored_identity_defect(p) <= 1e-12

    def test_exp_with_bump_weight(self):
        p = problem("exp(x)", "exp(x)", "x*(1-x)", 0, 1)
        assert identity_defect(p) <= 1e-7

    def test_exp_uniform_mirrored(self):
        p = problem("exp(x)", "exp(x)", "1", 0, 2)
        assert mirrored_identity_defect(p) <= 1e-7

    def test_random_battery(self):
        # ten random (cubic f, symmetric quadratic g) pairs
        rng = np.random.default_rng(42)
        for _ in range(10):
            c = [float(v) for v in rng.uniform(-2, 2, size=4)]
            a, w = float(rng.uniform(-2, 2)), float(rng.uniform(0.5, 2.5))
            b = a + w
            c0, c1 = float(rng.uniform(0, 2)), float(rng.uniform(0, 3))
            f = f"{c[3]!r}*x^3+{c[2]!r}*x^2+{c[1]!r}*x+{c[0]!r}"
            fp = f"{3 * c[3]!r}*x^2+{2 * c[2]!r}*x+{c[1]!r}"
            g = f"{c0!r}+{c1!r}*(x-{a!r})*({b!r}-x)"
            p = problem(f, fp, g, a, b)
            assert p.g_symmetric and p.g_nonnegative
            assert identity_defect(p) <= 1e-7
            assert mirrored_identity_defect(p) <= 1e-7


class TestBoundReport:
    def test_satisfied_iff_slack_above_negative_tol(self):
        r = BoundReport.make("t", measured=1.0, bound=1.0 - 5e-9)
        assert r.satisfied  # within the scale-aware tolerance
        r = BoundReport.make("t", measured=1.0, bound=0.9)
        assert not r.satisfied and r.slack == pytest.approx(-0.1)

    def test_json_fields(self):
        d = BoundReport.make("t", 1.0, 2.0, warnings=("w",)).to_dict()
        assert set(d) == {
            "label",
            "measured",
            "bound",
            "slack",
            "satisfied",
            "report_tol",
            "warnings",
        }
