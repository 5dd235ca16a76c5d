import math

import pytest

from conftest import oracle_quad
from fejerquad.bounds import (
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
from fejerquad.errors import ParameterError, SymmetryViolationError
from fejerquad.fejer import make_problem, trapezoid_gap
from fejerquad.hconvexity import check_h_convex
from fejerquad.kernel import HKernel

SQUARE = make_problem("x^2", "2*x", "1", 0, 1)
EXP2 = make_problem("exp(x)", "exp(x)", "1", 0, 2)
SQRT32 = make_problem("(2/3)*x^1.5", "sqrt(x)", "1", 0, 1)


class TestFejerTriple:
    def test_square_uniform(self):
        t = fejer_triple(SQUARE)
        assert t.lhs == pytest.approx(0.25, abs=1e-10)
        assert t.mid == pytest.approx(1 / 3, abs=1e-10)
        assert t.rhs == pytest.approx(0.5, abs=1e-10)
        assert t.left_satisfied and t.right_satisfied

    def test_affine_equality(self):
        p = make_problem("x", "1", "1", 0, 1)
        t = fejer_triple(p)
        assert t.lhs == pytest.approx(0.5, abs=1e-10)
        assert t.mid == pytest.approx(0.5, abs=1e-10)
        assert t.rhs == pytest.approx(0.5, abs=1e-10)

    def test_square_with_bump_density(self):
        p = make_problem("x^2", "2*x", "6*x*(1-x)", 0, 1)
        t = fejer_triple(p)
        # oracle: int 6 x^3 (1-x) dx = 0.3
        want_mid = oracle_quad(lambda x: x * x * 6 * x * (1 - x), 0, 1)
        assert t.lhs == pytest.approx(0.25, abs=1e-9)
        assert t.mid == pytest.approx(want_mid, abs=1e-9)
        assert t.mid == pytest.approx(0.3, abs=1e-9)
        assert t.rhs == pytest.approx(0.5, abs=1e-9)


class TestHConvexBound:
    def test_square_identity_kernel(self):
        r = bound_h_convex(SQUARE, HKernel.power(1))
        assert r.measured == pytest.approx(1 / 6, abs=1e-9)
        assert r.bound == pytest.approx(0.25, abs=1e-10)
        assert r.satisfied and not r.warnings

    def test_constant_f_trivial(self):
        p = make_problem("2", "0", "x*(1-x)", 0, 1)
        r = bound_h_convex(p, HKernel.power(1))
        assert r.measured == pytest.approx(0.0, abs=1e-12)
        assert r.bound >= 0.0 and r.satisfied

    def test_worked_sqrt_case(self):
        r = bound_h_convex(SQRT32, HKernel.power(0.5))
        assert r.measured == pytest.approx(1 / 15, abs=1e-8)
        # oracle: (b-a)(|f'a|+|f'b|) int_0^1/2 S(x) dx with
        # S(u) = (u^1.5 + 1 - (1-u)^1.5) / 1.5
        want = oracle_quad(
            lambda x: (x**1.5 + 1 - (1 - x) ** 1.5) / 1.5, 0, 0.5
        )
        assert r.bound == pytest.approx(want, abs=1e-9)
        assert r.bound == pytest.approx(0.16094757082487299, abs=1e-9)
        assert r.satisfied

    def test_requires_symmetric_weight(self):
        p = make_problem("x^2", "2*x", "x", 0, 1)
        with pytest.raises(SymmetryViolationError):
            bound_h_convex(p, HKernel.power(1))

    def test_hypothesis_warning_attached(self):
        # |f'| = sqrt is concave, so the identity-kernel hypothesis fails
        r = bound_h_convex(SQRT32, HKernel.power(1))
        assert any("not verified" in w for w in r.warnings)

    def test_custom_kernel_matches_power(self):
        r_custom = bound_h_convex(SQUARE, HKernel.custom("x"), check_hypotheses=False)
        r_power = bound_h_convex(SQUARE, HKernel.power(1), check_hypotheses=False)
        assert r_custom.bound == pytest.approx(r_power.bound, abs=1e-8)


class TestMirrorBound:
    def test_square(self):
        r = bound_h_convex_mirror(SQUARE, HKernel.power(1))
        assert r.bound == pytest.approx(0.25, abs=1e-10)

    def test_constant_f(self):
        p = make_problem("5", "0", "1", 0, 1)
        assert bound_h_convex_mirror(p, HKernel.power(1)).measured == pytest.approx(
            0.0, abs=1e-12
        )

    def test_exp_with_symmetric_bump(self):
        p = make_problem("exp(x)", "exp(x)", "x*(2-x)", 0, 2)
        direct = bound_h_convex(p, HKernel.power(1), check_hypotheses=False)
        mirror = bound_h_convex_mirror(p, HKernel.power(1), check_hypotheses=False)
        assert mirror.bound == pytest.approx(direct.bound, abs=1e-8)

    @pytest.mark.parametrize("k", [0.25, 0.5, 1.0])
    def test_mirror_equals_direct_for_symmetric(self, k):
        for p in (SQUARE, EXP2):
            d = bound_h_convex(p, HKernel.power(k), check_hypotheses=False)
            m = bound_h_convex_mirror(p, HKernel.power(k), check_hypotheses=False)
            assert abs(d.bound - m.bound) <= 1e-8


class TestSConvexBound:
    def test_s_one_reduces_to_convex(self):
        r = bound_s_convex(SQUARE, 1.0)
        assert r.bound == pytest.approx(0.25, abs=1e-10)

    def test_worked_half_case(self):
        r = bound_s_convex(SQRT32, 0.5)
        assert r.bound == pytest.approx(0.16094757082487299, abs=1e-9)

    def test_constant_f(self):
        p = make_problem("1", "0", "1", 0, 1)
        assert bound_s_convex(p, 0.5).measured == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("s", [0.0, -0.5, 1.5])
    def test_range_checked(self, s):
        with pytest.raises(ParameterError):
            bound_s_convex(SQUARE, s)

    @pytest.mark.parametrize("s", [0.25, 0.5, 0.75, 1.0])
    def test_matches_power_kernel_bound(self, s):
        for p in (SQUARE, EXP2, SQRT32):
            rs = bound_s_convex(p, s, check_hypotheses=False)
            rh = bound_h_convex(p, HKernel.power(s), check_hypotheses=False)
            assert abs(rs.bound - rh.bound) <= 1e-9


class TestConvexBounds:
    def test_square_recapture(self):
        left = bound_convex_left(SQUARE)
        right = bound_convex_right(SQUARE)
        # for unit weight both reduce to (b-a)^2 (|f'a|+|f'b|) / 8 = 0.25
        assert left.bound == pytest.approx(0.25, abs=1e-12)
        assert right.bound == pytest.approx(0.25, abs=1e-12)
        assert left.measured == pytest.approx(1 / 6, abs=1e-9)

    def test_exp_interval(self):
        r = bound_convex_left(EXP2)
        assert r.measured == pytest.approx(2.0, abs=1e-8)
        # (|f'(0)| + |f'(2)|) * int_0^1 x dx = (1 + e^2) / 2
        assert r.bound == pytest.approx((1 + math.e**2) / 2, abs=1e-8)
        assert r.satisfied

    def test_linear_f(self):
        p = make_problem("x", "1", "1", 0, 1)
        assert bound_convex_left(p).measured == pytest.approx(0.0, abs=1e-12)

    def test_left_equals_right_for_symmetric(self):
        for p in (SQUARE, EXP2):
            l = bound_convex_left(p, check_hypotheses=False)
            r = bound_convex_right(p, check_hypotheses=False)
            assert abs(l.bound - r.bound) <= 1e-9

    def test_power_one_kernel_equals_convex(self):
        for p in (SQUARE, EXP2):
            h = bound_h_convex(p, HKernel.power(1), check_hypotheses=False)
            c = bound_convex_left(p, check_hypotheses=False)
            assert abs(h.bound - c.bound) <= 1e-9


class TestBoundedDerivative:
    def test_square(self):
        rs = bound_bounded_derivative(SQUARE, DerivBounds(0, 2))
        assert rs.primary.measured == pytest.approx(1 / 6, abs=1e-8)
        assert rs.primary.bound == pytest.approx(0.25, abs=1e-8)
        assert rs.primary.satisfied and not rs.primary.warnings
        assert rs.sup_form.bound == pytest.approx(0.25, abs=1e-10)
        # Holder companion at (p, q) = (2, 2): spread/2 * ||g||_2 * sqrt(2)/3
        assert rs.holder_form.bound == pytest.approx(
            math.sqrt(2) / 3, abs=1e-8
        )

    def test_exp(self):
        rs = bound_bounded_derivative(EXP2, DerivBounds(1, math.e**2))
        assert rs.primary.measured == pytest.approx(1.0, abs=1e-8)
        assert rs.primary.bound == pytest.approx((math.e**2 - 1) / 4, abs=1e-8)
        assert rs.primary.satisfied

    def test_near_linear_limit(self):
        p = make_problem("2*x+1", "2", "x*(1-x)", 0, 1)
        rs = bound_bounded_derivative(p, DerivBounds(2 - 1e-6, 2 + 1e-6))
        assert rs.primary.measured <= 1e-8
        assert rs.primary.satisfied

    def test_violation_warns(self):
        rs = bound_bounded_derivative(SQUARE, DerivBounds(0.5, 1.5))
        assert any("leaves" in w for w in rs.primary.warnings)

    def test_order_validated(self):
        with pytest.raises(ParameterError):
            DerivBounds(2, 2)


class TestLipschitz:
    def test_square_equality_case(self):
        rs = bound_lipschitz(SQUARE, LipschitzConstant(2.0))
        assert rs.primary.measured == pytest.approx(1 / 6, abs=1e-8)
        # oracle: int |t-1/2| |1-2t| dt = 1/6, so the bound is K/2 * 1/6 * 2 ... = 1/6
        want = oracle_quad(lambda t: abs(t - 0.5) * abs(1 - 2 * t), 0, 1, points=[0.5])
        assert rs.primary.bound == pytest.approx(2 * 0.5 * want, abs=1e-9)
        assert rs.primary.bound == pytest.approx(1 / 6, abs=1e-9)
        assert rs.sup_form.bound == pytest.approx(1 / 6, abs=1e-12)
        assert rs.primary.satisfied and rs.sup_form.satisfied

    def test_linear_f(self):
        p = make_problem("3*x", "3", "1", 0, 1)
        rs = bound_lipschitz(p, LipschitzConstant(1.0))
        assert rs.primary.measured == pytest.approx(0.0, abs=1e-10)

    def test_violation_warns(self):
        rs = bound_lipschitz(SQUARE, LipschitzConstant(0.1))
        assert any("Lipschitz" in w for w in rs.primary.warnings)

    def test_constant_validated(self):
        with pytest.raises(ParameterError):
            LipschitzConstant(0.0)


class TestCrossCuttingInvariants:
    def test_offset_integral_vanishes_for_symmetric(self):
        from fejerquad.fejer import m_integral

        for p in (SQUARE, EXP2):
            assert abs(m_integral(p)) <= 1e-9

    @pytest.mark.parametrize("c", [0.5, 3.0])
    def test_scale_equivariance(self, c):
        for base, scaled in (
            (SQUARE, make_problem(f"{c!r}*x^2", f"{2 * c!r}*x", "1", 0, 1)),
            (EXP2, make_problem(f"{c!r}*exp(x)", f"{c!r}*exp(x)", "1", 0, 2)),
        ):
            r0 = bound_h_convex(base, HKernel.power(1), check_hypotheses=False)
            r1 = bound_h_convex(scaled, HKernel.power(1), check_hypotheses=False)
            assert r1.measured == pytest.approx(c * r0.measured, rel=1e-10)
            assert r1.bound == pytest.approx(c * r0.bound, rel=1e-10)
            assert r0.satisfied == r1.satisfied

    def test_dominance_with_verified_hypothesis(self):
        combos = [
            (SQUARE, HKernel.power(1)),
            (EXP2, HKernel.power(1)),
            (SQRT32, HKernel.power(0.5)),
        ]
        for p, h in combos:
            chk = check_h_convex(lambda x: abs(p.fprime_value(x)), h, p.a, p.b)
            assert not chk.refuted
            r = bound_h_convex(p, h, check_hypotheses=False)
            assert r.measured <= r.bound + r.report_tol
