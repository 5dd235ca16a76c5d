import math

import pytest

from fejerquad.errors import NonnegativityError
from fejerquad.hconvexity import check_h_convex
from fejerquad.kernel import HKernel


class TestExamples:
    def test_square_is_convex(self):
        r = check_h_convex(lambda x: x * x, HKernel.power(1), 0, 1, grid=21)
        assert not r.refuted
        assert r.max_violation == 0.0
        assert r.checked_triples == 21 * 21 * 21

    def test_sqrt_is_half_convex(self):
        r = check_h_convex(math.sqrt, HKernel.power(0.5), 0, 1, grid=21)
        assert not r.refuted

    def test_sqrt_is_not_convex(self):
        r = check_h_convex(math.sqrt, HKernel.power(1), 0, 1, grid=21)
        assert r.refuted
        # e.g. x=0, y=1, lambda=1/2 gives sqrt(1/2) > 1/2
        assert r.max_violation > 0.1


class TestValidation:
    def test_negative_function_rejected(self):
        with pytest.raises(NonnegativityError):
            check_h_convex(lambda x: x - 0.5, HKernel.power(1), 0, 1)

    def test_grid_minimum(self):
        with pytest.raises(ValueError):
            check_h_convex(lambda x: x, HKernel.power(1), 0, 1, grid=2)

    def test_godunova_levin_kernel_usable_pointwise(self):
        # k = -1 is fine here: the check needs only h at interior lambdas
        r = check_h_convex(lambda x: x * x + 1, HKernel.power(-1), 0, 1, grid=9)
        assert not r.refuted


class TestInvariants:
    CONVEX = [
        lambda x: x * x,
        lambda x: abs(2 * x - 1),
        lambda x: math.exp(x),
        lambda x: x * x + 0.5,
    ]

    def test_nonnegative_convex_pass_identity_kernel(self):
        for phi in self.CONVEX:
            assert not check_h_convex(phi, HKernel.power(1), 0, 1).refuted

    def test_identity_kernel_passers_pass_p_kernel(self):
        # h = 1 dominates h(t) = t on [0, 1]
        for phi in self.CONVEX:
            assert not check_h_convex(phi, HKernel.constant(1), 0, 1).refuted

    def test_tolerance_monotonicity(self):
        counts = []
        for tol in (1e-12, 1e-6, 1e-2, 1.0):
            r = check_h_convex(
                math.sqrt, HKernel.power(1), 0, 1, grid=13, hc_tol=tol
            )
            counts.append(len(r.violations))
        assert all(b <= a for a, b in zip(counts, counts[1:]))


class TestReport:
    def test_json_caps_listed_violations(self):
        r = check_h_convex(math.sqrt, HKernel.power(1), 0, 1, grid=21)
        d = r.to_dict()
        assert len(r.violations) > 20
        assert len(d["violations"]) == 20
        assert d["violation_count"] == len(r.violations)
        # worst listed first
        listed = [v["excess"] for v in d["violations"]]
        assert listed == sorted(listed, reverse=True)
        assert d["max_violation"] == pytest.approx(listed[0])
        assert "not refuted at this grid resolution" in d["note"]

    def test_violation_fields(self):
        r = check_h_convex(math.sqrt, HKernel.power(1), 0, 1, grid=5)
        v = r.to_dict()["violations"][0]
        assert set(v) == {"x", "y", "lambda", "lhs", "rhs", "excess"}
