import math

import numpy as np
import pytest
import sympy as sp

from cnqual import bounds as bnd
from cnqual._bisect import BracketSignError, bisect_increasing, bisect_root
from cnqual.bounds import (
    CONTRACTIVITY_LIMIT,
    OMEGA_C_MIN,
    POSITIVITY_LIMIT,
    UNBOUNDED,
    Property,
    bound_table,
    contractivity_bound,
    format_bound_table,
    limit_bounds,
    positivity_bound,
    theta_literature_bounds,
)

SQRT2, SQRT3, SQRT5 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(5.0)
S_C_MAX = 1 + SQRT5


class TestPositivityBound:
    @pytest.mark.parametrize(
        "m,s",
        [(1, 1.0), (2, 2 / SQRT3), (3, 1.17009), (4, 1.17144), (7, 1.17157)],
    )
    def test_examples(self, m, s):
        tol = 1e-12 if m <= 2 else 5e-6
        assert positivity_bound(m).s == pytest.approx(s, abs=tol)

    def test_record_is_consistent(self):
        for m in (1, 2, 5, 40, 1000):
            b = positivity_bound(m)
            assert b.bounded and b.property is Property.POSITIVITY
            assert b.x == pytest.approx(math.cosh(b.omega), rel=1e-15)
            assert b.s == pytest.approx(1 / (b.x - 1), rel=1e-13)
            # s_m rounds onto the limit for large m; the gap keeps the strict side
            assert 1.0 <= b.s <= POSITIVITY_LIMIT
            assert math.isfinite(b.value.log_limit_gap)  # gap > 0 even when it underflows

    def test_residual_small(self):
        for m in list(range(1, 40)) + [100, 1000, 10_000]:
            assert positivity_bound(m).residual <= 1e-11

    def test_iterations_about_fifty(self):
        assert 40 <= positivity_bound(3).iterations <= 70

    def test_strictly_increasing(self):
        gaps = [positivity_bound(m).limit_gap for m in range(1, 201)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        s = [positivity_bound(m).s for m in range(1, 201)]
        assert all(a <= b for a, b in zip(s, s[1:]))

    def test_rejects_bad_m(self):
        for m in (0, -3, 2.5):
            with pytest.raises(ValueError):
                positivity_bound(m)


class TestContractivityBound:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_small_m_unbounded(self, m):
        b = contractivity_bound(m)
        assert b.value is UNBOUNDED and not b.bounded
        assert b.s == math.inf

    def test_m5(self):
        b = contractivity_bound(5)
        assert b.s == pytest.approx(2.0, abs=1e-10)
        assert b.omega == pytest.approx(2 * math.asinh(1 / 2), abs=1e-12)

    def test_m7(self):
        assert contractivity_bound(7).s == pytest.approx((1 + SQRT5) / 2, abs=1e-10)

    def test_m4(self):
        b = contractivity_bound(4)
        assert b.s == pytest.approx(S_C_MAX, abs=1e-10)
        assert b.omega == pytest.approx(OMEGA_C_MIN, abs=1e-12)

    def test_m9(self):
        assert contractivity_bound(9).s == pytest.approx(1.53518, abs=5e-6)

    def test_interval_membership(self):
        for m in range(4, 201):
            b = contractivity_bound(m)
            # omega_m and s_m round onto log 3 and 3/2 near m = 70; the strict
            # side is carried by the cancellation-free gap s_m - 3/2
            assert OMEGA_C_MIN <= b.omega <= math.log(3.0)
            assert CONTRACTIVITY_LIMIT <= b.s <= S_C_MAX
            assert b.limit_gap > 0
            assert b.s == pytest.approx(1 / (math.cosh(b.omega) - 1), rel=1e-13)

    def test_residual_small(self):
        for m in list(range(4, 60)) + [201, 1000, 10_000]:
            assert contractivity_bound(m).residual <= 1e-11

    @pytest.mark.parametrize("parity", [0, 1])
    def test_decreasing_per_parity(self, parity):
        ms = [m for m in range(4, 201) if m % 2 == parity]
        gaps = [contractivity_bound(m).limit_gap for m in ms]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_decreasing_merged(self):
        gaps = [contractivity_bound(m).limit_gap for m in range(4, 201)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_large_m_does_not_overflow(self):
        b = contractivity_bound(10_000)
        assert b.bounded and math.isfinite(b.s)
        assert 0 < b.limit_gap < 1e-100 or b.value.log_limit_gap < -230

    def test_even_equation_degenerate_at_m2(self):
        # the right side carries sinh((m - 2) w / 4), which vanishes at m = 2,
        # while the left side is positive: no root for any w > 0
        for w in np.linspace(0.05, 3.0, 60):
            lhs = 2 * math.sinh(w / 2) ** 3 * (math.sinh(2 * w) - math.sinh(w))
            rhs = math.sinh(w) * math.sinh(1.5 * w) * math.sinh(w / 2) * math.sinh(0.0)
            assert lhs > 0 and rhs == 0

    def test_env_override(self, monkeypatch):
        fine = contractivity_bound(9)
        monkeypatch.setenv("CNQUAL_BISECT_TOL", "1e-3")
        coarse = contractivity_bound(9)
        assert coarse.iterations < fine.iterations
        assert coarse.s == pytest.approx(fine.s, abs=1e-2)


class TestOrdering:
    def test_positivity_below_contractivity(self):
        for m in range(4, 201):
            assert positivity_bound(m).s < contractivity_bound(m).s


class TestLimits:
    def test_values(self):
        lim = limit_bounds()
        assert lim.positivity == pytest.approx(2 * (2 - SQRT2), abs=1e-15)
        assert lim.positivity == pytest.approx(1.171572875, abs=1e-9)
        assert lim.contractivity == 1.5

    def test_log3_equation(self):
        w = math.log(3.0)
        assert math.exp(-w / 2) - math.sinh(w / 2) == pytest.approx(0.0, abs=1e-15)

    def test_limit_rows(self):
        row = bnd.limit_bound("positivity")
        assert row.is_limit and row.x == pytest.approx((6 + SQRT2) / 4)
        row = bnd.limit_bound("contractivity")
        assert row.omega == math.log(3.0) and row.s == 1.5


class TestThetaBounds:
    def test_half_matches_limits(self):
        pos, con = theta_literature_bounds(0.5)
        lim = limit_bounds()
        assert pos == pytest.approx(lim.positivity, abs=1e-12)
        assert con == pytest.approx(lim.contractivity, abs=1e-12)

    def test_one_is_unbounded(self):
        assert theta_literature_bounds(1.0) == (UNBOUNDED, UNBOUNDED)

    def test_zero_uses_the_analytic_limit(self):
        th = sp.symbols("theta", positive=True)
        pos_lim = sp.limit((1 - sp.sqrt(1 - th)) / (th * (1 - th)), th, 0)
        con_at_0 = ((2 - th) / (4 * (1 - th) ** 2)).subs(th, 0)
        assert (pos_lim, con_at_0) == (sp.Rational(1, 2), sp.Rational(1, 2))
        assert theta_literature_bounds(0.0) == pytest.approx((0.5, 0.5), abs=1e-15)

    @pytest.mark.parametrize("theta", [1e-9, 0.1, 0.3, 0.77, 0.999])
    def test_matches_raw_formula(self, theta):
        pos, con = theta_literature_bounds(theta)
        raw = (1 - math.sqrt(1 - theta)) / (theta * (1 - theta))
        assert pos == pytest.approx(raw, rel=1e-6 if theta < 1e-6 else 1e-12)
        assert con == pytest.approx((2 - theta) / (4 * (1 - theta) ** 2), rel=1e-14)

    @pytest.mark.parametrize("theta", [-0.1, 1.01, math.nan])
    def test_domain(self, theta):
        with pytest.raises(ValueError):
            theta_literature_bounds(theta)


class TestTable:
    def test_rows_and_limit(self):
        rows = bound_table("contractivity", [3, 5, 7, 9])
        assert [r.m for r in rows[:-1]] == [3, 5, 7, 9]
        assert rows[-1].is_limit

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            bound_table("positivity", [])

    def test_csv_format(self):
        text = format_bound_table(bound_table("contractivity", [3, 5]))
        lines = text.splitlines()
        assert lines[0] == "property,m,omega,x,s"
        assert lines[1] == "contractivity,3,0,1,inf"
        prop, m, omega, x, s = lines[2].split(",")
        assert (prop, m) == ("contractivity", "5")
        assert float(s) == pytest.approx(2.0, abs=1e-12)
        assert lines[3].split(",")[1] == "inf" and lines[3].endswith(",1.5")
        assert len(s.replace(".", "").lstrip("0").rstrip("0")) <= 15


class TestBisection:
    def test_sign_check(self):
        with pytest.raises(BracketSignError):
            bisect_root(lambda t: t * t + 1, -1.0, 1.0, 1e-10)
        with pytest.raises(BracketSignError):
            bisect_increasing(lambda t: -t, -1.0, 1.0, 1e-10)

    def test_width(self):
        root, it = bisect_root(lambda t: t - 0.3, 0.0, 1.0, 1e-13)
        assert root == pytest.approx(0.3, abs=1e-13)
        assert it == math.ceil(math.log2(1.0 / 1e-13))
