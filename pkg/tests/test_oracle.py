import math

import numpy as np
import pytest

from cnqual import bounds, oracle, polynomials
from cnqual.bounds import Property
from cnqual.oracle import (
    ThresholdBracketError,
    UnboundedThreshold,
    contractivity_predicate,
    cross_validate,
    empirical_threshold,
    positivity_predicate,
)


class TestPredicates:
    def test_positivity_examples(self):
        assert positivity_predicate(7, 1.6) is False
        assert positivity_predicate(7, 1.0) is True
        assert positivity_predicate(1, 1.0) is True
        assert positivity_predicate(1, 1.01) is False

    def test_contractivity_examples(self):
        assert contractivity_predicate(7, 1.6) is True
        assert contractivity_predicate(5, 2.0) is True
        assert contractivity_predicate(5, 2.01) is False
        assert contractivity_predicate(3, 1000.0) is True

    @pytest.mark.parametrize("prop", ["positivity", "contractivity"])
    def test_threshold_shape(self, prop):
        """The predicate, sampled on 50 values of s, is true then false."""
        pred = oracle.predicate_for(prop)
        grid = np.linspace(0.02, 6.0, 50)
        for m in range(1, 33):
            flags = [pred(m, s) for s in grid]
            first_false = flags.index(False) if False in flags else len(flags)
            assert all(flags[:first_false]) and not any(flags[first_false:])


class TestEmpiricalThreshold:
    def test_positivity_m1(self):
        est = empirical_threshold("positivity", 1, (0.5, 4.0), 1e-9)
        assert est.width <= 1e-9
        assert abs(est.s - 1.0) <= 1e-9
        assert positivity_predicate(1, est.s_lo) and not positivity_predicate(1, est.s_hi)

    def test_contractivity_m4(self):
        est = empirical_threshold("contractivity", 4, (0.5, 8.0), 1e-9)
        assert abs(est.s - (1 + math.sqrt(5))) <= 1e-9

    def test_unbounded_m2(self):
        with pytest.raises(UnboundedThreshold):
            empirical_threshold("contractivity", 2, (0.5, 8.0), 1e-9)

    def test_false_at_both_ends(self):
        with pytest.raises(ThresholdBracketError):
            empirical_threshold("positivity", 5, (2.0, 4.0))

    def test_bad_bracket(self):
        with pytest.raises(ValueError):
            empirical_threshold("positivity", 5, (1.0, 0.5))

    def test_closed_form_bound_is_sharp(self):
        # at s_m the property holds, a relative 1e-6 above it fails
        for m in (2, 3, 6, 15):
            s = bounds.positivity_bound(m).s
            assert positivity_predicate(m, s)
            assert not positivity_predicate(m, s * (1 + 1e-6))
        for m in (4, 5, 8, 15):
            s = bounds.contractivity_bound(m).s
            assert contractivity_predicate(m, s)
            assert not contractivity_predicate(m, s * (1 + 1e-6))


class TestIndependence:
    def test_thresholds_never_touch_polynomials_or_bounds(self, monkeypatch):
        def boom(*args, **kwargs):
            raise AssertionError("oracle reached the closed-form path")

        for name in dir(polynomials):
            if callable(getattr(polynomials, name)) and not name.startswith("__") and name[0].islower():
                monkeypatch.setattr(polynomials, name, boom)
        for name in ("positivity_bound", "contractivity_bound", "limit_bounds"):
            monkeypatch.setattr(bounds, name, boom)
        est = empirical_threshold("positivity", 6, tol=1e-7)
        assert 1.0 < est.s < 1.2
        est = empirical_threshold("contractivity", 6, tol=1e-7)
        assert 1.5 < est.s < 3.3


class TestCrossValidate:
    def test_positivity_16(self):
        report = cross_validate("positivity", 16, 1e-6)
        assert report.passed and len(report.rows) == 16
        assert report.max_deviation <= 1e-6

    def test_contractivity_16(self):
        report = cross_validate("contractivity", 16, 1e-6)
        assert report.passed
        for row in report.rows[:3]:
            assert math.isinf(row.closed_form_s) and math.isinf(row.empirical_s)
            assert row.abs_deviation == 0.0

    def test_positivity_m1_tight(self):
        report = cross_validate("positivity", 1, 1e-9)
        assert report.rows[0].abs_deviation <= 1e-9

    def test_failures_are_reported(self):
        report = cross_validate("positivity", 3, 1e-16)
        assert not report.passed
        assert report.failures

    def test_csv(self):
        text = cross_validate("contractivity", 5).to_csv()
        lines = text.splitlines()
        assert lines[0] == "property,m,closed_form_s,empirical_s,abs_deviation"
        assert lines[1] == "contractivity,1,inf,inf,0"
        assert len(lines) == 6

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            cross_validate(Property.POSITIVITY, 0)
