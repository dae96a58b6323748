"""Brute-force thresholds from numerically built matrices.

Nothing here touches the polynomial families or the bound solvers: the
predicates look only at the entries of ``build_A_numeric``. That is what
makes :func:`cross_validate` an independent check of :mod:`cnqual.bounds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .bounds import Property, contractivity_bound, positivity_bound
from .matrix import POSITIVITY_ATOL, build_A_numeric, inf_norm, min_entry

__all__ = [
    "ThresholdEstimate",
    "ThresholdBracketError",
    "UnboundedThreshold",
    "CrossValidationRow",
    "CrossValidationReport",
    "positivity_predicate",
    "contractivity_predicate",
    "predicate_for",
    "empirical_threshold",
    "cross_validate",
]

CONTRACTIVITY_ATOL = 1e-12
DEFAULT_BRACKET = (1e-3, 8.0)


class ThresholdBracketError(ValueError):
    """The predicate has the same truth value at both ends of the bracket."""


class UnboundedThreshold(ThresholdBracketError):
    """The predicate holds at the top of the bracket: no finite threshold."""


@dataclass(frozen=True)
class ThresholdEstimate:
    property: Property
    m: int
    s_lo: float
    s_hi: float

    @property
    def width(self) -> float:
        return self.s_hi - self.s_lo

    @property
    def s(self) -> float:
        return 0.5 * (self.s_lo + self.s_hi)


def positivity_predicate(m: int, s: float) -> bool:
    """True iff every entry of ``A_m(s)`` is nonnegative up to rounding."""
    return min_entry(build_A_numeric(m, s)) >= -POSITIVITY_ATOL(s)


def contractivity_predicate(m: int, s: float) -> bool:
    """True iff ``||A_m(s)||_inf <= 1`` up to rounding."""
    return inf_norm(build_A_numeric(m, s)) <= 1.0 + CONTRACTIVITY_ATOL


def predicate_for(prop):
    prop = Property.coerce(prop)
    return positivity_predicate if prop is Property.POSITIVITY else contractivity_predicate


def empirical_threshold(prop, m: int, s_bracket: Sequence[float] = DEFAULT_BRACKET, tol: float = 1e-9) -> ThresholdEstimate:
    """Bisect the property predicate over ``s``.

    Both properties hold exactly on an interval ``(0, s*]``, so the predicate
    is monotone and bisection brackets ``s*`` to within ``tol``.
    """
    prop = Property.coerce(prop)
    pred = predicate_for(prop)
    lo, hi = map(float, s_bracket)
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")
    ok_lo, ok_hi = pred(m, lo), pred(m, hi)
    if ok_lo and ok_hi:
        raise UnboundedThreshold(f"{prop.value} holds on the whole bracket for m={m}")
    if not ok_lo:
        raise ThresholdBracketError(f"{prop.value} fails at the bottom of the bracket for m={m}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(m, mid):
            lo = mid
        else:
            hi = mid
    return ThresholdEstimate(prop, m, lo, hi)


@dataclass(frozen=True)
class CrossValidationRow:
    property: Property
    m: int
    closed_form_s: float
    empirical_s: float
    abs_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.abs_deviation <= self.tol


@dataclass
class CrossValidationReport:
    property: Property
    tol: float
    rows: list[CrossValidationRow] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((r.abs_deviation for r in self.rows), default=0.0)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list[CrossValidationRow]:
        return [r for r in self.rows if not r.passed]

    def to_csv(self) -> str:
        lines = ["property,m,closed_form_s,empirical_s,abs_deviation"]
        for r in self.rows:
            lines.append(
                f"{r.property.value},{r.m},{_fmt(r.closed_form_s)},{_fmt(r.empirical_s)},{_fmt(r.abs_deviation)}"
            )
        return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.15g}"


def cross_validate(prop, m_max: int, tol: float = 1e-6, s_bracket: Sequence[float] = DEFAULT_BRACKET) -> CrossValidationReport:
    """Compare closed-form bounds with brute-force thresholds for m = 1..m_max.

    Unbounded cases agree when the closed form is unbounded and the predicate
    still holds at the top of the bracket; the deviation is then 0.
    """
    prop = Property.coerce(prop)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    solve = positivity_bound if prop is Property.POSITIVITY else contractivity_bound
    report = CrossValidationReport(prop, tol)
    threshold_tol = min(1e-9, 0.1 * tol)
    for m in range(1, m_max + 1):
        closed = solve(m).s
        try:
            empirical = empirical_threshold(prop, m, s_bracket, threshold_tol).s
        except UnboundedThreshold:
            empirical = math.inf
        if math.isinf(closed) and math.isinf(empirical):
            dev = 0.0
        elif math.isinf(closed) or math.isinf(empirical):
            dev = math.inf
        else:
            dev = abs(closed - empirical)
        report.rows.append(CrossValidationRow(prop, m, closed, empirical, dev, tol))
    return report
