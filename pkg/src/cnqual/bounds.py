"""Sharp per-mesh CFL bounds for positivity and max-norm contractivity.

Both bounds are ``s = 1 / (cosh(w) - 1)`` for the root ``w`` of a
transcendental equation with a known bracket:

* positivity: ``coth(m w) sinh w = 3 cosh w - 4`` on
  ``(log(2 + sqrt 2), log(2 + sqrt 3)]``;
* contractivity, odd m >= 5:
  ``2 sinh((m-1)w/4) sinh((m+1)w/4) = sinh(w/2) sinh((m+1)w/2)``;
* contractivity, even m >= 4:
  ``sinh^2(w/2) sinh(mw/2) (sinh((m+2)w/2) - sinh(mw/2))
  = sinh(w) sinh((m+1)w/2) sinh(mw/4) sinh((m-2)w/4)``;

the contractivity roots lying in ``[log((3 + sqrt5 + sqrt(6 sqrt5 - 2))/4), log 3)``.
For m <= 3 the scheme is contractive for every ``s``.

The roots approach their limits exponentially fast in ``m``, so each solver
works with ``t = log|w - w_limit|`` and an algebraically rearranged equation
that is free of cancellation. That keeps the distance of ``s_m`` from its
limit accurate to full relative precision even where ``s_m`` itself rounds
to the limit value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from . import polynomials as poly
from ._bisect import BracketSignError, bisect_root

__all__ = [
    "Property",
    "Unbounded",
    "UNBOUNDED",
    "FiniteBound",
    "QualBound",
    "LimitBounds",
    "BracketSignError",
    "POSITIVITY_LIMIT",
    "CONTRACTIVITY_LIMIT",
    "OMEGA_C_MIN",
    "positivity_bound",
    "contractivity_bound",
    "limit_bound",
    "limit_bounds",
    "theta_literature_bounds",
    "bound_table",
    "format_bound_table",
    "positivity_residual",
    "contractivity_residual",
]

SQRT5 = math.sqrt(5.0)
LOG3 = math.log(3.0)

POSITIVITY_LIMIT = 2.0 * (2.0 - poly.SQRT2)
CONTRACTIVITY_LIMIT = 1.5
#: Closed left end of the contractivity bracket, attained at m = 4.
OMEGA_C_MIN = math.log((3.0 + SQRT5 + math.sqrt(-2.0 + 6.0 * SQRT5)) / 4.0)
_ETA_MAX = LOG3 - OMEGA_C_MIN


class Property(enum.Enum):
    POSITIVITY = "positivity"
    CONTRACTIVITY = "contractivity"

    @classmethod
    def coerce(cls, prop: "Property | str") -> "Property":
        if isinstance(prop, cls):
            return prop
        try:
            return cls(str(prop).lower())
        except ValueError:
            raise ValueError(f"unknown property {prop!r}; expected positivity or contractivity") from None


@dataclass(frozen=True)
class Unbounded:
    """The property holds for every CFL number."""

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded()


@dataclass(frozen=True)
class FiniteBound:
    """A finite bound ``s = 1/(x - 1)``, ``x = cosh(omega)``.

    ``limit_gap`` is ``|s - s_limit|`` computed without cancellation and
    ``log_limit_gap`` its logarithm (finite even when the gap underflows).
    """

    omega: float
    x: float
    s: float
    limit_gap: float
    log_limit_gap: float


@dataclass(frozen=True)
class QualBound:
    property: Property
    m: Union[int, float]  # math.inf for the limit row
    value: Union[FiniteBound, Unbounded]
    iterations: int = 0
    residual: float = 0.0

    @property
    def bounded(self) -> bool:
        return isinstance(self.value, FiniteBound)

    @property
    def s(self) -> float:
        return self.value.s if self.bounded else math.inf

    @property
    def omega(self) -> float:
        return self.value.omega if self.bounded else 0.0

    @property
    def x(self) -> float:
        return self.value.x if self.bounded else 1.0

    @property
    def limit_gap(self) -> float:
        """``|s - s_limit|``; infinite for unbounded rows."""
        return self.value.limit_gap if self.bounded else math.inf

    @property
    def is_limit(self) -> bool:
        return math.isinf(self.m)


# -- equation residuals in the original (unrearranged) form ---------------------


def positivity_residual(m: int, omega: float) -> float:
    """Relative mismatch of ``coth(m w) sinh w`` and ``3 cosh w - 4``."""
    lhs = math.sinh(omega) / math.tanh(m * omega)
    rhs = 3.0 * math.cosh(omega) - 4.0
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def _contractivity_log_sides(m: int, omega: float) -> tuple[float, float]:
    if m % 2 == 1:
        lhs = math.log(2.0) + poly.log_sinh((m - 1) * omega / 4) + poly.log_sinh((m + 1) * omega / 4)
        rhs = poly.log_sinh(omega / 2) + poly.log_sinh((m + 1) * omega / 2)
    else:
        # sinh((m+2)w/2) - sinh(mw/2) = 2 cosh((m+1)w/2) sinh(w/2)
        lhs = (
            3.0 * poly.log_sinh(omega / 2)
            + math.log(2.0)
            + poly.log_sinh(m * omega / 2)
            + poly.log_cosh((m + 1) * omega / 2)
        )
        rhs = (
            poly.log_sinh(omega)
            + poly.log_sinh((m + 1) * omega / 2)
            + poly.log_sinh(m * omega / 4)
            + poly.log_sinh((m - 2) * omega / 4)
        )
    return lhs, rhs


def contractivity_residual(m: int, omega: float) -> float:
    """Relative mismatch of the two sides of the parity-appropriate equation."""
    if m < 4:
        raise ValueError("the contractivity equation is defined for m >= 4")
    lhs, rhs = _contractivity_log_sides(m, omega)
    return -math.expm1(-abs(lhs - rhs))


# -- rearranged equations in t = log(log 3 - w) ---------------------------------


def _contractivity_gap(m: int, t: float) -> float:
    """log(left) - log(right) of the rearranged contractivity equation.

    With ``w = log 3 - eta``, ``a = w/2`` and ``M = m w / 2`` the odd equation
    divided by ``e^M / 2`` becomes

        (3/2)(1 - e^-eta) = e^-M (2 cosh a - e^-M (1 - sinh^2 a + sinh a cosh a))

    and the even one divided by ``e^{2M} / 2`` becomes

        (3/4) e^a (1 - e^-eta) = e^-M (c^2 e^a - 2 sh (sh^2 + c^2) e^-M
                                      - c^2 e^{-2M-a} - sh^2 e^{-3M-a} + (c/2) e^{-3M})

    with ``sh, c = sinh a, cosh a``. The left sides vanish at the limit root.
    """
    eta = math.exp(t)
    w = LOG3 - eta
    a = 0.5 * w
    big_m = 0.5 * m * w
    sh, c = math.sinh(a), math.cosh(a)
    e1 = math.exp(-big_m)
    log_small = poly.log_one_minus_exp_neg(t)
    if m % 2 == 1:
        lhs = math.log(1.5) + log_small
        inner = 2.0 * c - e1 * (1.0 - sh * sh + sh * c)
    else:
        lhs = math.log(0.75) + a + log_small
        inner = (
            c * c * math.exp(a)
            - 2.0 * sh * (sh * sh + c * c) * e1
            - c * c * math.exp(-a) * e1 * e1
            - sh * sh * math.exp(-a) * e1**3
            + 0.5 * c * e1**3
        )
    return lhs - (-big_m + math.log(inner))


def _finite_bound(omega: float, s_limit: float, sign: int, log_gap: float, s_end: float) -> FiniteBound:
    """``s = s_limit + sign * gap``, kept inside the closed end ``s_end`` that
    rounding of ``s_limit - gap`` could otherwise cross by an ulp."""
    gap = math.exp(log_gap)
    s = s_limit + sign * gap
    s = max(s, s_end) if sign < 0 else min(s, s_end)
    return FiniteBound(omega=omega, x=math.cosh(omega), s=s, limit_gap=gap, log_limit_gap=log_gap)


def _log_positivity_gap(omega_offset_log: float, omega: float) -> float:
    """log(s_inf - s_m) for ``w = log(2 + sqrt 2) + eps``, ``eps = exp(t)``.

    x_m - x_inf = 2 sinh(w_inf + eps/2) sinh(eps/2);
    s_inf - s_m = (x_m - x_inf) / ((x_inf - 1)(x_m - 1)).
    """
    eps = math.exp(omega_offset_log)
    half_log = omega_offset_log - math.log(2.0)
    log_dx = math.log(2.0) + poly.log_sinh(poly.OMEGA_P_INF + 0.5 * eps) + poly.log_sinh_from_log(half_log)
    x_inf = (6.0 + poly.SQRT2) / 4.0
    xm1 = 2.0 * math.sinh(0.5 * omega) ** 2
    return log_dx - math.log(x_inf - 1.0) - math.log(xm1)


def _log_contractivity_gap(eta_log: float, omega: float) -> float:
    """log(s_m - 3/2) for ``w = log 3 - eta``, ``eta = exp(t)``."""
    eta = math.exp(eta_log)
    half_log = eta_log - math.log(2.0)
    log_dx = math.log(2.0) + poly.log_sinh(LOG3 - 0.5 * eta) + poly.log_sinh_from_log(half_log)
    x_inf = 5.0 / 3.0
    xm1 = 2.0 * math.sinh(0.5 * omega) ** 2
    return log_dx - math.log(x_inf - 1.0) - math.log(xm1)


def positivity_bound(m: int, tol: float | None = None) -> QualBound:
    """Largest ``s`` for which ``A_m(s)`` is entrywise nonnegative."""
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    root = poly.solve_isolated_root(int(m), tol)
    log_gap = _log_positivity_gap(root.log_offset, root.omega)
    value = _finite_bound(root.omega, POSITIVITY_LIMIT, -1, log_gap, 1.0)
    return QualBound(
        Property.POSITIVITY,
        int(m),
        value,
        iterations=root.iterations,
        residual=positivity_residual(int(m), root.omega),
    )


def contractivity_bound(m: int, tol: float | None = None) -> QualBound:
    """Largest ``s`` with ``||A_m(s)||_inf <= 1``; unbounded for m <= 3."""
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    m = int(m)
    if m <= 3:
        return QualBound(Property.CONTRACTIVITY, m, UNBOUNDED)
    if tol is None:
        tol = poly.default_bisect_tol()
    # left end widened by 1e-9 in w so the m = 4 root is strictly inside
    t_hi = math.log(_ETA_MAX + 1e-9)
    t_lo = -m * LOG3 - 50.0
    t, iterations = bisect_root(lambda tt: _contractivity_gap(m, tt), t_lo, t_hi, tol)
    t = min(t, math.log(_ETA_MAX))
    omega = LOG3 - math.exp(t)
    log_gap = _log_contractivity_gap(t, omega)
    value = _finite_bound(omega, CONTRACTIVITY_LIMIT, +1, log_gap, 1.0 + SQRT5)
    return QualBound(
        Property.CONTRACTIVITY,
        m,
        value,
        iterations=iterations,
        residual=contractivity_residual(m, omega),
    )


class LimitBounds(NamedTuple):
    positivity: float
    contractivity: float


def limit_bounds() -> LimitBounds:
    """Mesh-independent limits ``(2(2 - sqrt 2), 3/2)``.

    Checks that ``log(2 + sqrt 2)`` solves ``3 cosh w - 4 = sinh w`` and that
    ``log 3`` turns both limiting contractivity inequalities into equalities.
    """
    w_p = poly.OMEGA_P_INF
    if abs(3.0 * math.cosh(w_p) - 4.0 - math.sinh(w_p)) > 1e-14:
        raise ArithmeticError("positivity limit root check failed")
    w_c = LOG3
    odd = math.exp(-w_c / 2) - math.sinh(w_c / 2)
    even = 2.0 * math.expm1(w_c) - math.sinh(w_c) / math.sinh(w_c / 2) ** 2
    if abs(odd) > 1e-14 or abs(even) > 1e-13:
        raise ArithmeticError("contractivity limit root check failed")
    return LimitBounds(POSITIVITY_LIMIT, CONTRACTIVITY_LIMIT)


def limit_bound(prop) -> QualBound:
    """The ``m -> infinity`` row of a bound table."""
    prop = Property.coerce(prop)
    if prop is Property.POSITIVITY:
        omega, s = poly.OMEGA_P_INF, POSITIVITY_LIMIT
        x = (6.0 + poly.SQRT2) / 4.0
    else:
        omega, s, x = LOG3, CONTRACTIVITY_LIMIT, 5.0 / 3.0
    return QualBound(prop, math.inf, FiniteBound(omega, x, s, 0.0, -math.inf))


def theta_literature_bounds(theta: float):
    """Mesh-independent theta-method bounds ``(positivity, contractivity)``.

    positivity:    (1 - sqrt(1 - theta)) / (theta (1 - theta))
    contractivity: (2 - theta) / (4 (1 - theta)^2)

    Both are unbounded for ``theta = 1``. The positivity formula is evaluated
    as ``1 / ((1 - theta)(1 + sqrt(1 - theta)))``, which equals it for
    ``theta > 0`` and gives the limit 1/2 at ``theta = 0``.
    """
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    if theta == 1.0:
        return UNBOUNDED, UNBOUNDED
    r = math.sqrt(1.0 - theta)
    pos = 1.0 / ((1.0 - theta) * (1.0 + r))
    contr = (2.0 - theta) / (4.0 * (1.0 - theta) ** 2)
    return pos, contr


def bound_table(prop, m_list: Sequence[int], include_limit: bool = True, tol: float | None = None) -> list[QualBound]:
    """One bound per ``m`` followed by the limit row."""
    prop = Property.coerce(prop)
    if len(m_list) == 0:
        raise ValueError("m_list must not be empty")
    solve = positivity_bound if prop is Property.POSITIVITY else contractivity_bound
    rows = [solve(m, tol) for m in m_list]
    if include_limit:
        rows.append(limit_bound(prop))
    return rows


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.15g}"


def format_bound_table(rows: Sequence[QualBound]) -> str:
    """CSV with header ``property,m,omega,x,s``.

    Unbounded rows carry ``omega=0, x=1, s=inf``, the ``s -> inf`` end of
    the ``(s, x, omega)`` parametrization.
    """
    lines = ["property,m,omega,x,s"]
    for row in rows:
        m = "inf" if row.is_limit else str(row.m)
        lines.append(f"{row.property.value},{m},{_fmt(row.omega)},{_fmt(row.x)},{_fmt(row.s)}")
    return "\n".join(lines) + "\n"
