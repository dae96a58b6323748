"""Chebyshev-like polynomial families U_n, P_n and C_n.

All three families share the three-term recurrence

    p_n(x) = 2x p_{n-1}(x) - p_{n-2}(x)

and differ only in their seeds:

    U: (1, 2x)        Chebyshev polynomials of the second kind
    P: (-1, 2x - 4)
    C: (0, 4(x - 1))

For x = cosh(w) > 1 each family has a hyperbolic closed form, which is what
the bound solvers use. Large n*w values are handled by factoring out a common
exponential ``exp(log_scale)`` so that ratios of values sharing the same ``w``
stay accurate long after the raw values overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._bisect import bisect_increasing

__all__ = [
    "PolyFamily",
    "EvalPoint",
    "IdentityResiduals",
    "IsolatedRoot",
    "SCALE_THRESHOLD",
    "eval_recurrence",
    "eval_derivative",
    "eval_hyperbolic",
    "eval_hyperbolic_scaled",
    "check_identities",
    "isolated_root_P",
    "solve_isolated_root",
    "count_interior_roots",
    "log_sinh",
    "log_sinh_from_log",
    "log_cosh",
    "log_expm1",
    "log_one_minus_exp_neg",
    "default_bisect_tol",
]

#: n*w above which hyperbolic forms are evaluated with the dominant
#: exponential factored out.
SCALE_THRESHOLD = 300.0

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
#: Limit root of the isolated-root equation, log(2 + sqrt 2).
OMEGA_P_INF = math.log(2.0 + SQRT2)
#: Root for n = 1, log(2 + sqrt 3).
OMEGA_P_ONE = math.log(2.0 + SQRT3)


def default_bisect_tol() -> float:
    """Bracket width at which the bound solvers stop.

    ``CNQUAL_BISECT_TOL`` in the environment overrides the default 1e-13.
    """
    import os

    raw = os.environ.get("CNQUAL_BISECT_TOL")
    if raw is None or raw.strip() == "":
        return 1e-13
    tol = float(raw)
    if not (tol > 0 and math.isfinite(tol)):
        raise ValueError(f"CNQUAL_BISECT_TOL must be a positive number, got {raw!r}")
    return tol


class PolyFamily(enum.Enum):
    U = "U"
    P = "P"
    C = "C"

    @classmethod
    def coerce(cls, kind: "PolyFamily | str") -> "PolyFamily":
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).upper())
        except ValueError:
            raise ValueError(f"unknown polynomial family {kind!r}; expected U, P or C") from None

    @property
    def seed0(self) -> float:
        return {"U": 1.0, "P": -1.0, "C": 0.0}[self.value]

    def seed1(self, x):
        """Degree-one member evaluated at ``x``."""
        if self is PolyFamily.U:
            return 2.0 * x
        if self is PolyFamily.P:
            return 2.0 * x - 4.0
        return 4.0 * (x - 1.0)


@dataclass(frozen=True)
class EvalPoint:
    """An abscissa ``x``, optionally paired with ``omega = arccosh(x)``."""

    x: float
    omega: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.x):
            raise ValueError("x must be finite")
        if self.omega is not None:
            if self.omega < 0:
                raise ValueError("omega must be nonnegative")
            if abs(self.x - math.cosh(self.omega)) > 1e-12 * max(1.0, abs(self.x)):
                raise ValueError("x and omega are inconsistent: x != cosh(omega)")

    @classmethod
    def from_omega(cls, omega: float) -> "EvalPoint":
        return cls(math.cosh(omega), omega)

    @classmethod
    def from_x(cls, x: float) -> "EvalPoint":
        return cls(x, math.acosh(x) if x >= 1.0 else None)


def eval_recurrence(kind, n: int, x):
    """Evaluate ``p_n(x)`` by running the three-term recurrence.

    ``x`` may be a scalar or an array. Raises ``OverflowError`` when the
    result leaves the double range.
    """
    family = PolyFamily.coerce(kind)
    if n < 0:
        raise ValueError("n must be nonnegative")
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        prev = np.full_like(xa, family.seed0)
        if n == 0:
            out = prev
        else:
            cur = np.asarray(family.seed1(xa), dtype=float)
            two_x = 2.0 * xa
            for _ in range(n - 1):
                prev, cur = cur, two_x * cur - prev
            out = cur
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"{family.value}_{n}(x) overflows double precision")
    return float(out) if scalar else out


def eval_derivative(kind, n: int, x: float) -> float:
    """Derivative ``p_n'(x)`` via the differentiated recurrence."""
    family = PolyFamily.coerce(kind)
    if n == 0:
        return 0.0
    p_prev, p_cur = family.seed0, family.seed1(x)
    d_prev, d_cur = 0.0, (2.0 if family is not PolyFamily.C else 4.0)
    for _ in range(n - 1):
        p_prev, p_cur, d_prev, d_cur = (
            p_cur,
            2.0 * x * p_cur - p_prev,
            d_cur,
            2.0 * p_cur + 2.0 * x * d_cur - d_prev,
        )
    if not math.isfinite(d_cur):
        raise OverflowError(f"{family.value}_{n}'(x) overflows double precision")
    return d_cur


def _sinh_scaled(v, log_scale):
    """``sinh(v) * exp(-log_scale)`` without forming ``sinh(v)``."""
    return 0.5 * (np.exp(v - log_scale) - np.exp(-v - log_scale))


def _cosh_scaled(v, log_scale):
    return 0.5 * (np.exp(v - log_scale) + np.exp(-v - log_scale))


def eval_hyperbolic_scaled(kind, n, omega: float, log_scale: float | None = None):
    """Hyperbolic closed form at ``x = cosh(omega)`` as ``(mantissa, log_scale)``.

    The family value equals ``mantissa * exp(log_scale)``. When ``log_scale``
    is not given it is ``n * omega`` if that exceeds :data:`SCALE_THRESHOLD`
    and 0 otherwise. Pass an explicit ``log_scale`` to put several values on a
    common scale; their mantissa ratios are then the value ratios.

    ``n`` may be an integer array, in which case ``log_scale`` must be given.
    """
    family = PolyFamily.coerce(kind)
    if not omega > 0:
        raise ValueError("omega must be positive")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("n must be nonnegative")
    if log_scale is None:
        if n_arr.ndim != 0:
            raise ValueError("log_scale is required for array n")
        log_scale = float(n) * omega if float(n) * omega > SCALE_THRESHOLD else 0.0
    nf = n_arr.astype(float)
    sinh_w = math.sinh(omega)
    if family is PolyFamily.U:
        m = _sinh_scaled((nf + 1.0) * omega, log_scale) / sinh_w
    elif family is PolyFamily.C:
        # 4(cosh w - 1) = 8 sinh^2(w/2), exact for small w
        m = 8.0 * math.sinh(0.5 * omega) ** 2 * _sinh_scaled(nf * omega, log_scale) / sinh_w
    else:
        m = (3.0 * math.cosh(omega) - 4.0) * _sinh_scaled(nf * omega, log_scale) / sinh_w - _cosh_scaled(
            nf * omega, log_scale
        )
    if np.ndim(m) == 0:
        m = float(m)
    return m, log_scale


def eval_hyperbolic(kind, n: int, omega: float) -> float:
    """Family value at ``x = cosh(omega)`` from the hyperbolic closed form.

    Raises ``OverflowError`` if the value itself is out of double range; use
    :func:`eval_hyperbolic_scaled` for ratios in that regime.
    """
    mantissa, log_scale = eval_hyperbolic_scaled(kind, n, omega)
    if log_scale == 0.0:
        return mantissa
    if mantissa == 0.0:
        return 0.0
    log_abs = math.log(abs(mantissa)) + log_scale
    if log_abs > 709.78:
        raise OverflowError(f"{PolyFamily.coerce(kind).value}_{n}(cosh {omega}) overflows double precision")
    return math.copysign(math.exp(log_abs), mantissa)


class IdentityResiduals(NamedTuple):
    p_from_u: float
    c_from_pu: float
    c_from_u: float
    scale: float

    def ok(self, rtol: float = 1e-10) -> bool:
        bound = rtol * self.scale
        return max(abs(self.p_from_u), abs(self.c_from_pu), abs(self.c_from_u)) <= bound


def check_identities(n: int, x: float) -> IdentityResiduals:
    """Residuals of the three identities linking P_n and C_n to U_n.

    * ``P_n - (2 U_{n-2} - 4 U_{n-1} + U_n)``
    * ``C_n - (P_n + U_n)``
    * ``C_n - 4 (x - 1) U_{n-1}``

    ``scale`` is the largest magnitude among the terms involved.
    """
    if n < 2:
        raise ValueError("check_identities needs n >= 2")
    u2, u1, u0 = (eval_recurrence("U", k, x) for k in (n - 2, n - 1, n))
    p = eval_recurrence("P", n, x)
    c = eval_recurrence("C", n, x)
    c_u = 4.0 * (x - 1.0) * u1
    terms = (u2 * 2.0, u1 * 4.0, u0, p, c, c_u)
    scale = max(abs(t) for t in terms)
    return IdentityResiduals(
        p_from_u=p - (2.0 * u2 - 4.0 * u1 + u0),
        c_from_pu=c - (p + u0),
        c_from_u=c - c_u,
        scale=scale,
    )


# -- log-domain helpers -----------------------------------------------------


def log_sinh(v: float) -> float:
    """``log(sinh(v))`` for ``v > 0``, finite for any ``v`` that is."""
    if v > 20.0:
        return v - math.log(2.0) + math.log1p(-math.exp(-2.0 * v))
    if v < 1e-8:
        return math.log(v) + v * v / 6.0
    return math.log(math.sinh(v))


def log_sinh_from_log(log_v: float) -> float:
    """``log(sinh(v))`` given ``log(v)``; usable when ``v`` underflows."""
    if log_v < math.log(1e-8):
        return log_v + math.exp(2.0 * log_v) / 6.0
    return log_sinh(math.exp(log_v))


def log_cosh(v: float) -> float:
    v = abs(v)
    return v - math.log(2.0) + math.log1p(math.exp(-2.0 * v))


def log_expm1(t: float) -> float:
    """``log(exp(eps) - 1)`` with ``eps = exp(t)``."""
    eps = math.exp(t)
    if eps < 1e-8:
        return t + 0.5 * eps
    return math.log(math.expm1(eps))


def log_one_minus_exp_neg(t: float) -> float:
    """``log(1 - exp(-eta))`` with ``eta = exp(t)``."""
    eta = math.exp(t)
    if eta < 1e-8:
        return t - 0.5 * eta
    return math.log(-math.expm1(-eta))


# -- isolated root of P_n -----------------------------------------------------


class IsolatedRoot(NamedTuple):
    """Isolated root ``w_n`` of P_n together with its offset from the limit.

    ``log_offset`` is ``log(w_n - log(2 + sqrt 2))``; it stays meaningful
    when ``w_n`` itself is indistinguishable from the limit in floating point.
    """

    omega: float
    x: float
    log_offset: float
    iterations: int


_Y_INF = 2.0 + SQRT2
_Y_OTHER = 2.0 - SQRT2
_EPS_MAX = OMEGA_P_ONE - OMEGA_P_INF


def _isolated_root_gap(n: int, t: float) -> float:
    """Log-domain form of ``coth(n w) sinh w = 3 cosh w - 4``.

    With ``w = log(2 + sqrt 2) + eps`` and ``eps = exp(t)`` the equation
    factors exactly as

        (y_inf e^eps - y_inf)(y - y_other) / y = (coth(n w) - 1) sinh w

    where ``y = e^w`` and ``y_inf, y_other = 2 +- sqrt 2``. Returns the log of
    the left side minus the log of the right side, increasing in ``t``.
    """
    eps = math.exp(t)
    w = OMEGA_P_INF + eps
    y = math.exp(w)
    lhs = math.log(_Y_INF) + log_expm1(t) + math.log((y - _Y_OTHER) / y)
    # coth(nw) - 1 = 2 e^{-2nw} / (1 - e^{-2nw})
    two_nw = 2.0 * n * w
    rhs = math.log(2.0) - two_nw - math.log(-math.expm1(-two_nw)) + log_sinh(w)
    return lhs - rhs


def solve_isolated_root(n: int, tol: float | None = None) -> IsolatedRoot:
    """Bisect for the isolated root of P_n in ``(log(2+sqrt2), log(2+sqrt3)]``.

    The unknown is ``t = log(w - log(2 + sqrt 2))``; bisection stops once the
    bracket on ``t`` is narrower than ``tol``, which bounds the relative error
    of the offset and hence the absolute error of ``w`` by ``tol``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if tol is None:
        tol = default_bisect_tol()
    t_hi = math.log(_EPS_MAX) + 1e-9
    t_lo = -2.0 * n * OMEGA_P_ONE - 50.0
    t, iterations = bisect_increasing(lambda tt: _isolated_root_gap(n, tt), t_lo, t_hi, tol)
    t = min(t, math.log(_EPS_MAX))
    omega = OMEGA_P_INF + math.exp(t)
    return IsolatedRoot(omega, math.cosh(omega), t, iterations)


def isolated_root_P(n: int) -> tuple[float, float]:
    """Return ``(w_n, x_n)``, the isolated root of P_n with ``x_n = cosh(w_n)``."""
    root = solve_isolated_root(n)
    return root.omega, root.x


# -- root counting ------------------------------------------------------------


def count_interior_roots(kind, n: int) -> int:
    """Count sign changes of P_n or C_n on a uniform grid over (-1, 1).

    The grid has ``512 * n`` points. Samples that are numerically zero are
    replaced by two nearby samples before counting.
    """
    family = PolyFamily.coerce(kind)
    if family is PolyFamily.U:
        raise ValueError("count_interior_roots supports the P and C families")
    if n < 2:
        raise ValueError("n must be >= 2")
    npts = 512 * n
    xs = np.linspace(-1.0, 1.0, npts + 2)[1:-1]
    vals = eval_recurrence(family, n, xs)
    tiny = 1e-13 * float(np.max(np.abs(vals)))
    ambiguous = np.abs(vals) <= tiny
    if np.any(ambiguous):
        step = xs[1] - xs[0]
        keep_x = [xs[~ambiguous]]
        for xa in xs[ambiguous]:
            keep_x.append(np.array([xa - 0.25 * step, xa + 0.25 * step]))
        xs = np.sort(np.concatenate(keep_x))
        vals = eval_recurrence(family, n, xs)
        vals = vals[np.abs(vals) > tiny]
    signs = np.sign(vals)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
