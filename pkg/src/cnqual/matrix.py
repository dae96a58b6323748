"""Discrete Laplacian and the Crank-Nicolson iteration matrix.

``A_m = (I - (s/2) T)^{-1} (I + (s/2) T)`` with ``T = tridiag(1, -2, 1)`` of
dimension ``m`` and CFL number ``s = d tau / h^2``. Two independent
constructions are provided: a numeric one (tridiagonal solves, no polynomial
machinery) and a closed form assembled from the U, P, C polynomial families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import polynomials as poly

__all__ = [
    "GridConfig",
    "CflPoint",
    "TridiagMatrix",
    "CnMatrix",
    "ZeroPivotError",
    "POSITIVITY_ATOL",
    "solve_tridiagonal",
    "build_B",
    "build_A_numeric",
    "build_A_closed",
    "min_entry",
    "inf_norm",
    "inf_norm_closed",
    "log_norm_inf",
    "distinct_entry_count",
]


def POSITIVITY_ATOL(s: float) -> float:
    """Entries at or above ``-POSITIVITY_ATOL(s)`` count as nonnegative."""
    return 1e-12 * (1.0 + s)


class ZeroPivotError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GridConfig:
    """Uniform interior mesh on [0, 1] with homogeneous Dirichlet ends."""

    m: int
    d: float = 1.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if not self.d > 0:
            raise ValueError("diffusion coefficient d must be positive")

    @property
    def h(self) -> float:
        return 1.0 / (self.m + 1)

    def nodes(self) -> np.ndarray:
        """Interior grid points ``x_i = i h``, i = 1..m."""
        return np.arange(1, self.m + 1) / (self.m + 1)

    def cfl(self, tau: float) -> "CflPoint":
        return CflPoint.from_s(self.d * tau / self.h**2, tau=tau)


@dataclass(frozen=True)
class CflPoint:
    """The coupled coordinates ``s``, ``x = 1 + 1/s`` and ``omega = arccosh(x)``."""

    s: float
    x: float
    omega: float
    tau: float | None = None

    @classmethod
    def from_s(cls, s: float, tau: float | None = None) -> "CflPoint":
        s = float(s)
        if not (s > 0 and math.isfinite(s)):
            raise ValueError(f"CFL number must be positive and finite, got {s!r}")
        # cosh(w) - 1 = 2 sinh^2(w/2) = 1/s
        omega = 2.0 * math.asinh(1.0 / math.sqrt(2.0 * s))
        return cls(s=s, x=1.0 + 1.0 / s, omega=omega, tau=tau)

    @classmethod
    def from_omega(cls, omega: float) -> "CflPoint":
        if not omega > 0:
            raise ValueError("omega must be positive")
        s = 1.0 / (2.0 * math.sinh(0.5 * omega) ** 2)
        return cls(s=s, x=math.cosh(omega), omega=omega)


def _as_point(s) -> CflPoint:
    return s if isinstance(s, CflPoint) else CflPoint.from_s(s)


def _as_m(grid) -> int:
    m = grid.m if isinstance(grid, GridConfig) else int(grid)
    if m < 1:
        raise ValueError("m must be >= 1")
    return m


@dataclass(frozen=True)
class TridiagMatrix:
    """Constant-coefficient tridiagonal matrix stored as three scalars."""

    dim: int
    sub: float
    diag: float
    sup: float

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")

    @property
    def symmetric(self) -> bool:
        return self.sub == self.sup

    def to_dense(self) -> np.ndarray:
        a = np.diag(np.full(self.dim, self.diag))
        if self.dim > 1:
            a += np.diag(np.full(self.dim - 1, self.sup), 1)
            a += np.diag(np.full(self.dim - 1, self.sub), -1)
        return a

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = self.diag * v
        out[:-1] += self.sup * v[1:]
        out[1:] += self.sub * v[:-1]
        return out


@dataclass(frozen=True, eq=False)
class CnMatrix:
    """Dense Crank-Nicolson iteration matrix built at a given CFL point."""

    m: int
    entries: np.ndarray = field(repr=False)
    point: CflPoint

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def s(self) -> float:
        return self.point.s

    def is_bisymmetric(self, atol: float = 1e-12) -> bool:
        a = self.entries
        scale = max(1.0, float(np.max(np.abs(a))))
        return bool(
            np.allclose(a, a.T, rtol=0, atol=atol * scale)
            and np.allclose(a, a[::-1, ::-1], rtol=0, atol=atol * scale)
        )


def solve_tridiagonal(sub: float, diag: float, sup: float, rhs: np.ndarray) -> np.ndarray:
    """Thomas algorithm for a constant-coefficient tridiagonal system.

    ``rhs`` may be a vector or a matrix whose columns are solved together.
    """
    rhs = np.array(rhs, dtype=float)
    n = rhs.shape[0]
    c = np.empty(n)
    d = np.empty_like(rhs)
    if diag == 0:
        raise ZeroPivotError("zero pivot in row 0")
    c[0] = sup / diag
    d[0] = rhs[0] / diag
    for i in range(1, n):
        pivot = diag - sub * c[i - 1]
        if pivot == 0:
            raise ZeroPivotError(f"zero pivot in row {i}")
        c[i] = sup / pivot
        d[i] = (rhs[i] - sub * d[i - 1]) / pivot
    for i in range(n - 2, -1, -1):
        d[i] -= c[i] * d[i + 1]
    return d


def build_B(grid: GridConfig) -> TridiagMatrix:
    """Second-order central difference operator ``(d/h^2) tridiag(1, -2, 1)``."""
    k = grid.d / grid.h**2
    return TridiagMatrix(grid.m, k, -2.0 * k, k)


def build_A_numeric(grid, s) -> CnMatrix:
    """Crank-Nicolson matrix from ``m`` tridiagonal solves.

    Each column of ``I + (s/2) T`` is solved against ``I - (s/2) T``.
    ``grid`` is a :class:`GridConfig` or a plain ``m``; ``s`` a
    :class:`CflPoint` or a CFL number.
    """
    m = _as_m(grid)
    point = _as_point(s)
    half = 0.5 * point.s
    rhs = TridiagMatrix(m, half, 1.0 - point.s, half).to_dense()
    entries = solve_tridiagonal(-half, 1.0 + point.s, -half, rhs)
    return CnMatrix(m, entries, point)


def _common_scale(m: int, omega: float) -> float:
    return m * omega if m * omega > poly.SCALE_THRESHOLD else 0.0


def _closed_form_terms(m: int, point: CflPoint):
    """Mantissas of C_0..C_m, P_m and U_m on a shared exponential scale."""
    log_scale = _common_scale(m, point.omega)
    c, _ = poly.eval_hyperbolic_scaled("C", np.arange(m + 1), point.omega, log_scale)
    p, _ = poly.eval_hyperbolic_scaled("P", m, point.omega, log_scale)
    u, _ = poly.eval_hyperbolic_scaled("U", m, point.omega, log_scale)
    return np.asarray(c, dtype=float), float(p), float(u)


def build_A_closed(m: int, s) -> CnMatrix:
    """Crank-Nicolson matrix assembled from the polynomial representation.

    For ``i <= j`` (1-based) the numerator of entry ``(i, j)`` is

        sum_{k=0}^{min(i-1, m-j)} C_{i+m-j-2k}

    with ``C_m`` replaced by ``P_m`` on the diagonal; every entry shares the
    denominator ``U_m``. This reproduces the odd and even layouts entry by
    entry, including the ``min{i, j, m-i+1, m-j+1}`` summand count.
    """
    m = _as_m(m)
    point = _as_point(s)
    c, p, u = _closed_form_terms(m, point)
    if not (math.isfinite(u) and u != 0):
        raise OverflowError(f"U_{m} is not representable at s={point.s}")
    # same-parity prefix sums: S[n] = C_n + C_{n-2} + ...
    prefix = c.copy()
    for n in range(2, m + 1):
        prefix[n] += prefix[n - 2]

    def parity_sum(top: int, count: int) -> float:
        low = top - 2 * count
        return prefix[top] - (prefix[low] if low >= 0 else 0.0)

    num = np.empty((m, m))
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            top = i + m - j
            count = min(i - 1, m - j) + 1
            val = parity_sum(top, count)
            if i == j:
                val += p - c[m]
            num[i - 1, j - 1] = num[j - 1, i - 1] = val
    return CnMatrix(m, num / u, point)


def min_entry(a) -> float:
    return float(np.min(np.asarray(a)))


def inf_norm(a) -> float:
    """Maximum absolute row sum."""
    return float(np.max(np.sum(np.abs(np.asarray(a)), axis=1)))


def inf_norm_closed(m: int, s) -> float:
    """Max norm of ``A_m`` from the central-row polynomial formula.

    Odd m:  (|P_m + sum_{n=1}^{(m-1)/2} C_{2n-1}|
             + 2 sum_{i=0}^{(m-3)/2} sum_{n=1}^{(m-2i-1)/2} C_{2n+i}) / U_m
    Even m: (|P_m + sum_{n=1}^{m/2-1} C_{2n}|
             + sum_{i=1}^{m/2-1} sum_{n=1+i}^{m-i} C_n + sum_{n=1}^{m/2} C_{2n-1}) / U_m
    """
    m = _as_m(m)
    if m < 2:
        raise ValueError("inf_norm_closed needs m >= 2")
    point = _as_point(s)
    c, p, u = _closed_form_terms(m, point)
    if m % 2 == 1:
        half = (m - 1) // 2
        diag = p + sum(c[2 * n - 1] for n in range(1, half + 1))
        off = 2.0 * sum(
            c[2 * n + i] for i in range(0, (m - 3) // 2 + 1) for n in range(1, (m - 2 * i - 1) // 2 + 1)
        )
    else:
        half = m // 2
        diag = p + sum(c[2 * n] for n in range(1, half))
        off = sum(c[n] for i in range(1, half) for n in range(1 + i, m - i + 1))
        off += sum(c[2 * n - 1] for n in range(1, half + 1))
    return float((abs(diag) + off) / u)


def log_norm_inf(t) -> float:
    """Max-norm logarithmic norm ``max_i (a_ii + sum_{j != i} |a_ij|)``.

    This is the standard definition: the diagonal entry enters with its sign
    and is not repeated inside the absolute-value sum.
    """
    if isinstance(t, TridiagMatrix):
        if t.dim == 1:
            return float(t.diag)
        boundary = t.diag + max(abs(t.sub), abs(t.sup))
        if t.dim == 2:
            return float(boundary)
        return float(max(boundary, t.diag + abs(t.sub) + abs(t.sup)))
    a = np.asarray(t, dtype=float)
    diag = np.diag(a)
    off = np.sum(np.abs(a), axis=1) - np.abs(diag)
    return float(np.max(diag + off))


def distinct_entry_count(a, rtol: float = 1e-12) -> int:
    """Number of distinct entries of ``a``, two values being equal when they
    differ by at most ``rtol`` times the larger magnitude."""
    vals = np.sort(np.asarray(a, dtype=float).ravel())
    if vals.size == 0:
        return 0
    gaps = np.diff(vals)
    scale = np.maximum(np.abs(vals[1:]), np.abs(vals[:-1]))
    return int(1 + np.count_nonzero(gaps > rtol * scale))
