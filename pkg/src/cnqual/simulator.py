"""Theta-method time stepping for the semi-discrete heat equation.

Each step solves ``(I - theta tau B) w_new = (I + (1 - theta) tau B) w`` with a
banded solver, so a trajectory never forms the iteration matrix and stays
independent of :mod:`cnqual.matrix`'s construction path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.linalg import solve_banded

from .matrix import GridConfig, ZeroPivotError

__all__ = ["StepProfile", "SimConfig", "SimTrace", "make_step_profile", "step", "run"]

VIOLATION_RTOL = 1e-12


@dataclass(frozen=True)
class StepProfile:
    """Initial data equal to 1 at grid points ``x_i >= a`` and 0 elsewhere."""

    a: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ValueError("step location a must lie in (0, 1)")


def make_step_profile(grid: GridConfig, a: float) -> np.ndarray:
    StepProfile(a)
    return (grid.nodes() >= a).astype(float)


@dataclass(frozen=True)
class SimConfig:
    grid: GridConfig
    tau: float
    steps: int
    theta: float = 0.5
    initial: Union[StepProfile, np.ndarray, None] = None

    def __post_init__(self):
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError("tau must be positive")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.initial is not None and not isinstance(self.initial, StepProfile):
            w0 = np.asarray(self.initial, dtype=float)
            if w0.shape != (self.grid.m,):
                raise ValueError(f"initial vector must have length m={self.grid.m}")

    @property
    def s(self) -> float:
        return self.grid.d * self.tau / self.grid.h**2

    def initial_state(self) -> np.ndarray:
        if self.initial is None:
            return np.zeros(self.grid.m)
        if isinstance(self.initial, StepProfile):
            return make_step_profile(self.grid, self.initial.a)
        return np.array(self.initial, dtype=float)


def step(config: SimConfig, w) -> np.ndarray:
    """Advance ``w`` by one theta-method step."""
    w = np.asarray(w, dtype=float)
    m = config.grid.m
    if w.shape != (m,):
        raise ValueError(f"state must have length m={m}")
    s = config.s
    explicit = (1.0 - config.theta) * s
    rhs = (1.0 - 2.0 * explicit) * w
    rhs[:-1] += explicit * w[1:]
    rhs[1:] += explicit * w[:-1]
    implicit = config.theta * s
    if implicit == 0.0:
        return rhs
    bands = np.empty((3, m))
    bands[0, :] = -implicit
    bands[1, :] = 1.0 + 2.0 * implicit
    bands[2, :] = -implicit
    try:
        return solve_banded((1, 1), bands, rhs, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ZeroPivotError(str(exc)) from exc


@dataclass
class SimTrace:
    times: np.ndarray
    states: np.ndarray
    min_entries: np.ndarray
    norms: np.ndarray
    positivity_violation: Optional[int] = None
    contractivity_violation: Optional[int] = None
    config: Optional[SimConfig] = field(default=None, repr=False)

    @property
    def violations(self) -> dict:
        return {"positivity": self.positivity_violation, "contractivity": self.contractivity_violation}

    def summary(self) -> list[str]:
        lines = []
        if self.positivity_violation is None:
            lines.append("positivity preserved")
        else:
            lines.append(f"positivity violated at step {self.positivity_violation}")
        if self.contractivity_violation is None:
            lines.append("max norm non-increasing")
        else:
            lines.append(f"contractivity violated at step {self.contractivity_violation}")
        return lines

    def to_csv(self) -> str:
        m = self.states.shape[1]
        header = ["t"] + [f"w_{i}" for i in range(1, m + 1)] + ["min_entry", "inf_norm"]
        lines = [",".join(header)]
        for t, w, lo, nrm in zip(self.times, self.states, self.min_entries, self.norms):
            cells = [t, *w, lo, nrm]
            lines.append(",".join(f"{float(v):.15g}" for v in cells))
        return "\n".join(lines) + "\n"


def run(config: SimConfig) -> SimTrace:
    """Iterate :func:`step` and record per-step minima, norms and violations.

    A positivity violation is only flagged for nonnegative initial data; the
    first step whose minimum drops below ``-1e-12 * ||w_0||_inf`` is recorded.
    A contractivity violation is the first step whose norm exceeds the
    previous one by more than a relative 1e-12.
    """
    w = config.initial_state()
    states = [w]
    for _ in range(config.steps):
        w = step(config, w)
        states.append(w)
    states_arr = np.vstack(states)
    mins = states_arr.min(axis=1)
    norms = np.abs(states_arr).max(axis=1)
    times = np.arange(config.steps + 1) * config.tau

    pos_violation = None
    if mins[0] >= 0:
        floor = -VIOLATION_RTOL * max(norms[0], np.finfo(float).tiny)
        bad = np.nonzero(mins[1:] < floor)[0]
        if bad.size:
            pos_violation = int(bad[0] + 1)
    grew = np.nonzero(norms[1:] > norms[:-1] * (1.0 + VIOLATION_RTOL))[0]
    con_violation = int(grew[0] + 1) if grew.size else None
    return SimTrace(times, states_arr, mins, norms, pos_violation, con_violation, config)
