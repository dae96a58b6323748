"""Command-line interface.

Usage:
    cnqual table --property positivity --m 1..7 --limit
    cnqual table --property contractivity --m 3,5,7,9 --limit --figure t2.png
    cnqual verify --property contractivity --m-max 16 --tol 1e-6
    cnqual simulate --m 7 --theta 0.5 --tau 0.025 --steps 1 --step-profile 0.875
    cnqual poly --kind P --n 4 --range 0.8:2.0 --samples 200

Every subcommand writes CSV with a header row, to standard output by default
(``--output -``). Exit status: 0 success, 1 computation or verification
failure, 2 invalid arguments.
"""

from __future__ import annotations

import math
import sys

import click
import numpy as np

from . import bounds as bnd
from . import oracle, polynomials
from .matrix import GridConfig, build_A_numeric, inf_norm
from .simulator import SimConfig, StepProfile, run

__all__ = ["main", "parse_m_list", "parse_range"]


def parse_m_list(text: str) -> list[int]:
    """Parse ``"1..7"``, ``"3,5,7,9"`` or a mix such as ``"1..4,7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty item in {text!r}")
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo_i, hi_i + 1))
        else:
            out.append(int(part))
    if any(m < 1 for m in out):
        raise ValueError("m values must be positive integers")
    return out


def parse_range(text: str) -> tuple[float, float]:
    """Parse ``"a:b"`` into two finite floats with ``a <= b``."""
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise ValueError(f"expected a range like -1:1, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"invalid range {text!r}")
    return lo, hi


class _MList(click.ParamType):
    name = "m-list"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return parse_m_list(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class _Range(click.ParamType):
    name = "a:b"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return parse_range(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


def _emit(text: str, output: str) -> None:
    if output == "-":
        click.echo(text, nl=False)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


_output_option = click.option(
    "--output", "-o", default="-", show_default=True, help="CSV destination; '-' is standard output."
)
_figure_option = click.option(
    "--figure", type=click.Path(dir_okay=False), default=None, help="Also render a figure to this file."
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """CFL bounds for positivity and max-norm contractivity of Crank-Nicolson."""


@main.command()
@click.option("--property", "prop", type=click.Choice(["positivity", "contractivity"]), required=True)
@click.option("--m", "m_list", type=_MList(), required=True, help="e.g. 1..7 or 3,5,7,9")
@click.option("--limit/--no-limit", default=False, help="Append the m = infinity row.")
@_output_option
@_figure_option
def table(prop, m_list, limit, output, figure):
    """Per-mesh CFL bounds as CSV: property,m,omega,x,s."""
    try:
        rows = bnd.bound_table(prop, m_list, include_limit=limit)
    except (ArithmeticError, ValueError) as exc:
        _fail(str(exc))
    _emit(bnd.format_bound_table(rows), output)
    if figure:
        from .plotting import plot_bound_table

        plot_bound_table(rows, figure)


@main.command()
@click.option("--property", "prop", type=click.Choice(["positivity", "contractivity"]), required=True)
@click.option("--m-max", type=click.IntRange(min=1), required=True)
@click.option("--tol", type=click.FloatRange(min=0.0, min_open=True), default=1e-6, show_default=True)
@_output_option
@_figure_option
def verify(prop, m_max, tol, output, figure):
    """Compare closed-form bounds with brute-force thresholds for m = 1..m-max."""
    try:
        report = oracle.cross_validate(prop, m_max, tol)
    except (ArithmeticError, ValueError) as exc:
        _fail(str(exc))
    _emit(report.to_csv(), output)
    status = "PASS" if report.passed else "FAIL"
    click.echo(
        f"{status}: max deviation {report.max_deviation:.3g} (tol {tol:g}) over m = 1..{m_max}",
        err=output == "-",
    )
    if figure:
        from .plotting import plot_norm_curves

        s = np.linspace(0.05, 4.0, 160)
        ms = sorted({m for m in (1, 2, 3, 4, 5, 7, 9, 21) if m <= m_max} | {m_max})
        curves = {m: (s, [inf_norm(build_A_numeric(m, v)) for v in s]) for m in ms}
        plot_norm_curves(curves, figure)
    if not report.passed:
        sys.exit(1)


@main.command()
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--theta", type=click.FloatRange(0.0, 1.0), default=0.5, show_default=True)
@click.option("--tau", type=click.FloatRange(min=0.0, min_open=True), required=True)
@click.option("--steps", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--d", "diffusion", type=click.FloatRange(min=0.0, min_open=True), default=1.0, show_default=True)
@click.option("--step-profile", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=None)
@click.option("--initial", default=None, help="Comma-separated initial vector of length m.")
@_output_option
@_figure_option
def simulate(m, theta, tau, steps, diffusion, step_profile, initial, output, figure):
    """Theta-method trajectory as CSV: t,w_1,...,w_m,min_entry,inf_norm."""
    if (step_profile is None) == (initial is None):
        raise click.UsageError("give exactly one of --step-profile and --initial")
    if initial is not None:
        try:
            init = np.array([float(v) for v in initial.split(",")])
        except ValueError:
            raise click.BadParameter("not a comma-separated list of numbers", param_hint="--initial") from None
        if init.shape != (m,):
            raise click.BadParameter(f"expected {m} values", param_hint="--initial")
    else:
        init = StepProfile(step_profile)
    config = SimConfig(GridConfig(m, diffusion), tau, steps, theta, init)
    try:
        trace = run(config)
    except (ArithmeticError, ValueError) as exc:
        _fail(str(exc))
    _emit(trace.to_csv(), output)
    to_err = output == "-"
    final = ", ".join(f"{v:.4f}" for v in trace.states[-1])
    click.echo(f"s = {config.s:.15g}", err=to_err)
    click.echo(f"w_{steps} = ({final})", err=to_err)
    click.echo(f"||w_{steps}||_inf = {trace.norms[-1]:.4f}", err=to_err)
    for line in trace.summary():
        click.echo(line, err=to_err)
    if figure:
        from .plotting import plot_trace

        plot_trace(trace, figure)


@main.command()
@click.option("--kind", type=click.Choice(["U", "P", "C"], case_sensitive=False), required=True)
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--range", "x_range", type=_Range(), default="-1:1", show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=200, show_default=True)
@_output_option
@_figure_option
def poly(kind, n, x_range, samples, output, figure):
    """Sample a polynomial family on a uniform grid as CSV: x,value."""
    lo, hi = x_range
    if samples == 1 and lo != hi:
        raise click.BadParameter("a single sample needs a degenerate range a:a", param_hint="--samples")
    if samples > 1 and lo == hi:
        raise click.BadParameter("a degenerate range a:a takes exactly one sample", param_hint="--samples")
    xs = np.linspace(lo, hi, samples)
    try:
        values = polynomials.eval_recurrence(kind.upper(), n, xs)
    except OverflowError as exc:
        _fail(str(exc))
    lines = ["x,value"] + [f"{x:.15g},{v:.15g}" for x, v in zip(xs, values)]
    _emit("\n".join(lines) + "\n", output)
    if figure:
        from .plotting import plot_polynomial

        plot_polynomial(kind.upper(), n, xs, values, figure)


if __name__ == "__main__":  # pragma: no cover
    main()
