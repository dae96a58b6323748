"""Sharp CFL bounds for positivity and max-norm contractivity of the
Crank-Nicolson scheme applied to the 1-D heat equation."""

from .bounds import (
    UNBOUNDED,
    FiniteBound,
    Property,
    QualBound,
    Unbounded,
    bound_table,
    contractivity_bound,
    limit_bounds,
    positivity_bound,
    theta_literature_bounds,
)
from .matrix import CflPoint, CnMatrix, GridConfig, build_A_closed, build_A_numeric, build_B
from .polynomials import PolyFamily, eval_hyperbolic, eval_recurrence, isolated_root_P

__version__ = "0.1.0"
