"""Single-photon degree of polarization and polarization-scrambler simulations."""

__version__ = "0.1.0"

from .dopcalc import DopResult, Method, dop_of_state, q_min_analytic, q_min_grid, reduced_polarization
from .qcore import DensityOperator, PureState, SubsystemLayout, UnitaryOp

__all__ = [
    "DensityOperator",
    "DopResult",
    "Method",
    "PureState",
    "SubsystemLayout",
    "UnitaryOp",
    "dop_of_state",
    "q_min_analytic",
    "q_min_grid",
    "reduced_polarization",
]
