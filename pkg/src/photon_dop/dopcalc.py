"""Single-photon degree of polarization from minimum quantum ignorance.

For a pure total state the reduced polarization state rho_pol is formed,
the detection probability p(theta, phi) of every von Neumann polarization
measurement is considered, and

    q_min = 1 - sup |1 - 2 p(theta, phi)|,   dop = 1 - q_min.

Two evaluators are provided. ``q_min_grid`` sweeps the Poincare sphere
using the Born rule directly and serves as an audit oracle.
``q_min_analytic`` uses the qubit identity sup |1 - 2p| = |Bloch vector|.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import pi

import numpy as np

from .errors import ConfigError, LabelError, ShapeError
from .polarization import MeasurementDirection, bloch_length, bloch_vector, direction_ket, direction_of
from .qcore import DensityOperator, PureState, born_probability, partial_trace, projector, require_density

DEFAULT_GRID = (1000, 2000)


class Method(str, enum.Enum):
    GRID = "GRID"
    ANALYTIC = "ANALYTIC"


@dataclass(frozen=True)
class DopResult:
    q_min: float
    argmax_direction: MeasurementDirection
    method: Method

    @property
    def dop(self) -> float:
        return 1.0 - self.q_min

    def as_dict(self) -> dict:
        return {
            "q_min": self.q_min,
            "dop": self.dop,
            "argmax_theta": self.argmax_direction.theta,
            "argmax_phi": self.argmax_direction.phi,
            "method": self.method.value,
        }


def reduced_polarization(psi: PureState) -> DensityOperator:
    if "pol" not in psi.layout.labels:
        raise LabelError(f"state has no 'pol' factor: {list(psi.layout.labels)}")
    return partial_trace(psi.density(), "pol")


def _check_qubit(rho: DensityOperator) -> None:
    if rho.matrix.shape != (2, 2):
        raise ShapeError(f"expected a 2x2 polarization state, got {rho.matrix.shape}")


def detection_probability(rho_pol: DensityOperator, d: MeasurementDirection) -> float:
    """Probability that the photon exits at the port aligned with ``d``."""
    _check_qubit(rho_pol)
    return born_probability(rho_pol, projector(direction_ket(d)))


def grid_axes(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """Inclusive theta grid on [0, pi] and half-open phi grid on [0, 2 pi)."""
    if n_theta < 2 or n_phi < 2:
        raise ConfigError(f"grid must be at least 2x2, got {n_theta}x{n_phi}")
    thetas = np.minimum(np.arange(n_theta) * pi / (n_theta - 1), pi)
    phis = np.arange(n_phi) * (2 * pi / n_phi)
    return thetas, phis


def q_min_grid(rho_pol: DensityOperator, n_theta: int = DEFAULT_GRID[0], n_phi: int = DEFAULT_GRID[1]) -> DopResult:
    """Exhaustive search of |1 - 2p| over the (theta, phi) grid.

    Ties resolve to the smallest theta, then the smallest phi.
    """
    _check_qubit(rho_pol)
    thetas, phis = grid_axes(n_theta, n_phi)
    m = rho_pol.matrix
    c = np.cos(thetas / 2)[:, None]
    s = np.sin(thetas / 2)[:, None]
    e = np.exp(1j * phis)[None, :]
    # p = <k|rho|k> with k = (c, e s), expanded entrywise
    p = (c * c * m[0, 0] + s * s * m[1, 1] + c * s * (e * m[0, 1] + e.conj() * m[1, 0])).real
    vis = np.abs(1.0 - 2.0 * p)
    flat = int(np.argmax(vis))
    i, j = divmod(flat, n_phi)
    best = float(vis[i, j])
    return DopResult(
        q_min=1.0 - min(best, 1.0),
        argmax_direction=MeasurementDirection(float(thetas[i]), float(phis[j])),
        method=Method.GRID,
    )


def q_min_analytic(rho_pol: DensityOperator) -> DopResult:
    """Closed form: p sweeps the eigenvalue interval of rho_pol, so the
    supremum is the Bloch-vector length, reached along the Bloch vector."""
    _check_qubit(rho_pol)
    length = bloch_length(rho_pol)
    direction = direction_of(bloch_vector(rho_pol)) if length > 0 else MeasurementDirection(0.0, 0.0)
    return DopResult(q_min=1.0 - length, argmax_direction=direction, method=Method.ANALYTIC)


def dop_of_state(
    psi: PureState,
    method: Method | str = Method.ANALYTIC,
    grid: tuple[int, int] = DEFAULT_GRID,
) -> DopResult:
    if not isinstance(psi, PureState):
        # a mixed total state carries classical ignorance; no silent purification
        raise ConfigError(f"dop_of_state needs a pure total state, got {type(psi).__name__}")
    rho = require_density(reduced_polarization(psi))
    if Method(method) is Method.GRID:
        return q_min_grid(rho, *grid)
    return q_min_analytic(rho)
