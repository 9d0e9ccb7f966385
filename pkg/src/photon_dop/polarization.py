"""Polarization qubit: named states, Poincare-sphere directions, Stokes
parameters and the measurement-basis unitaries.

Basis convention |H> = (1, 0), |V> = (0, 1). A direction (theta, phi)
labels the ket cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>, so theta = 0
is |H> and theta = pi is |V>.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi, tau

import numpy as np

from .errors import ConfigError, ShapeError, StateNameError
from .qcore import SLACK_TOL, DensityOperator, PureState, UnitaryOp

_S = 1 / np.sqrt(2)

NAMED_STATES = {
    "H": (1, 0),
    "V": (0, 1),
    "D": (_S, _S),
    "A": (_S, -_S),
    "R": (_S, 1j * _S),
    "L": (_S, -1j * _S),
}


@dataclass(frozen=True)
class MeasurementDirection:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (0.0 <= theta <= pi) or not np.isfinite(phi):
            raise ConfigError(f"theta must lie in [0, pi] and phi be finite, got ({theta}, {phi})")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % tau)


@dataclass(frozen=True)
class StokesVector:
    s0: float
    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        if self.s0 <= 0:
            raise ShapeError(f"s0 must be positive, got {self.s0}")
        if self.s1**2 + self.s2**2 + self.s3**2 > self.s0**2 + SLACK_TOL:
            raise ShapeError("Stokes vector violates the physicality bound")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])

    @property
    def degree(self) -> float:
        """Classical degree of polarization |s|/s0."""
        return min(float(np.linalg.norm(self.vector)) / self.s0, 1.0)


def named_state(name: str) -> PureState:
    try:
        amps = NAMED_STATES[name]
    except KeyError:
        raise StateNameError(f"unknown polarization state {name!r}; expected one of {sorted(NAMED_STATES)}") from None
    return PureState(np.array(amps, dtype=complex))


def direction_ket(d: MeasurementDirection) -> PureState:
    c, s = np.cos(d.theta / 2), np.sin(d.theta / 2)
    return PureState(np.array([c, np.exp(1j * d.phi) * s]))


def measurement_unitary(d: MeasurementDirection) -> UnitaryOp:
    """SU(2) element whose first column is ``direction_ket(d)``.

    Identity at theta = 0; maps |H> to |V> at theta = pi, phi = 0.
    """
    c, s = np.cos(d.theta / 2), np.sin(d.theta / 2)
    e = np.exp(1j * d.phi)
    return UnitaryOp(np.array([[c, -e.conjugate() * s], [e * s, c]]))


def _qubit(rho: DensityOperator) -> np.ndarray:
    if rho.matrix.shape != (2, 2):
        raise ShapeError(f"expected a polarization qubit, got shape {rho.matrix.shape}")
    return rho.matrix


def stokes_of(rho: DensityOperator) -> StokesVector:
    m = _qubit(rho)
    return StokesVector(
        s0=float((m[0, 0] + m[1, 1]).real),
        s1=float((m[0, 0] - m[1, 1]).real),
        s2=float(2 * m[0, 1].real),
        s3=float(-2 * m[0, 1].imag),
    )


def bloch_vector(rho: DensityOperator) -> np.ndarray:
    st = stokes_of(rho)
    return st.vector / st.s0


def bloch_length(rho: DensityOperator) -> float:
    return min(float(np.linalg.norm(bloch_vector(rho))), 1.0)


def direction_of(vec: np.ndarray) -> MeasurementDirection:
    """Poincare-sphere direction of a Bloch vector ``(s1, s2, s3)``.

    Inverse of the map theta, phi -> (cos theta, sin theta cos phi,
    sin theta sin phi) realized by :func:`direction_ket`. The zero vector
    maps to (0, 0).
    """
    s1, s2, s3 = (float(v) for v in vec)
    r = np.sqrt(s1 * s1 + s2 * s2 + s3 * s3)
    if r == 0:
        return MeasurementDirection(0.0, 0.0)
    theta = float(np.arccos(np.clip(s1 / r, -1.0, 1.0)))
    phi = float(np.arctan2(s3, s2)) if (s2 or s3) else 0.0
    return MeasurementDirection(theta, phi)
