"""Polarization scramblers as time-varying unitaries.

Two regimes are modelled. PER_PULSE draws one unitary per emitted photon,
which only adds classical ignorance about a still-pure polarization.
PER_BIN applies a different unitary to each time bin of one photon; when
the bins are coherent this entangles polarization with arrival time.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import pi

import numpy as np

from . import seeding
from .errors import ConfigError, ScheduleError
from .polarization import stokes_of
from .qcore import (
    I2,
    X,
    DensityOperator,
    PureState,
    SubsystemLayout,
    UnitaryOp,
    apply_unitary,
    kron_all,
    trace_distance,
    validate_unitary,
)

TIMEBIN_LAYOUT = SubsystemLayout.of(("time", 2), ("pol", 2))


class ScramblerKind(str, enum.Enum):
    PER_PULSE = "PER_PULSE"
    PER_BIN = "PER_BIN"


class Sampler(str, enum.Enum):
    IX_COINFLIP = "IX_COINFLIP"
    HAAR = "HAAR"
    FIXED = "FIXED"


@dataclass(frozen=True)
class TimeSchedule:
    """One 2x2 polarization unitary per time bin, early bin first."""

    bins: tuple[UnitaryOp, ...]

    def __post_init__(self):
        bins = tuple(b if isinstance(b, UnitaryOp) else UnitaryOp(b) for b in self.bins)
        object.__setattr__(self, "bins", bins)
        if not bins:
            raise ScheduleError("schedule needs at least one bin")
        for k, u in enumerate(bins):
            if u.matrix.shape != (2, 2):
                raise ScheduleError(f"bin {k} is not a polarization unitary")
            report = validate_unitary(u)
            if not report:
                raise ScheduleError(f"bin {k} is not unitary: {report.violations}")

    @classmethod
    def of(cls, *bins) -> TimeSchedule:
        return cls(tuple(bins))

    def __len__(self) -> int:
        return len(self.bins)


IX_SCHEDULE = TimeSchedule.of(I2, X)
XI_SCHEDULE = TimeSchedule.of(X, I2)


@dataclass(frozen=True)
class ScramblerMode:
    kind: ScramblerKind = ScramblerKind.PER_PULSE
    sampler: Sampler = Sampler.IX_COINFLIP
    fixed: UnitaryOp | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ScramblerKind(self.kind))
        object.__setattr__(self, "sampler", Sampler(self.sampler))
        if self.sampler is Sampler.FIXED and self.fixed is None:
            raise ConfigError("FIXED sampler needs a unitary")


def timebin_input(theta_phase: float = 0.0) -> PureState:
    """(|s> + e^{i theta}|l>)/sqrt(2) tensor |H>, layout [time, pol]."""
    r = 1 / np.sqrt(2)
    return PureState(np.array([r, 0, r * np.exp(1j * theta_phase), 0]), TIMEBIN_LAYOUT)


def schedule_operator(layout: SubsystemLayout, sched: TimeSchedule) -> np.ndarray:
    """Block-diagonal operator: bin k's polarization is rotated by ``sched[k]``."""
    t, p = layout.index("time"), layout.index("pol")
    n_bins = layout.dims[t]
    if len(sched) != n_bins:
        raise ScheduleError(f"schedule has {len(sched)} bins, state has {n_bins} time bins")
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for k, u in enumerate(sched.bins):
        sel = np.zeros((n_bins, n_bins))
        sel[k, k] = 1.0
        factors = [np.eye(d) for d in layout.dims]
        factors[t] = sel
        factors[p] = u.matrix
        total += kron_all(factors)
    return total


def apply_schedule(psi: PureState, sched: TimeSchedule) -> PureState:
    op = UnitaryOp(schedule_operator(psi.layout, sched), psi.layout)
    return apply_unitary(op, psi)


def partial_flip(alpha: float) -> UnitaryOp:
    """Real rotation with <H|U|H> = cos(alpha), alpha in [0, pi/2]."""
    if not 0.0 <= alpha <= pi / 2:
        raise ConfigError(f"alpha must lie in [0, pi/2], got {alpha}")
    c, s = np.cos(alpha), np.sin(alpha)
    return UnitaryOp(np.array([[c, -s], [s, c]]))


def partial_flip_state(alpha: float, theta_phase: float = 0.0) -> PureState:
    return apply_schedule(timebin_input(theta_phase), TimeSchedule.of(I2, partial_flip(alpha)))


def haar_unitaries(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` Haar-distributed 2x2 unitaries, shape (n, 2, 2).

    QR of a complex Ginibre matrix with the phases of R's diagonal
    absorbed into Q.
    """
    z = (rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def haar_random_unitary(rng: np.random.Generator) -> UnitaryOp:
    return UnitaryOp(haar_unitaries(rng, 1)[0])


def sample_unitaries(mode: ScramblerMode, rng: np.random.Generator, n: int) -> np.ndarray:
    if mode.sampler is Sampler.HAAR:
        return haar_unitaries(rng, n)
    if mode.sampler is Sampler.IX_COINFLIP:
        flips = rng.random(n) < 0.5
        return np.where(flips[:, None, None], X.matrix, I2.matrix)
    return np.broadcast_to(mode.fixed.matrix, (n, 2, 2)).copy()


def random_schedule(mode: ScramblerMode, rng: np.random.Generator, n_bins: int = 2) -> TimeSchedule:
    """Independent draw per time bin, for PER_BIN scrambling."""
    return TimeSchedule(tuple(UnitaryOp(u) for u in sample_unitaries(mode, rng, n_bins)))


def pure_bloch_lengths(kets: np.ndarray) -> np.ndarray:
    """Bloch-vector length of each row of an (n, 2) array of qubit kets."""
    a, b = kets[:, 0], kets[:, 1]
    s0 = np.abs(a) ** 2 + np.abs(b) ** 2
    s1 = np.abs(a) ** 2 - np.abs(b) ** 2
    cross = a * b.conj()
    return np.sqrt(s1**2 + 4 * np.abs(cross) ** 2) / s0


@dataclass(frozen=True)
class EnsembleReport:
    n: int
    mean_rho: DensityOperator
    sample_dop: np.ndarray = field(repr=False)
    classical_dop: float
    distance_to_mixed: float

    @property
    def min_sample_dop(self) -> float:
        return float(np.min(self.sample_dop))

    def as_dict(self) -> dict:
        m = self.mean_rho.matrix
        return {
            "n": self.n,
            "mean_rho_real": m.real.tolist(),
            "mean_rho_imag": m.imag.tolist(),
            "classical_dop": self.classical_dop,
            "trace_distance_to_half_identity": self.distance_to_mixed,
            "min_sample_dop": self.min_sample_dop,
            "max_sample_dop": float(np.max(self.sample_dop)),
        }


def per_pulse_ensemble(
    base: PureState,
    mode: ScramblerMode,
    n: int,
    seed: int,
    jobs: int = 1,
) -> EnsembleReport:
    """Scramble ``n`` photons, one unitary per photon, and summarize.

    Each scrambled photon is a pure polarization state, so its own DOP is
    1; the average density operator is what a classical polarimeter sees.
    """
    if ScramblerKind(mode.kind) is not ScramblerKind.PER_PULSE:
        raise ConfigError("per_pulse_ensemble needs a PER_PULSE mode")
    if n < 1:
        raise ConfigError("ensemble size must be at least 1")
    if base.layout.dims != (2,):
        raise ConfigError("base state must be a single polarization qubit")

    def block(rng, start, stop):
        kets = sample_unitaries(mode, rng, stop - start) @ base.amplitudes
        rho_sum = np.einsum("ni,nj->ij", kets, kets.conj())
        return rho_sum, pure_bloch_lengths(kets)

    parts = seeding.map_blocks(block, n, seed, "scramble-ensemble", jobs)
    rho_sum = np.zeros((2, 2), dtype=complex)
    for part, _ in parts:
        rho_sum += part
    mean = DensityOperator(rho_sum / n)
    return EnsembleReport(
        n=n,
        mean_rho=mean,
        sample_dop=np.concatenate([d for _, d in parts]),
        classical_dop=stokes_of(mean).degree,
        distance_to_mixed=trace_distance(mean.matrix, np.eye(2) / 2),
    )
