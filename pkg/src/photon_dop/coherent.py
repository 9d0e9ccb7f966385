"""Two-photon singlet projection.

Two photons in the same pure polarization state never project onto the
singlet. A source whose pulses are each polarized (even if scrambled from
pulse to pulse) therefore gives zero singlet probability, whereas genuinely
unpolarized independent photons give 1/4. Pairs in the triplet subspace
also give zero, so a zero is not proof of identical polarizations.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import seeding
from .errors import ConfigError, ShapeError
from .polarization import named_state
from .qcore import DensityOperator, PureState, SubsystemLayout, born_probability, projector
from .scrambler import haar_unitaries

PAIR_LAYOUT = SubsystemLayout.of(("pol_a", 2), ("pol_b", 2))
VERDICT_THRESHOLD = 1e-10

_R = 1 / np.sqrt(2)
# ordering |HH>, |HV>, |VH>, |VV>
BELL_AMPLITUDES = {
    "PHI_PLUS": (_R, 0, 0, _R),
    "PHI_MINUS": (_R, 0, 0, -_R),
    "PSI_PLUS": (0, _R, _R, 0),
    "PSI_MINUS": (0, _R, -_R, 0),
}
SWAP = np.eye(4)[[0, 2, 1, 3]]


class PairKind(str, enum.Enum):
    IDENTICAL_PURE = "IDENTICAL_PURE"
    PRODUCT = "PRODUCT"
    INDEPENDENT_MIXED = "INDEPENDENT_MIXED"
    BELL = "BELL"


class Verdict(str, enum.Enum):
    POLARIZED_PER_PULSE = "POLARIZED_PER_PULSE"
    UNPOLARIZED_CONSISTENT = "UNPOLARIZED_CONSISTENT"


@dataclass(frozen=True)
class PairSampler:
    """Source of photon pairs.

    IDENTICAL_PURE draws a Haar-random polarization per pair and emits two
    copies of it. PRODUCT emits ``a`` (x) ``b`` every time; INDEPENDENT_MIXED
    emits two maximally mixed photons; BELL emits the Bell state ``which``.
    """

    kind: PairKind
    a: str = "H"
    b: str = "V"
    which: str = "PSI_MINUS"

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", PairKind(self.kind))
        except ValueError:
            raise ConfigError(f"unknown pair sampler {self.kind!r}") from None
        if self.kind is PairKind.BELL and self.which not in BELL_AMPLITUDES:
            raise ConfigError(f"unknown Bell state {self.which!r}; expected one of {sorted(BELL_AMPLITUDES)}")
        if self.kind is PairKind.PRODUCT:
            named_state(self.a), named_state(self.b)


def bell_state(which: str) -> PureState:
    try:
        return PureState(np.array(BELL_AMPLITUDES[which], dtype=complex), PAIR_LAYOUT)
    except KeyError:
        raise ConfigError(f"unknown Bell state {which!r}") from None


def singlet_state() -> PureState:
    """(|HV> - |VH>)/sqrt(2)"""
    return bell_state("PSI_MINUS")


def _pair(rho: DensityOperator) -> DensityOperator:
    if rho.matrix.shape != (4, 4):
        raise ShapeError(f"expected a two-photon polarization state, got shape {rho.matrix.shape}")
    return rho


def singlet_projection_probability(pair: DensityOperator) -> float:
    return born_probability(_pair(pair), projector(singlet_state()))


def bell_probabilities(pair: DensityOperator) -> dict[str, float]:
    """Projection probability onto each of the four Bell states."""
    _pair(pair)
    return {name: born_probability(pair, projector(bell_state(name))) for name in BELL_AMPLITUDES}


def pair_density(sampler: PairSampler) -> DensityOperator:
    """Density operator of a deterministic sampler (not IDENTICAL_PURE)."""
    if sampler.kind is PairKind.PRODUCT:
        amps = np.kron(named_state(sampler.a).amplitudes, named_state(sampler.b).amplitudes)
        return PureState(amps, PAIR_LAYOUT).density()
    if sampler.kind is PairKind.BELL:
        return DensityOperator(projector(bell_state(sampler.which)), PAIR_LAYOUT)
    if sampler.kind is PairKind.INDEPENDENT_MIXED:
        return DensityOperator(np.kron(np.eye(2) / 2, np.eye(2) / 2), PAIR_LAYOUT)
    raise ConfigError("IDENTICAL_PURE pairs are random; sample them with beam_test")


@dataclass(frozen=True)
class BeamTestReport:
    n: int
    mean_singlet_probability: float
    max_singlet_probability: float
    verdict: Verdict

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_singlet_probability": self.mean_singlet_probability,
            "max_singlet_probability": self.max_singlet_probability,
            "verdict": self.verdict.value,
        }


def _identical_pure_probs(rng: np.random.Generator, n: int) -> np.ndarray:
    kets = haar_unitaries(rng, n)[:, :, 0]
    pairs = np.einsum("ni,nj->nij", kets, kets).reshape(n, 4)
    amp = pairs @ singlet_state().amplitudes.conj()
    return np.abs(amp) ** 2


def beam_test(sampler: PairSampler, n: int, seed: int = 0, jobs: int = 1) -> BeamTestReport:
    if n < 1:
        raise ConfigError("beam test needs at least one pair")
    if sampler.kind is PairKind.IDENTICAL_PURE:
        parts = seeding.map_blocks(lambda rng, lo, hi: _identical_pure_probs(rng, hi - lo), n, seed, "singlet-test", jobs)
        probs = np.concatenate(parts)
        mean, peak = float(np.mean(probs)), float(np.max(probs))
    else:
        # every pair is drawn from the same state, so the mean is exact
        mean = peak = singlet_projection_probability(pair_density(sampler))
    verdict = Verdict.POLARIZED_PER_PULSE if mean <= VERDICT_THRESHOLD else Verdict.UNPOLARIZED_CONSISTENT
    return BeamTestReport(n=n, mean_singlet_probability=mean, max_singlet_probability=peak, verdict=verdict)
