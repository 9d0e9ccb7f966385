"""Monte Carlo of the detector-guessing game between Alice and Bob.

Every trial: Alice draws a uniform bit ``a`` selecting one of two states;
a binary symmetric side channel with crossover ``flip_prob`` hands Bob the
bit ``b``; Bob configures his analyzer and names the detector he expects
to click; the click is sampled from the Born rule. Detector D0 is the
|H> output of Bob's polarizing beamsplitter, D1 the |V> output.

Scenarios:

FIXED_BASIS_HV_MIX
    Alice sends |H> or |V>; Bob measures H/V and names detector ``b``.
FIXED_BASIS_DIAG_MIX
    Alice sends |+45> or |-45>; same fixed H/V analyzer. This is also the
    50/50 beamsplitter game.
FREE_BASIS_WITH_INFO
    Alice sends |+45> or |-45>; Bob rotates his analyzer so the state his
    bit indicates exits at D0, and names D0.
ENTANGLED_RESTRICTED
    Alice sends the time-bin state scrambled with {I, X} (a=0) or {X, I}
    (a=1). Bob may only apply U_pol (x) I, analyzer fixed at
    ``bob_direction``; he names the likelier detector for the state his
    bit indicates, ties to D0.
ENTANGLED_RECOVERY
    Alice's photon always carries the {I, X} scrambling, whose schedule Bob
    knows independently of the side channel. He applies the same bin-wise
    schedule before an H/V measurement and names D0, so his bit is unused.
"""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from math import sqrt

import numpy as np

from . import seeding
from .errors import ConfigError
from .polarization import (
    MeasurementDirection,
    bloch_vector,
    direction_ket,
    direction_of,
    measurement_unitary,
    named_state,
)
from .qcore import PureState, born_probability, embed, projector
from .scrambler import IX_SCHEDULE, XI_SCHEDULE, apply_schedule, timebin_input

TIE_TOL = 1e-12


class Scenario(str, enum.Enum):
    FIXED_BASIS_HV_MIX = "FIXED_BASIS_HV_MIX"
    FIXED_BASIS_DIAG_MIX = "FIXED_BASIS_DIAG_MIX"
    FREE_BASIS_WITH_INFO = "FREE_BASIS_WITH_INFO"
    ENTANGLED_RESTRICTED = "ENTANGLED_RESTRICTED"
    ENTANGLED_RECOVERY = "ENTANGLED_RECOVERY"


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario
    flip_prob: float = 0.0
    trials: int = 100_000
    seed: int = 0
    bob_direction: MeasurementDirection = field(default_factory=lambda: MeasurementDirection(0.0, 0.0))
    theta_phase: float = 0.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "scenario", Scenario(self.scenario))
        except ValueError:
            raise ConfigError(f"unknown scenario {self.scenario!r}") from None
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        eps = float(self.flip_prob)
        if not 0.0 <= eps <= 0.5:
            raise ConfigError(f"flip_prob must lie in [0, 0.5], got {self.flip_prob!r}")
        object.__setattr__(self, "flip_prob", eps)
        try:
            seeding.check_seed(self.seed)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if not np.isfinite(self.theta_phase):
            raise ConfigError("theta_phase must be finite")


@dataclass(frozen=True)
class GameReport:
    """Aggregated trials.

    ``counts[a][k]`` tallies Alice's bit against the detector that clicked;
    ``info_counts[a][b]`` tallies Alice's bit against Bob's side
    information, and ``mutual_info_bits`` is the plug-in I(A;B) of that
    table.
    """

    trials: int
    wins: int
    counts: tuple[tuple[int, int], tuple[int, int]]
    info_counts: tuple[tuple[int, int], tuple[int, int]]
    mutual_info_bits: float
    theoretical_p_win: float | None

    @property
    def p_win_hat(self) -> float:
        return self.wins / self.trials

    @property
    def std_err(self) -> float:
        p = self.p_win_hat
        return sqrt(p * (1 - p) / self.trials)

    @property
    def info_prediction(self) -> float:
        """(1 + I) / 2 evaluated at the empirical mutual information."""
        return 0.5 * (1 + self.mutual_info_bits)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["counts"] = [list(r) for r in self.counts]
        d["info_counts"] = [list(r) for r in self.info_counts]
        d.update(p_win_hat=self.p_win_hat, std_err=self.std_err, info_prediction=self.info_prediction)
        return d


def mutual_information(counts) -> float:
    """Plug-in mutual information (bits) of a joint count table."""
    joint = np.asarray(counts, dtype=float)
    total = joint.sum()
    if total < 1:
        raise ConfigError("mutual information needs at least one count")
    pxy = joint / total
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    nz = pxy > 0
    mi = float(np.sum(pxy[nz] * np.log2(pxy[nz] / (px * py)[nz])))
    return min(max(mi, 0.0), 1.0) if joint.shape == (2, 2) else max(mi, 0.0)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def theoretical_pwin(cfg: ScenarioConfig) -> float | None:
    eps = cfg.flip_prob
    return {
        Scenario.FIXED_BASIS_HV_MIX: 1 - eps,
        Scenario.FIXED_BASIS_DIAG_MIX: 0.5,
        Scenario.FREE_BASIS_WITH_INFO: 1 - eps,
        Scenario.ENTANGLED_RESTRICTED: 0.5,
        Scenario.ENTANGLED_RECOVERY: 1.0,
    }.get(cfg.scenario)


def _alice_states(cfg: ScenarioConfig) -> tuple[PureState, PureState]:
    if cfg.scenario is Scenario.FIXED_BASIS_HV_MIX:
        return named_state("H"), named_state("V")
    if cfg.scenario in (Scenario.FIXED_BASIS_DIAG_MIX, Scenario.FREE_BASIS_WITH_INFO):
        return named_state("D"), named_state("A")
    psi_in = timebin_input(cfg.theta_phase)
    if cfg.scenario is Scenario.ENTANGLED_RECOVERY:
        fixed = apply_schedule(psi_in, IX_SCHEDULE)
        return fixed, fixed
    return apply_schedule(psi_in, IX_SCHEDULE), apply_schedule(psi_in, XI_SCHEDULE)


def strategy_table(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Born probability of D0 for each (Alice bit, Bob bit), and Bob's guess per bit.

    Returns ``(p_d0, guess)`` with shapes (2, 2) and (2,).
    """
    states = _alice_states(cfg)
    p_d0 = np.zeros((2, 2))
    guess = np.zeros(2, dtype=np.int64)
    sc = cfg.scenario
    if sc in (Scenario.FIXED_BASIS_HV_MIX, Scenario.FIXED_BASIS_DIAG_MIX):
        d0 = projector(named_state("H"))
        for a, s in enumerate(states):
            p_d0[a, :] = born_probability(s.density(), d0)
        guess[:] = (0, 1)
    elif sc is Scenario.FREE_BASIS_WITH_INFO:
        for b in range(2):
            u = measurement_unitary(_direction_for(states[b])).matrix
            d0 = u @ projector(named_state("H")) @ u.conj().T
            for a, s in enumerate(states):
                p_d0[a, b] = born_probability(s.density(), d0)
    elif sc is Scenario.ENTANGLED_RESTRICTED:
        layout = states[0].layout
        d0 = embed(projector(direction_ket(cfg.bob_direction)), layout, "pol")
        for a, s in enumerate(states):
            p_d0[a, :] = born_probability(s.density(), d0)
        for b in range(2):
            expected = p_d0[b, 0]
            guess[b] = 1 if (1 - expected) > expected + TIE_TOL else 0
    else:
        layout = states[0].layout
        d0 = embed(projector(named_state("H")), layout, "pol")
        for a, s in enumerate(states):
            p_d0[a, :] = born_probability(apply_schedule(s, IX_SCHEDULE).density(), d0)
    return p_d0, guess


def _direction_for(s: PureState) -> MeasurementDirection:
    return direction_of(bloch_vector(s.density()))


def run_game(cfg: ScenarioConfig, jobs: int = 1) -> GameReport:
    p_d0, guess = strategy_table(cfg)
    eps = cfg.flip_prob

    def block(rng, start, stop):
        n = stop - start
        a = rng.integers(0, 2, size=n)
        b = a ^ (rng.random(n) < eps)
        u = rng.random(n)
        det = (u >= p_d0[a, b]).astype(np.int64)
        wins = int(np.count_nonzero(det == guess[b]))
        counts = np.zeros((2, 2), dtype=np.int64)
        info = np.zeros((2, 2), dtype=np.int64)
        np.add.at(counts, (a, det), 1)
        np.add.at(info, (a, b), 1)
        return wins, counts, info

    parts = seeding.map_blocks(block, cfg.trials, cfg.seed, "game", jobs)
    wins = sum(p[0] for p in parts)
    counts = sum(p[1] for p in parts)
    info = sum(p[2] for p in parts)
    return GameReport(
        trials=cfg.trials,
        wins=wins,
        counts=tuple(tuple(int(x) for x in row) for row in counts),
        info_counts=tuple(tuple(int(x) for x in row) for row in info),
        mutual_info_bits=mutual_information(info),
        theoretical_p_win=theoretical_pwin(cfg),
    )
