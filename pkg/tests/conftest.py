import numpy as np
import pytest
from hypothesis import strategies as st

from photon_dop.qcore import DensityOperator, PureState, SubsystemLayout


def random_ket(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_state(rng, layout):
    return PureState(random_ket(rng, layout.dim), layout)


def random_qubit_unitary(rng):
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, _ = np.linalg.qr(z)
    return q


def random_qubit_density(rng):
    """Mixture of two random pure qubits with a random weight."""
    a, b = random_ket(rng, 2), random_ket(rng, 2)
    w = rng.random()
    return DensityOperator(w * np.outer(a, a.conj()) + (1 - w) * np.outer(b, b.conj()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


POL_TIME = SubsystemLayout.of(("pol", 2), ("time", 2))

seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=0.0, max_value=np.pi, allow_nan=False)
phases = st.floats(min_value=0.0, max_value=2 * np.pi, allow_nan=False)


_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def check(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _CRITERIA.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
