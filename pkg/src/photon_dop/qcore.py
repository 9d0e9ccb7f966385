"""Dense linear algebra for pure states and density operators on small
composite Hilbert spaces.

Index convention: row-major Kronecker ordering, the first factor of a
layout is the most significant digit. Matrices are plain complex
``numpy`` arrays; the state/operator classes pair one with a layout and
are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import LabelCollision, LabelError, NumericalError, ShapeError

ALGEBRA_TOL = 1e-12
SLACK_TOL = 1e-10
MAX_DIM = 64


def _frozen(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    if arr.ndim != ndim:
        raise ShapeError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered tensor factors ``(label, dim)``."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        factors = tuple((str(label), int(dim)) for label, dim in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise ShapeError("layout needs at least one factor")
        labels = [label for label, _ in factors]
        if len(set(labels)) != len(labels):
            raise LabelCollision(f"duplicate subsystem labels in {labels}")
        for label, dim in factors:
            if dim < 2:
                raise ShapeError(f"factor {label!r} has dim {dim}; need >= 2")
            if label == "pol" and dim != 2:
                raise ShapeError(f"'pol' factor must have dim 2, got {dim}")
        if self.dim > MAX_DIM:
            raise ShapeError(f"total dimension {self.dim} exceeds {MAX_DIM}")

    @classmethod
    def of(cls, *factors: tuple[str, int]) -> SubsystemLayout:
        return cls(tuple(factors))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"no subsystem labelled {label!r} in {list(self.labels)}") from None

    def dim_of(self, label: str) -> int:
        return self.dims[self.index(label)]

    def __add__(self, other: SubsystemLayout) -> SubsystemLayout:
        return SubsystemLayout(self.factors + other.factors)


POL = SubsystemLayout.of(("pol", 2))


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    layout: SubsystemLayout = POL

    def __post_init__(self):
        amps = _frozen(self.amplitudes, 1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape[0] != self.layout.dim:
            raise ShapeError(f"{amps.shape[0]} amplitudes for a layout of dimension {self.layout.dim}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ALGEBRA_TOL:
            raise NumericalError(f"state norm {norm!r} differs from 1 by more than {ALGEBRA_TOL}")

    @classmethod
    def normalized(cls, amplitudes: Iterable[complex], layout: SubsystemLayout = POL) -> PureState:
        amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NumericalError("cannot normalize the zero vector")
        return cls(amps / norm, layout)

    @classmethod
    def basis(cls, index: int, layout: SubsystemLayout = POL) -> PureState:
        amps = np.zeros(layout.dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps, layout)

    def overlap(self, other: PureState) -> complex:
        """<self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> DensityOperator:
        return DensityOperator(projector(self), self.layout)


@dataclass(frozen=True)
class DensityOperator:
    """Square matrix with a layout. Physicality is checked by
    :func:`validate_density`, not at construction."""

    matrix: np.ndarray
    layout: SubsystemLayout = POL

    def __post_init__(self):
        m = _frozen(self.matrix, 2)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.layout.dim, self.layout.dim):
            raise ShapeError(f"matrix shape {m.shape} does not match layout dimension {self.layout.dim}")

    @property
    def dim(self) -> int:
        return self.layout.dim

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class UnitaryOp:
    matrix: np.ndarray
    layout: SubsystemLayout = POL

    def __post_init__(self):
        m = _frozen(self.matrix, 2)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.layout.dim, self.layout.dim):
            raise ShapeError(f"matrix shape {m.shape} does not match layout dimension {self.layout.dim}")

    @property
    def dagger(self) -> UnitaryOp:
        return UnitaryOp(self.matrix.conj().T, self.layout)

    def __matmul__(self, other: UnitaryOp) -> UnitaryOp:
        if self.layout != other.layout:
            raise ShapeError("cannot compose operators on different layouts")
        return UnitaryOp(self.matrix @ other.matrix, self.layout)


I2 = UnitaryOp(np.eye(2))
X = UnitaryOp(np.array([[0, 1], [1, 0]]))


def tensor_state(a: PureState, b: PureState) -> PureState:
    layout = a.layout + b.layout
    return PureState(np.kron(a.amplitudes, b.amplitudes), layout)


def tensor_op(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def embed(op: np.ndarray, layout: SubsystemLayout, label: str) -> np.ndarray:
    """Lift an operator on factor ``label`` to the whole space (identity elsewhere)."""
    k = layout.index(label)
    op = np.asarray(op, dtype=complex)
    if op.shape != (layout.dims[k],) * 2:
        raise ShapeError(f"operator shape {op.shape} does not fit factor {label!r} of dim {layout.dims[k]}")
    out = np.ones((1, 1), dtype=complex)
    for i, d in enumerate(layout.dims):
        out = np.kron(out, op if i == k else np.eye(d))
    return out


def apply_unitary(u: UnitaryOp, s: PureState) -> PureState:
    if u.layout.dims != s.layout.dims:
        raise ShapeError(f"operator dims {u.layout.dims} do not match state dims {s.layout.dims}")
    return PureState(u.matrix @ s.amplitudes, s.layout)


def projector(s: PureState) -> np.ndarray:
    """|s><s|"""
    v = s.amplitudes
    return np.outer(v, v.conj())


def born_probability(rho: DensityOperator, p: np.ndarray) -> float:
    """tr(P rho) for a projector-like ``P``, clamped to [0, 1] within slack."""
    p = np.asarray(p, dtype=complex)
    if p.shape != rho.matrix.shape:
        raise ShapeError(f"projector shape {p.shape} does not match state shape {rho.matrix.shape}")
    val = np.trace(p @ rho.matrix)
    if abs(val.imag) > ALGEBRA_TOL:
        raise NumericalError(f"Born probability has imaginary part {val.imag!r}")
    prob = float(val.real)
    if prob < -SLACK_TOL or prob > 1 + SLACK_TOL:
        raise NumericalError(f"Born probability {prob!r} outside [0, 1] beyond slack")
    return min(max(prob, 0.0), 1.0)


def partial_trace(rho: DensityOperator, keep: str) -> DensityOperator:
    """Reduced state of factor ``keep``; every other factor is traced out."""
    layout = rho.layout
    k = layout.index(keep)
    dims = layout.dims
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # einsum: contract row/col index pairs of every factor except k
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for i in range(n):
        if i != k:
            cols[i] = rows[i]
    spec = "".join(rows) + "".join(cols) + "->" + rows[k] + cols[k]
    return DensityOperator(np.einsum(spec, t), SubsystemLayout(((keep, dims[k]),)))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of ``a - b`` (Hermitian inputs)."""
    diff = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


@dataclass(frozen=True)
class Violation:
    invariant: str
    deviation: float
    tolerance: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def names(self) -> list[str]:
        return [v.invariant for v in self.violations]


def _hermitian_eigvals(m: np.ndarray) -> np.ndarray:
    if m.shape == (2, 2):
        # closed form for qubits
        a, d = m[0, 0].real, m[1, 1].real
        mean = 0.5 * (a + d)
        r = np.hypot(0.5 * (a - d), abs(m[0, 1]))
        return np.array([mean - r, mean + r])
    return np.linalg.eigvalsh(m)


def validate_density(rho: DensityOperator) -> ValidationReport:
    m = rho.matrix
    found = []
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > ALGEBRA_TOL:
        found.append(Violation("hermitian", herm, ALGEBRA_TOL))
    tr = abs(np.trace(m) - 1.0)
    if tr > ALGEBRA_TOL:
        found.append(Violation("trace", float(tr), ALGEBRA_TOL))
    hm = 0.5 * (m + m.conj().T)
    lowest = float(np.min(_hermitian_eigvals(hm)))
    if lowest < -SLACK_TOL:
        found.append(Violation("positive_semidefinite", -lowest, SLACK_TOL))
    return ValidationReport(tuple(found))


def validate_unitary(u: UnitaryOp) -> ValidationReport:
    m = u.matrix
    dev = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
    if dev > SLACK_TOL:
        return ValidationReport((Violation("unitary", dev, SLACK_TOL),))
    return ValidationReport()


def require_density(rho: DensityOperator) -> DensityOperator:
    report = validate_density(rho)
    if not report:
        raise NumericalError(f"invalid density operator: {report.violations}")
    return rho


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out
