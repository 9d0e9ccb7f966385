import numpy as np
import pytest
from hypothesis import given, settings

from photon_dop.errors import ConfigError, ShapeError, StateNameError
from photon_dop.polarization import (
    MeasurementDirection,
    StokesVector,
    bloch_length,
    direction_ket,
    direction_of,
    measurement_unitary,
    named_state,
    stokes_of,
)
from photon_dop.qcore import DensityOperator, PureState, SubsystemLayout, validate_unitary

from conftest import POL_TIME, angles, phases, random_ket, random_qubit_density, random_qubit_unitary

R = 1 / np.sqrt(2)


class TestNamedStates:
    @pytest.mark.parametrize(
        "name, amps",
        [("H", (1, 0)), ("V", (0, 1)), ("D", (R, R)), ("A", (R, -R)), ("R", (R, 1j * R)), ("L", (R, -1j * R))],
    )
    def test_amplitudes(self, name, amps):
        np.testing.assert_allclose(named_state(name).amplitudes, amps, atol=1e-15)

    @pytest.mark.parametrize("pair", [("H", "V"), ("D", "A"), ("R", "L")])
    def test_orthogonal_pairs(self, pair):
        a, b = (named_state(n) for n in pair)
        assert abs(a.overlap(b)) <= 1e-15

    def test_unknown(self):
        with pytest.raises(StateNameError, match="unknown polarization state"):
            named_state("Q")


class TestDirections:
    def test_pole_is_h(self):
        for phi in (0.0, 1.0, 4.0):
            np.testing.assert_allclose(direction_ket(MeasurementDirection(0.0, phi)).amplitudes, (1, 0), atol=1e-15)

    def test_equator(self):
        np.testing.assert_allclose(direction_ket(MeasurementDirection(np.pi / 2, 0)).amplitudes, (R, R), atol=1e-15)
        np.testing.assert_allclose(
            direction_ket(MeasurementDirection(np.pi / 2, np.pi / 2)).amplitudes, named_state("R").amplitudes, atol=1e-15
        )

    def test_south_pole_is_v_up_to_phase(self):
        k = direction_ket(MeasurementDirection(np.pi, 0.3))
        assert abs(abs(k.overlap(named_state("V"))) - 1) <= 1e-15

    def test_phi_wraps(self):
        assert MeasurementDirection(1.0, 2 * np.pi + 0.5).phi == pytest.approx(0.5)

    def test_theta_range(self):
        with pytest.raises(ConfigError):
            MeasurementDirection(-0.1, 0)

    @settings(max_examples=100, deadline=None)
    @given(angles, phases)
    def test_antipode_orthogonal(self, theta, phi):
        a = direction_ket(MeasurementDirection(theta, phi))
        b = direction_ket(MeasurementDirection(np.pi - theta, phi + np.pi))
        assert abs(a.overlap(b)) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(angles, phases)
    def test_unitary_first_column(self, theta, phi):
        d = MeasurementDirection(theta, phi)
        np.testing.assert_array_equal(measurement_unitary(d).matrix[:, 0], direction_ket(d).amplitudes)

    def test_unitary_identity_at_pole(self):
        for phi in (0.0, 2.0):
            np.testing.assert_array_equal(measurement_unitary(MeasurementDirection(0, phi)).matrix, np.eye(2))

    def test_unitary_flip_at_south_pole(self):
        u = measurement_unitary(MeasurementDirection(np.pi, 0)).matrix
        np.testing.assert_allclose(np.abs(u @ [1, 0]), [0, 1], atol=1e-15)
        assert abs(np.linalg.det(u) - 1) <= 1e-15

    def test_unitary_on_grid(self):
        for theta in np.linspace(0, np.pi, 50):
            for phi in np.linspace(0, 2 * np.pi, 50, endpoint=False):
                u = measurement_unitary(MeasurementDirection(theta, phi))
                assert validate_unitary(u).valid
                np.testing.assert_allclose(u.matrix.conj().T @ u.matrix, np.eye(2), atol=1e-12)

    def test_direction_of_inverts_ket(self, rng):
        for _ in range(50):
            d = MeasurementDirection(rng.random() * np.pi, rng.random() * 2 * np.pi)
            back = direction_of(stokes_of(direction_ket(d).density()).vector)
            k1, k2 = direction_ket(d), direction_ket(back)
            assert abs(abs(k1.overlap(k2)) - 1) <= 1e-12


class TestStokes:
    @pytest.mark.parametrize(
        "rho, expected",
        [
            (np.diag([1.0, 0.0]), (1, 1, 0, 0)),
            (np.full((2, 2), 0.5), (1, 0, 1, 0)),
            (np.eye(2) / 2, (1, 0, 0, 0)),
        ],
    )
    def test_values(self, rho, expected):
        s = stokes_of(DensityOperator(rho))
        np.testing.assert_allclose((s.s0, s.s1, s.s2, s.s3), expected, atol=1e-15)

    def test_right_circular_positive(self):
        assert stokes_of(named_state("R").density()).s3 == pytest.approx(1.0)

    def test_wrong_dimension(self):
        with pytest.raises(ShapeError):
            stokes_of(DensityOperator(np.eye(4) / 4, POL_TIME))

    def test_unphysical_vector_rejected(self):
        with pytest.raises(ShapeError):
            StokesVector(1.0, 1.0, 1.0, 0.0)

    def test_bound_equality_iff_pure(self, rng):
        for _ in range(50):
            pure = PureState(random_ket(rng, 2)).density()
            mixed = random_qubit_density(rng)
            for rho in (pure, mixed):
                s = stokes_of(rho)
                gap = s.s0**2 - (s.s1**2 + s.s2**2 + s.s3**2)
                assert gap >= -1e-10
                is_pure = abs(rho.purity() - 1) <= 1e-10
                assert (abs(gap) <= 1e-10) == is_pure


class TestBlochLength:
    def test_pure(self):
        assert bloch_length(named_state("D").density()) == pytest.approx(1.0, abs=1e-15)

    def test_mixed(self):
        assert bloch_length(DensityOperator(np.eye(2) / 2)) == 0.0

    def test_three_quarter_mixture(self):
        # s1 = 0.75 - 0.25
        assert bloch_length(DensityOperator(np.diag([0.75, 0.25]))) == pytest.approx(0.5, abs=1e-15)

    def test_purity_identity(self, rng):
        for _ in range(100):
            rho = random_qubit_density(rng)
            assert bloch_length(rho) == pytest.approx(np.sqrt(max(2 * rho.purity() - 1, 0)), abs=1e-10)

    def test_conjugation_invariant(self, rng):
        for _ in range(100):
            rho = random_qubit_density(rng)
            u = random_qubit_unitary(rng)
            rotated = DensityOperator(u @ rho.matrix @ u.conj().T)
            assert abs(bloch_length(rotated) - bloch_length(rho)) <= 1e-12

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            bloch_length(DensityOperator(np.eye(3) / 3, SubsystemLayout.of(("time", 3))))
