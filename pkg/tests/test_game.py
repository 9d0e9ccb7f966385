import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photon_dop.errors import ConfigError
from photon_dop.game import (
    Scenario,
    ScenarioConfig,
    binary_entropy,
    mutual_information,
    run_game,
    strategy_table,
    theoretical_pwin,
)
from photon_dop.polarization import MeasurementDirection

STATISTICAL_TRIALS = 100_000


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


class TestMutualInformation:
    def test_perfect_correlation(self):
        assert mutual_information([[500, 0], [0, 500]]) == pytest.approx(1.0, abs=1e-12)

    def test_independent(self):
        assert mutual_information([[250, 250], [250, 250]]) == pytest.approx(0.0, abs=1e-12)

    def test_bsc_exact_joint(self):
        eps = 0.11
        joint = np.array([[0.5 * (1 - eps), 0.5 * eps], [0.5 * eps, 0.5 * (1 - eps)]]) * 1e6
        assert mutual_information(joint) == pytest.approx(1 - h2(eps), abs=1e-12)
        assert mutual_information(joint) == pytest.approx(0.500084, abs=1e-6)

    def test_zero_counts(self):
        with pytest.raises(ConfigError):
            mutual_information([[0, 0], [0, 0]])

    def test_binary_entropy(self):
        assert binary_entropy(0.5) == 1.0
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(0.11) == pytest.approx(h2(0.11), abs=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 10_000), min_size=4, max_size=4).filter(lambda c: sum(c) > 0))
    def test_bounded(self, c):
        mi = mutual_information([c[:2], c[2:]])
        assert 0.0 <= mi <= 1.0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 1000), st.integers(1, 1000), st.integers(1, 1000), st.integers(1, 1000))
    def test_product_joint_is_zero(self, a, b, c, d):
        # outer product of marginals (a, b) x (c, d)
        assert mutual_information(np.outer([a, b], [c, d])) == pytest.approx(0.0, abs=1e-12)


class TestConfig:
    def test_flip_prob_range(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, flip_prob=0.7)

    def test_trials(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, trials=0)

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError):
            ScenarioConfig("COIN_TOSS")

    def test_seed(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, seed=-1)


class TestTheory:
    @pytest.mark.parametrize("eps", [0.0, 0.2, 0.5])
    def test_values(self, eps):
        expect = {
            Scenario.FIXED_BASIS_HV_MIX: 1 - eps,
            Scenario.FIXED_BASIS_DIAG_MIX: 0.5,
            Scenario.FREE_BASIS_WITH_INFO: 1 - eps,
            Scenario.ENTANGLED_RESTRICTED: 0.5,
            Scenario.ENTANGLED_RECOVERY: 1.0,
        }
        for sc, value in expect.items():
            assert theoretical_pwin(ScenarioConfig(sc, flip_prob=eps)) == pytest.approx(value)

    def test_strategy_table_matches_theory(self):
        # exact expected win probability from the Born table, no sampling
        for sc in Scenario:
            for eps in (0.0, 0.11, 0.5):
                cfg = ScenarioConfig(sc, flip_prob=eps, bob_direction=MeasurementDirection(1.0, 2.0))
                p_d0, guess = strategy_table(cfg)
                total = 0.0
                for a in (0, 1):
                    for b in (0, 1):
                        w = 0.5 * ((1 - eps) if a == b else eps)
                        total += w * (p_d0[a, b] if guess[b] == 0 else 1 - p_d0[a, b])
                assert total == pytest.approx(theoretical_pwin(cfg), abs=1e-12)

    def test_restricted_reduced_state_is_mixed(self):
        p_d0, _ = strategy_table(ScenarioConfig(Scenario.ENTANGLED_RESTRICTED, bob_direction=MeasurementDirection(0.4, 5.0)))
        np.testing.assert_allclose(p_d0, 0.5, atol=1e-12)


class TestRunGame:
    def test_hv_no_noise_always_wins(self):
        rep = run_game(ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, trials=STATISTICAL_TRIALS, seed=1))
        assert rep.p_win_hat == 1.0
        assert rep.counts[0][1] == 0 and rep.counts[1][0] == 0

    def test_diag_fixed_basis_is_coin_toss(self):
        rep = run_game(ScenarioConfig(Scenario.FIXED_BASIS_DIAG_MIX, trials=STATISTICAL_TRIALS, seed=2))
        assert abs(rep.p_win_hat - 0.5) <= 3 * rep.std_err
        # with no flips the plug-in estimate is H(A), just under one bit
        a0 = sum(rep.counts[0]) / rep.trials
        assert rep.mutual_info_bits == pytest.approx(h2(a0), abs=1e-12)

    def test_recovery_all_d0(self):
        rep = run_game(ScenarioConfig(Scenario.ENTANGLED_RECOVERY, trials=10_000, seed=3, theta_phase=0.8))
        assert rep.p_win_hat == 1.0
        assert rep.counts[0][1] == 0 and rep.counts[1][1] == 0

    def test_recovery_ignores_side_channel(self):
        rep = run_game(ScenarioConfig(Scenario.ENTANGLED_RECOVERY, flip_prob=0.5, trials=10_000, seed=3))
        assert rep.p_win_hat == 1.0

    def test_free_basis_with_info_certain(self):
        rep = run_game(ScenarioConfig(Scenario.FREE_BASIS_WITH_INFO, trials=10_000, seed=4))
        assert rep.p_win_hat == 1.0

    @pytest.mark.parametrize("sc", list(Scenario))
    @pytest.mark.parametrize("eps", [0.0, 0.11, 0.5])
    def test_within_three_sigma_of_theory(self, sc, eps):
        rep = run_game(ScenarioConfig(sc, flip_prob=eps, trials=STATISTICAL_TRIALS, seed=100))
        assert abs(rep.p_win_hat - rep.theoretical_p_win) <= 3 * rep.std_err
        assert sum(map(sum, rep.counts)) == STATISTICAL_TRIALS
        assert 0.0 <= rep.mutual_info_bits <= 1.0

    def test_information_endpoints(self):
        hi = run_game(ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, flip_prob=0.0, trials=STATISTICAL_TRIALS, seed=5))
        lo = run_game(ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, flip_prob=0.5, trials=STATISTICAL_TRIALS, seed=5))
        assert hi.p_win_hat == 1.0 and hi.info_prediction == pytest.approx(1.0, abs=1e-4)
        assert abs(lo.p_win_hat - 0.5) <= 3 * lo.std_err
        assert lo.mutual_info_bits <= 1e-3

    def test_intermediate_eps_reported(self):
        # (1 + I)/2 and the BSC win rate disagree away from the endpoints
        rep = run_game(ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, flip_prob=0.11, trials=STATISTICAL_TRIALS, seed=6))
        assert rep.mutual_info_bits == pytest.approx(1 - h2(0.11), abs=0.01)
        assert rep.info_prediction < rep.p_win_hat - 0.1

    def test_restricted_grid_bound(self):
        worst = 0.0
        for theta in np.linspace(0, np.pi, 5):
            for phi in np.linspace(0, 2 * np.pi, 8, endpoint=False):
                cfg = ScenarioConfig(Scenario.ENTANGLED_RESTRICTED, trials=10_000, seed=8, flip_prob=0.0,
                                     bob_direction=MeasurementDirection(theta, phi))
                rep = run_game(cfg)
                worst = max(worst, rep.p_win_hat - (0.5 + 3 * rep.std_err))
        assert worst <= 0.0

    def test_deterministic(self):
        cfg = ScenarioConfig(Scenario.FIXED_BASIS_DIAG_MIX, flip_prob=0.2, trials=30_000, seed=77)
        assert run_game(cfg) == run_game(cfg)

    def test_parallel_identical(self):
        cfg = ScenarioConfig(Scenario.FREE_BASIS_WITH_INFO, flip_prob=0.3, trials=50_000, seed=78)
        assert run_game(cfg, jobs=1) == run_game(cfg, jobs=4)

    def test_seed_matters(self):
        a = run_game(ScenarioConfig(Scenario.FIXED_BASIS_DIAG_MIX, trials=10_000, seed=1))
        b = run_game(ScenarioConfig(Scenario.FIXED_BASIS_DIAG_MIX, trials=10_000, seed=2))
        assert a != b

    def test_as_dict(self):
        d = run_game(ScenarioConfig(Scenario.FIXED_BASIS_HV_MIX, trials=100, seed=1)).as_dict()
        assert d["p_win_hat"] == 1.0 and d["std_err"] == 0.0
        assert set(d) >= {"counts", "info_counts", "mutual_info_bits", "theoretical_p_win", "info_prediction"}
