import numpy as np
import pytest

from tubal_solve.algebra import Tensor3, tprod
from tubal_solve.errors import ConfigError
from tubal_solve.sensing import NoiseSpec, make_gaussian_operator
from tubal_solve.solvers import (
    EarlyStopMonitor,
    SolverConfig,
    make_ground_truth,
    make_measurements,
    run_with_early_stopping,
    split,
    validation_loss,
    validation_size_sufficient,
)


@pytest.fixture
def instance():
    truth = make_ground_truth(6, 2, 2, seed=3)
    op = make_gaussian_operator(6, 2, 10 * 6 * 2 * 2, seed=3)
    y, _ = make_measurements(truth.X_star, op, NoiseSpec.gaussian(1e-3, seed=3))
    return truth, op, y


class TestSplit:
    def test_sizes(self):
        plan = split(100, 0.05, seed=0)
        assert plan.m_val == 5
        assert plan.m_train == 95

    def test_partition(self):
        plan = split(57, 0.2, seed=4)
        combined = np.concatenate([plan.train_indices, plan.val_indices])
        np.testing.assert_array_equal(np.sort(combined), np.arange(57))
        assert not set(plan.train_indices) & set(plan.val_indices)

    def test_two_measurements(self):
        plan = split(2, 0.5, seed=0)
        assert plan.m_train == plan.m_val == 1

    def test_deterministic(self):
        a, b = split(40, 0.1, seed=9), split(40, 0.1, seed=9)
        np.testing.assert_array_equal(a.val_indices, b.val_indices)
        assert not np.array_equal(a.val_indices, split(40, 0.1, seed=10).val_indices)

    @pytest.mark.parametrize(
        "m, val_frac", [(100, 0.0), (100, 1.0), (1, 0.5), (10, 0.01), (10, 0.99)]
    )
    def test_rejects_empty_sides(self, m, val_frac):
        with pytest.raises(ConfigError):
            split(m, val_frac, seed=0)

    def test_indices_are_read_only(self):
        plan = split(10, 0.3, seed=0)
        with pytest.raises(ValueError):
            plan.val_indices[0] = 0


class TestValidationLoss:
    def test_exact_factor_noiseless(self):
        truth = make_ground_truth(5, 2, 2, seed=1)
        op = make_gaussian_operator(5, 2, 20, seed=1)
        y, _ = make_measurements(truth.X_star, op)
        assert validation_loss(truth.X_factor, op, y) == pytest.approx(0.0, abs=1e-24)

    def test_zero_iterate(self, instance):
        _, op, y = instance
        zero = Tensor3.zeros(6, 2, 2)
        assert validation_loss(zero, op, y, normalize=False) == pytest.approx(0.25 * y @ y)
        assert validation_loss(zero, op, y) == pytest.approx(0.25 * (y @ y) / op.m)

    def test_matches_per_measurement_sum(self, instance, rng):
        _, op, y = instance
        U = Tensor3(rng.standard_normal((6, 3, 2)))
        estimate = tprod(U, U.T)
        residuals = [
            y[i] - float(np.sum(op.measurement(i).data * estimate.data)) for i in range(op.m)
        ]
        expected = 0.25 * sum(r * r for r in residuals)
        assert validation_loss(U, op, y, normalize=False) == pytest.approx(expected, rel=1e-12)


class TestMonitor:
    def test_ties_go_to_the_earliest_iteration(self):
        values = iter([3.0, 1.0, 2.0, 1.0, 1.0])
        monitor = EarlyStopMonitor(lambda state: next(values))
        for t in range(5):
            monitor(t, f"state{t}")
        assert monitor.best_iteration == 1
        assert monitor.best_state == "state1"
        assert monitor.curve == [3.0, 1.0, 2.0, 1.0, 1.0]

    def test_window_start_skips_early_iterations(self):
        values = iter([0.5, 1.0, 0.7])
        monitor = EarlyStopMonitor(lambda state: next(values), window_start=1)
        for t in range(3):
            monitor(t, t)
        assert monitor.best_iteration == 2
        assert monitor.best_loss == 0.7
        assert len(monitor.curve) == 3
        assert monitor.window == [1.0, 0.7]


class TestRunWithEarlyStopping:
    def test_argmin_of_the_curve(self, instance):
        truth, op, y = instance
        plan = split(op.m, 0.1, seed=3)
        result = run_with_early_stopping(
            op, y, SolverConfig(R=4, T=60, alpha=1e-3), plan, truth=truth
        )
        curve = result.val_loss_curve
        assert curve.shape == (60,)
        assert result.curve_start == 1
        assert result.t_check == 1 + int(np.argmin(curve))
        assert result.val_loss_min == result.val_loss_at(result.t_check)
        assert result.trace.has_val_loss()
        np.testing.assert_array_equal(result.trace.column("val_loss")[1:], curve)

    def test_start_at_the_truth_with_noisy_measurements(self):
        n, k, r = 6, 2, 2
        truth = make_ground_truth(n, r, k, seed=0)
        op = make_gaussian_operator(n, k, 3 * n * r * k, seed=0)
        y, _ = make_measurements(truth.X_star, op, NoiseSpec.gaussian(0.05, seed=0))
        plan = split(op.m, 0.2, seed=0)
        config = SolverConfig(R=r, eta=0.05, T=30, alpha=1e-3)
        result = run_with_early_stopping(op, y, config, plan, truth=truth, U0=truth.X_factor)
        assert result.t_check >= 1
        assert np.all(result.val_loss_curve >= result.val_loss_at(result.t_check))
        assert result.val_loss_min == result.val_loss_at(result.t_check)
        _, values = result.summary_csv().splitlines()
        assert float(values.split(",")[1]) == result.val_loss_at(result.t_check)

    def test_single_iteration(self, instance):
        truth, op, y = instance
        plan = split(op.m, 0.1, seed=3)
        result = run_with_early_stopping(op, y, SolverConfig(R=2, T=1, alpha=1e-3), plan)
        assert result.t_check == 1

    def test_zero_iterations(self, instance):
        _, op, y = instance
        plan = split(op.m, 0.1, seed=3)
        result = run_with_early_stopping(op, y, SolverConfig(R=2, T=0, alpha=1e-3), plan)
        assert result.t_check == 0
        assert result.curve_start == 0
        assert result.val_loss_curve.shape == (1,)

    def test_trains_on_the_training_split_only(self, instance):
        truth, op, y = instance
        plan = split(op.m, 0.1, seed=3)
        config = SolverConfig(R=2, T=20, alpha=1e-3, seed=5)
        baseline = run_with_early_stopping(op, y, config, plan, truth=truth)
        corrupted = np.array(y)
        corrupted[plan.val_indices] += 100.0
        shifted = run_with_early_stopping(op, corrupted, config, plan, truth=truth)
        np.testing.assert_array_equal(
            baseline.trace.column("train_loss"), shifted.trace.column("train_loss")
        )
        assert not np.allclose(baseline.val_loss_curve, shifted.val_loss_curve)

    def test_chosen_estimate_and_oracle_values(self, instance):
        truth, op, y = instance
        plan = split(op.m, 0.1, seed=3)
        config = SolverConfig(R=4, T=40, alpha=1e-3)
        result = run_with_early_stopping(op, y, config, plan, truth=truth)
        rse = result.trace.column("rse")
        assert result.rse_at_t_check == pytest.approx(rse[result.t_check])
        assert result.rse_best == pytest.approx(rse.min())
        assert result.t_best == int(np.argmin(rse))
        assert result.validation_size_sufficient in (True, False)
        assert result.chosen_estimate.shape == (6, 6, 2)

    def test_summary_line(self, instance):
        truth, op, y = instance
        plan = split(op.m, 0.1, seed=3)
        result = run_with_early_stopping(
            op, y, SolverConfig(R=2, T=3, alpha=1e-3), plan, truth=truth
        )
        header, values = result.summary_csv().splitlines()
        assert header == "t_check,val_loss_min,rse_at_t_check"
        assert values.startswith(f"{result.t_check},")

    def test_noiseless_run_stops_late(self):
        truth = make_ground_truth(6, 1, 2, seed=8)
        op = make_gaussian_operator(6, 2, 10 * 6 * 1 * 2 * 2, seed=8)
        y, _ = make_measurements(truth.X_star, op)
        plan = split(op.m, 0.1, seed=8)
        config = SolverConfig(R=1, eta=0.1, T=2000, alpha=1e-3, diag_stride=0)
        result = run_with_early_stopping(op, y, config, plan, truth=truth)
        assert result.rse_at_t_check < 1e-6


class TestValidationSize:
    def test_small_condition_number(self):
        assert validation_size_sufficient(100, 2, 1.0, 5000)

    def test_ill_conditioned(self):
        assert not validation_size_sufficient(100, 2, 3.0, 5000)
