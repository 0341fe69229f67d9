import numpy as np
import pytest

from tubal_solve.algebra import Tensor3, tprod, tsvd, tubal_rank
from tubal_solve.errors import ConfigError, DivergenceError, ShapeError
from tubal_solve.solvers import (
    PSNR_CAP,
    CompletionConfig,
    FactorPair,
    MaskedObservation,
    balance_drift,
    complete,
    completion_loss,
    completion_step,
    init_factors,
    make_low_rank,
    make_mask,
    observe,
    split_observation,
)


@pytest.fixture
def problem():
    truth = make_low_rank(8, 7, 2, 3, seed=1)
    obs = observe(truth, 0.6, sigma=0.01, seed=1)
    return truth, obs


class TestMask:
    def test_full_observation(self):
        assert make_mask(3, 4, 2, 1.0, seed=0).all()

    def test_observed_fraction(self):
        p, shape = 0.3, (100, 100, 3)
        mask = make_mask(*shape, p, seed=0)
        assert abs(mask.mean() - p) <= 3 * np.sqrt(p * (1 - p) / mask.size)

    def test_deterministic(self):
        np.testing.assert_array_equal(make_mask(5, 5, 2, 0.4, 3), make_mask(5, 5, 2, 0.4, 3))

    @pytest.mark.parametrize("p", [0.0, -0.1, 1.5])
    def test_rejects_probability_outside_range(self, p):
        with pytest.raises(ConfigError):
            make_mask(3, 3, 2, p, seed=0)


class TestObservation:
    def test_entries_outside_the_mask_are_zero(self, problem):
        _, obs = problem
        assert not obs.observed.data[~obs.mask].any()
        assert obs.count == int(obs.mask.sum())

    def test_noiseless_entries_match_truth(self):
        truth = make_low_rank(5, 4, 1, 2, seed=0)
        obs = observe(truth, 0.5, seed=2)
        np.testing.assert_array_equal(obs.observed.data[obs.mask], truth.data[obs.mask])

    def test_mask_shape_mismatch(self):
        with pytest.raises(ShapeError):
            MaskedObservation(Tensor3.zeros(2, 2, 2), np.ones((2, 2, 3), dtype=bool), 0.5)

    def test_split_is_disjoint_and_covers_the_mask(self, problem):
        _, obs = problem
        train, val = split_observation(obs, 0.2, seed=5)
        assert not np.any(train.mask & val.mask)
        np.testing.assert_array_equal(train.mask | val.mask, obs.mask)
        assert train.p == pytest.approx(0.6 * 0.8)
        assert val.p == pytest.approx(0.6 * 0.2)

    def test_split_rejects_empty_side(self):
        truth = make_low_rank(2, 2, 1, 1, seed=0)
        obs = MaskedObservation(truth, np.array([[[True], [False]], [[False], [False]]]), 0.25)
        with pytest.raises(ConfigError):
            split_observation(obs, 0.5, seed=0)


class TestLoss:
    def test_exact_factors_noiseless(self):
        left = Tensor3(np.random.default_rng(0).standard_normal((5, 2, 2)))
        right = Tensor3(np.random.default_rng(1).standard_normal((4, 2, 2)))
        truth = tprod(left, right.T)
        obs = observe(truth, 0.5, seed=0)
        assert completion_loss(FactorPair(left, right), obs) == pytest.approx(0.0, abs=1e-24)

    def test_zero_factor(self, problem):
        _, obs = problem
        fp = FactorPair(Tensor3.zeros(8, 3, 3), Tensor3(np.ones((7, 3, 3))))
        expected = np.sum(obs.observed.data**2) / (2 * obs.p)
        assert completion_loss(fp, obs) == pytest.approx(expected)

    def test_matches_naive_sum(self, problem):
        _, obs = problem
        fp = init_factors(8, 7, 3, 3, 1.0, seed=2)
        estimate = fp.estimate.data
        total = 0.0
        for i in range(8):
            for j in range(7):
                for l in range(3):
                    if obs.mask[i, j, l]:
                        total += (estimate[i, j, l] - obs.observed.data[i, j, l]) ** 2
        assert completion_loss(fp, obs) == pytest.approx(total / (2 * obs.p), rel=1e-12)


class TestStep:
    def test_zero_factors_stay_zero(self, problem):
        _, obs = problem
        fp = FactorPair(Tensor3.zeros(8, 3, 3), Tensor3.zeros(7, 3, 3))
        stepped = completion_step(fp, obs, eta=0.1)
        assert not stepped.L.data.any() and not stepped.Rt.data.any()

    def test_exact_factors_fully_observed(self):
        rng = np.random.default_rng(4)
        left = Tensor3(rng.standard_normal((5, 2, 2)))
        right = Tensor3(rng.standard_normal((4, 2, 2)))
        obs = observe(tprod(left, right.T), 1.0, seed=0)
        stepped = completion_step(FactorPair(left, right), obs, eta=0.1)
        np.testing.assert_allclose(stepped.L.data, left.data, atol=1e-12)
        np.testing.assert_allclose(stepped.Rt.data, right.data, atol=1e-12)

    @pytest.mark.parametrize("point", range(10))
    def test_step_matches_finite_differences(self, problem, point):
        _, obs = problem
        fp = init_factors(8, 7, 3, 3, 1.0, seed=100 + point)
        stepped = completion_step(fp, obs, eta=1.0)
        for name, other in (("L", "Rt"), ("Rt", "L")):
            base = getattr(fp, name).data
            gradient = base - getattr(stepped, name).data
            h = 1e-6 * np.abs(base).max()
            numeric = np.zeros_like(base)
            for index in np.ndindex(base.shape):
                bump = np.zeros_like(base)
                bump[index] = h
                up = {name: Tensor3(base + bump), other: getattr(fp, other)}
                down = {name: Tensor3(base - bump), other: getattr(fp, other)}
                numeric[index] = (
                    completion_loss(FactorPair(**up), obs) - completion_loss(FactorPair(**down), obs)
                ) / (2 * h)
            tolerance = 1e-7 * np.abs(gradient).max()
            np.testing.assert_allclose(numeric, gradient, rtol=1e-5, atol=tolerance)

    def test_updates_are_simultaneous(self, problem):
        _, obs = problem
        fp = init_factors(8, 7, 2, 3, 1.0, seed=3)
        stepped = completion_step(fp, obs, eta=0.05)
        G = Tensor3(np.where(obs.mask, fp.estimate.data - obs.observed.data, 0.0))
        expected_Rt = fp.Rt - (0.05 / obs.p) * tprod(G.T, fp.L)
        np.testing.assert_allclose(stepped.Rt.data, expected_Rt.data, atol=1e-12)

    def test_gauge_invariance(self, problem, rng):
        _, obs = problem
        fp = init_factors(8, 7, 3, 3, 1.0, seed=6)
        Q = tsvd(Tensor3(rng.standard_normal((3, 3, 3)))).V
        rotated = FactorPair(tprod(fp.L, Q), tprod(fp.Rt, Q))
        np.testing.assert_allclose(rotated.estimate.data, fp.estimate.data, atol=1e-12)
        assert completion_loss(rotated, obs) == pytest.approx(completion_loss(fp, obs))

    def test_factor_shapes_must_pair(self):
        with pytest.raises(ShapeError):
            FactorPair(Tensor3.zeros(4, 2, 2), Tensor3.zeros(4, 3, 2))


class TestFactors:
    def test_init_scale(self):
        fp = init_factors(40, 30, 5, 3, 1e-2, seed=0)
        assert fp.rank == 5
        assert fp.L.frobenius() == pytest.approx(1e-2 * np.sqrt(40 * 3), rel=0.15)
        assert fp.Rt.frobenius() == pytest.approx(1e-2 * np.sqrt(30 * 3), rel=0.15)

    def test_balanced_pair(self, rng):
        L = Tensor3(rng.standard_normal((5, 2, 2)))
        assert balance_drift(FactorPair(L, L)) == pytest.approx(0.0, abs=1e-12)

    def test_low_rank_truth(self):
        truth = make_low_rank(10, 8, 3, 3, seed=0)
        assert truth.shape == (10, 8, 3)
        assert truth.frobenius() == pytest.approx(1.0)
        assert tubal_rank(truth) == 3

    def test_low_rank_rejects_rank(self):
        with pytest.raises(ConfigError):
            make_low_rank(4, 3, 4, 2, seed=0)


class TestComplete:
    def test_result_fields(self, problem):
        truth, obs = problem
        train, val = split_observation(obs, 0.2, seed=1)
        config = CompletionConfig(R=3, eta=0.05, T=50, alpha=1e-2, seed=1)
        result = complete(train, val, config, truth=truth)
        curve = result.val_loss_curve
        assert len(result.trace) == 51
        assert len(curve) == 50
        assert result.t_check == 1 + int(np.argmin(curve))
        assert result.val_loss_min == result.val_loss_at(result.t_check)
        re = result.trace.column("re")
        assert result.re_best == pytest.approx(re.min())
        assert result.re_best <= result.re_es + 1e-15
        assert result.rse_best == pytest.approx(result.re_best**2)
        assert result.re_es == pytest.approx(re[result.t_check])
        assert result.psnr_es == pytest.approx(result.trace[result.t_check].psnr)
        assert result.factors.rank == 3

    def test_validation_loss_uses_held_out_entries_only(self, problem):
        truth, obs = problem
        train, val = split_observation(obs, 0.2, seed=1)
        config = CompletionConfig(R=3, eta=0.05, T=10, alpha=1e-2, seed=1)
        result = complete(train, val, config)
        first = init_factors(8, 7, 3, 3, 1e-2, seed=1)
        assert result.trace[0].val_loss == pytest.approx(completion_loss(first, val))
        assert result.trace[0].train_loss == pytest.approx(completion_loss(first, train))
        assert result.re_es is None

    def test_start_at_exact_factors_with_noisy_entries(self, rng):
        left = Tensor3(rng.standard_normal((8, 2, 3)))
        right = Tensor3(rng.standard_normal((7, 2, 3)))
        truth = tprod(left, right.T)
        train, val = split_observation(observe(truth, 0.6, sigma=0.5, seed=2), 0.2, seed=2)
        config = CompletionConfig(R=2, eta=0.01, T=30, seed=2)
        result = complete(train, val, config, truth=truth, initial=FactorPair(left, right))
        assert result.t_check >= 1
        assert len(result.val_loss_curve) == 30
        assert np.all(result.val_loss_curve >= result.val_loss_at(result.t_check))
        assert result.val_loss_min == result.val_loss_at(result.t_check)

    def test_overlapping_masks_rejected(self, problem):
        _, obs = problem
        with pytest.raises(ConfigError):
            complete(obs, obs, CompletionConfig(R=2, T=1))

    def test_fully_observed_noiseless_converges(self):
        truth = make_low_rank(10, 9, 2, 2, seed=3)
        obs = observe(truth, 1.0, seed=3)
        train, val = split_observation(obs, 0.1, seed=3)
        # the train split of a full mask is a Bernoulli(0.9) sample
        config = CompletionConfig(R=2, eta=0.2, T=3000, alpha=1e-3, seed=3)
        result = complete(train, val, config, truth=truth)
        assert result.re_best < 1e-5
        assert result.psnr_best > 80 or result.psnr_best == PSNR_CAP

    def test_divergence(self, problem):
        truth, obs = problem
        train, val = split_observation(obs, 0.2, seed=1)
        config = CompletionConfig(R=3, eta=500.0, T=100, alpha=10.0, seed=1)
        with pytest.raises(DivergenceError):
            complete(train, val, config, truth=truth)

    @pytest.mark.parametrize(
        "config",
        [
            CompletionConfig(R=0),
            CompletionConfig(R=9),
            CompletionConfig(R=2, alpha=0.0),
            CompletionConfig(R=2, T=-1),
            CompletionConfig(R=2, val_frac=1.0),
        ],
    )
    def test_invalid_config(self, problem, config):
        _, obs = problem
        train, val = split_observation(obs, 0.2, seed=1)
        with pytest.raises(ConfigError):
            complete(train, val, config)

    def test_trace_and_summary_export(self, problem, tmp_path):
        truth, obs = problem
        train, val = split_observation(obs, 0.2, seed=1)
        result = complete(train, val, CompletionConfig(R=2, eta=0.05, T=3), truth=truth)
        path = tmp_path / "trace.csv"
        result.trace.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "iter,train_loss,val_loss,re,psnr"
        assert len(lines) == 5
        header, row = result.summary_csv(p=0.6, sigma=0.01).splitlines()
        assert header == "method,p,sigma,R,re_best,re_es,psnr_best,psnr_es"
        assert row.startswith("fgd,0.6,0.01,2,")
