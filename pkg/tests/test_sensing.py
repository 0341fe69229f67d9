import numpy as np
import pytest

from tubal_solve.algebra import Tensor3, inner, spectral_norm, tubal_rank
from tubal_solve.errors import ShapeError
from tubal_solve.sensing import (
    NoiseKind,
    NoiseSpec,
    Scaling,
    empirical_trip_probe,
    make_gaussian_operator,
    make_isometric_operator,
    random_low_rank,
    sample_noise,
)
from tubal_solve.solvers import make_ground_truth


class TestGaussianOperator:
    def test_same_seed_same_operator(self):
        a = make_gaussian_operator(4, 2, 10, seed=3)
        b = make_gaussian_operator(4, 2, 10, seed=3)
        np.testing.assert_array_equal(a.measurement_tensors, b.measurement_tensors)

    def test_different_seeds_differ(self):
        a = make_gaussian_operator(4, 2, 10, seed=3)
        b = make_gaussian_operator(4, 2, 10, seed=4)
        assert not np.array_equal(a.measurement_tensors, b.measurement_tensors)

    def test_entries_are_centered(self):
        op = make_gaussian_operator(4, 2, 1000, seed=0)
        count = op.measurement_tensors.size
        assert abs(op.measurement_tensors.mean()) < 3 / np.sqrt(count)

    def test_single_measurement(self, random_tensor):
        op = make_gaussian_operator(3, 2, 1, seed=1)
        t = random_tensor(3, 3, 2)
        y = op.forward(t)
        assert y.shape == (1,)
        assert y[0] == pytest.approx(inner(op.measurement(0), t))

    def test_rejects_zero_measurements(self):
        with pytest.raises(ValueError):
            make_gaussian_operator(3, 2, 0, seed=1)

    def test_measurement_tensors_are_read_only(self):
        op = make_gaussian_operator(2, 2, 3, seed=1)
        with pytest.raises(ValueError):
            op.measurement_tensors[0, 0, 0, 0] = 1.0


class TestForwardAdjoint:
    def test_zero_input(self):
        op = make_gaussian_operator(3, 2, 5, seed=2)
        assert not op.forward(Tensor3.zeros(3, 3, 2)).any()
        assert not op.adjoint(np.zeros(5)).data.any()

    def test_forward_matches_naive_sum(self):
        op = make_gaussian_operator(3, 2, 4, seed=2)
        A1 = op.measurement(0)
        expected = sum(
            A1.data[i, j, l] ** 2 for i in range(3) for j in range(3) for l in range(2)
        )
        assert op.forward(A1)[0] == pytest.approx(expected, rel=1e-12)

    def test_linearity(self, random_tensor):
        op = make_gaussian_operator(3, 2, 6, seed=2)
        t1, t2 = random_tensor(3, 3, 2), random_tensor(3, 3, 2)
        np.testing.assert_allclose(
            op.forward(2.5 * t1 + t2), 2.5 * op.forward(t1) + op.forward(t2), atol=1e-10
        )

    @pytest.mark.parametrize("scaling", list(Scaling))
    def test_adjoint_identity(self, random_tensor, rng, scaling):
        op = make_gaussian_operator(4, 3, 9, seed=5, scaling=scaling)
        for _ in range(5):
            t = random_tensor(4, 4, 3)
            e = rng.standard_normal(9)
            lhs = float(op.forward(t) @ e)
            rhs = inner(t, op.adjoint(e))
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_adjoint_of_unit_vector(self):
        op = make_gaussian_operator(3, 2, 4, seed=7, scaling=Scaling.INV_SQRT_M)
        e = np.zeros(4)
        e[2] = 1.0
        np.testing.assert_allclose(op.adjoint(e).data, op.measurement(2).data / 2.0)

    def test_gram_scale(self):
        raw = make_gaussian_operator(2, 2, 16, seed=0)
        scaled = make_gaussian_operator(2, 2, 16, seed=0, scaling=Scaling.INV_SQRT_M)
        assert raw.gram_scale == 16
        assert scaled.gram_scale == pytest.approx(1.0)

    def test_shape_errors(self):
        op = make_gaussian_operator(3, 2, 4, seed=7)
        with pytest.raises(ShapeError):
            op.forward(Tensor3.zeros(3, 3, 3))
        with pytest.raises(ShapeError):
            op.adjoint(np.zeros(5))

    def test_restrict_keeps_order(self):
        op = make_gaussian_operator(3, 2, 6, seed=7)
        sub = op.restrict([4, 1])
        assert sub.m == 2
        np.testing.assert_array_equal(sub.measurement_tensors[0], op.measurement_tensors[4])
        np.testing.assert_array_equal(sub.measurement_tensors[1], op.measurement_tensors[1])

    def test_isometric_operator(self, random_tensor):
        op = make_isometric_operator(3, 2)
        t = random_tensor(3, 3, 2)
        np.testing.assert_allclose(op.adjoint(op.forward(t)).data, op.m * t.data, atol=1e-10)

    def test_back_projection_concentrates(self):
        truth = make_ground_truth(6, 2, 2, seed=4).X_star
        nrk = 6 * 2 * 2
        errors = []
        for factor in (2, 8, 32):
            op = make_gaussian_operator(6, 2, factor * nrk, seed=4)
            errors.append(spectral_norm(op.adjoint(op.forward(truth)) / op.m - truth))
        assert errors[0] > errors[1] > errors[2]


class TestNoise:
    def test_none_is_zero(self):
        assert not sample_noise(NoiseSpec(), 7).any()

    def test_gaussian_variance(self):
        s = sample_noise(NoiseSpec.gaussian(1.0, seed=1), 100_000)
        assert s.var() == pytest.approx(1.0, rel=0.05)

    def test_laplace_variance(self):
        spec = NoiseSpec.laplace(1.0, seed=1)
        s = sample_noise(spec, 100_000)
        assert spec.variance == 2.0
        assert s.var() == pytest.approx(2.0, rel=0.05)

    def test_exponential_moments(self):
        spec = NoiseSpec.exponential(1000.0, seed=1)
        s = sample_noise(spec, 100_000)
        assert np.all(s >= 0)
        assert s.mean() == pytest.approx(1e-3, rel=0.05)
        assert s.var() == pytest.approx(spec.variance, rel=0.05)

    def test_seed_reproducible(self):
        spec = NoiseSpec.gaussian(0.1, seed=9)
        np.testing.assert_array_equal(sample_noise(spec, 20), sample_noise(spec, 20))

    @pytest.mark.parametrize(
        "spec",
        [
            NoiseSpec(kind=NoiseKind.GAUSSIAN, sigma=0.0),
            NoiseSpec(kind=NoiseKind.LAPLACE, b=-1.0),
            NoiseSpec(kind=NoiseKind.EXPONENTIAL, lam=0.0),
        ],
    )
    def test_rejects_nonpositive_parameters(self, spec):
        with pytest.raises(ValueError):
            sample_noise(spec, 3)


class TestTripProbe:
    def test_isometry_has_zero_deviation(self):
        result = empirical_trip_probe(make_isometric_operator(3, 2), r=1, trials=20, seed=0)
        assert result.delta_hat == pytest.approx(0.0, abs=1e-12)
        assert result.deviations.shape == (20,)

    def test_enough_measurements_give_small_constant(self):
        n, k, r = 10, 3, 2
        op = make_gaussian_operator(n, k, 10 * n * r * k, seed=3)
        result = empirical_trip_probe(op, r, trials=200, seed=3)
        assert result.delta_hat < 0.5

    def test_constant_shrinks_with_more_measurements(self):
        n, k, r = 6, 2, 1
        medians = []
        for ratio in (2, 10):
            values = [
                empirical_trip_probe(
                    make_gaussian_operator(n, k, ratio * n * r * k, seed=s), r, 20, seed=s
                ).delta_hat
                for s in range(10)
            ]
            medians.append(np.median(values))
        assert medians[0] >= medians[1]

    def test_rejects_bad_arguments(self):
        op = make_isometric_operator(2, 1)
        with pytest.raises(ValueError):
            empirical_trip_probe(op, r=1, trials=0, seed=0)
        with pytest.raises(ValueError):
            empirical_trip_probe(op, r=0, trials=1, seed=0)

    def test_random_low_rank_is_unit_and_low_rank(self, rng):
        y = random_low_rank(6, 2, 3, rng)
        assert y.frobenius() == pytest.approx(1.0)
        assert tubal_rank(y) == 2
