"""Synthetic generation, stability gating, and iterative forecasting."""

import math

import numpy as np
import pytest

from varsearch import (
    CoefficientSet,
    CriterionKind,
    ForecastInputError,
    GeneratorSpec,
    ModelConfig,
    UnstableError,
    companion_matrix,
    companion_spectral_radius,
    fit,
    forecast,
    generate,
    random_stable_coefficients,
)

from .conftest import make_dataset


def ar_coefficients(*lags, c=None, n=1):
    a = tuple(np.eye(n) * value for value in lags)
    const = None if c is None else np.full((1, n), float(c))
    return CoefficientSet(a=a, c=const)


class TestCompanion:
    def test_scaled_identity(self):
        coef = ar_coefficients(0.5, n=2)
        assert companion_spectral_radius(coef) == pytest.approx(0.5, abs=1e-12)

    def test_unit_root(self):
        coef = ar_coefficients(1.0, n=2)
        assert companion_spectral_radius(coef) == pytest.approx(1.0, abs=1e-12)

    def test_two_lag_scalar_matches_polynomial_root(self):
        coef = ar_coefficients(0.5, 0.3)
        expected = max(abs(r) for r in np.roots([1.0, -0.5, -0.3]))
        assert companion_spectral_radius(coef) == pytest.approx(expected, abs=1e-12)

    def test_matrix_layout(self):
        a1 = np.array([[0.5, 0.1], [0.0, 0.4]])
        a2 = np.array([[0.2, 0.0], [0.1, 0.3]])
        comp = companion_matrix(CoefficientSet(a=(a1, a2)))
        assert comp.shape == (4, 4)
        np.testing.assert_array_equal(comp[0:2, 0:2], a1)
        np.testing.assert_array_equal(comp[2:4, 0:2], a2)
        np.testing.assert_array_equal(comp[0:2, 2:4], np.eye(2))
        np.testing.assert_array_equal(comp[2:4, 2:4], np.zeros((2, 2)))


class TestGenerate:
    def test_geometric_decay_from_seeded_state(self):
        coef = ar_coefficients(0.5, n=2)
        spec_ = GeneratorSpec(
            coefficients=coef,
            t=3,
            noise_scale=0.0,
            burn_in=0,
            initial_state=np.array([[1.0, 1.0]]),
        )
        ds = generate(spec_)
        np.testing.assert_allclose(
            ds.observations,
            [[1.0, 1.0], [0.5, 0.5], [0.25, 0.25]],
            atol=1e-15,
        )
        assert ds.names == ("y1", "y2")

    def test_same_seed_reproduces(self):
        coef = random_stable_coefficients(n=2, p=2, d=1, q=1, seed=0)
        spec_ = GeneratorSpec(
            coefficients=coef, t=50, noise_scale=0.3, burn_in=20, seed=9,
            exogenous="random_walk",
        )
        a = generate(spec_)
        b = generate(spec_)
        np.testing.assert_array_equal(a.observations, b.observations)
        assert a.names == ("y1", "y2", "z1")

    def test_noiseless_round_trip_recovers_coefficients(self):
        coef = random_stable_coefficients(n=2, p=2, seed=1, radius=0.95)
        spec_ = GeneratorSpec(
            coefficients=coef, t=300, noise_scale=0.0, burn_in=0, seed=2,
            initial_state=np.random.default_rng(3).normal(size=(2, 2)),
        )
        ds = generate(spec_)
        cfg = ModelConfig(p=2, q=0, dependent_mask=(True, True))
        result = fit(ds, cfg)
        err = np.linalg.norm(result.coefficients.flatten() - coef.flatten())
        assert err / np.linalg.norm(coef.flatten()) <= 1e-8

    def test_estimation_error_shrinks_with_noise(self):
        coef = random_stable_coefficients(n=2, p=1, seed=4)
        cfg = ModelConfig(p=1, q=0, dependent_mask=(True, True))
        truth = coef.flatten()
        errors = []
        for scale in (0.1, 0.01, 0.001):
            spec_ = GeneratorSpec(
                coefficients=coef, t=400, noise_scale=scale, burn_in=50, seed=5
            )
            estimate = fit(generate(spec_), cfg).coefficients.flatten()
            errors.append(np.linalg.norm(estimate - truth))
        assert errors[0] > errors[1] > errors[2]

    def test_unstable_system_with_noise_is_refused(self):
        coef = random_stable_coefficients(n=2, p=1, seed=6, radius=1.2)
        spec_ = GeneratorSpec(coefficients=coef, t=50, noise_scale=0.5, burn_in=0)
        with pytest.raises(UnstableError) as excinfo:
            generate(spec_)
        assert excinfo.value.radius == pytest.approx(1.2, abs=1e-9)

    def test_unstable_but_noiseless_is_allowed(self):
        coef = ar_coefficients(1.0)  # unit root
        spec_ = GeneratorSpec(
            coefficients=coef, t=10, noise_scale=0.0, burn_in=0,
            initial_state=np.array([[3.0]]),
        )
        ds = generate(spec_)
        np.testing.assert_allclose(ds.observations, np.full((10, 1), 3.0))

    def test_supplied_exogenous_array_is_used_verbatim(self):
        coef = random_stable_coefficients(n=1, p=1, d=2, q=1, seed=7)
        z = np.random.default_rng(8).normal(size=(30, 2))
        spec_ = GeneratorSpec(
            coefficients=coef, t=20, noise_scale=0.2, burn_in=10, seed=9,
            exogenous=z,
        )
        ds = generate(spec_)
        np.testing.assert_array_equal(ds.observations[:, 1:], z[10:])

    def test_spec_validation(self):
        stable = random_stable_coefficients(n=1, p=1, seed=0)
        with_exog = random_stable_coefficients(n=1, p=1, d=1, q=1, seed=0)
        with pytest.raises(ValueError, match="t must be"):
            GeneratorSpec(coefficients=stable, t=0)
        with pytest.raises(ValueError, match="burn_in"):
            GeneratorSpec(coefficients=stable, t=10, burn_in=-1)
        with pytest.raises(ValueError, match="noise_scale"):
            GeneratorSpec(coefficients=stable, t=10, noise_scale=-0.1)
        with pytest.raises(ValueError, match="exogenous"):
            GeneratorSpec(coefficients=with_exog, t=10)
        with pytest.raises(ValueError, match="unknown exogenous mode"):
            GeneratorSpec(coefficients=with_exog, t=10, exogenous="brownian")
        with pytest.raises(ValueError, match="shape"):
            GeneratorSpec(
                coefficients=with_exog, t=10, burn_in=5, exogenous=np.zeros((10, 1))
            )
        with pytest.raises(ValueError, match="initial_state"):
            GeneratorSpec(
                coefficients=stable, t=10, initial_state=np.zeros((2, 1))
            )
        with pytest.raises(ValueError, match="no room"):
            GeneratorSpec(
                coefficients=ar_coefficients(0.1, 0.1, 0.1), t=2, burn_in=1,
                noise_scale=0.0,
            )


class TestRandomStableCoefficients:
    def test_radius_is_pinned_exactly(self):
        for radius in (0.5, 0.9, 0.995):
            coef = random_stable_coefficients(n=3, p=2, seed=10, radius=radius)
            assert companion_spectral_radius(coef) == pytest.approx(
                radius, rel=1e-10
            )

    def test_exogenous_needs_columns(self):
        with pytest.raises(ValueError, match="d >= 1"):
            random_stable_coefficients(n=1, p=1, d=0, q=1)

    def test_constant_toggle(self):
        assert random_stable_coefficients(n=1, p=1, include_constant=False).c is None
        assert random_stable_coefficients(n=1, p=1).c.shape == (1, 1)

    def test_block_shapes(self):
        coef = random_stable_coefficients(n=2, p=3, d=4, q=2, seed=11)
        assert len(coef.a) == 3 and coef.a[0].shape == (2, 2)
        assert len(coef.b) == 2 and coef.b[0].shape == (4, 2)
        assert coef.c.shape == (1, 2)


class TestForecast:
    def test_counting_series_continues(self):
        ds = make_dataset([1.0, 2.0, 3.0, 4.0], names=("y",))
        cfg = ModelConfig(p=1, q=0, dependent_mask=(True,))
        result = fit(ds, cfg)
        np.testing.assert_allclose(
            forecast(ds, result, horizon=3),
            [[5.0], [6.0], [7.0]],
            atol=1e-9,
        )

    def test_one_step_equals_design_row_product(self):
        rng = np.random.default_rng(12)
        ds = make_dataset(rng.normal(size=(80, 2)))
        cfg = ModelConfig(p=2, q=0, dependent_mask=(True, True))
        result = fit(ds, cfg)
        coef = result.coefficients
        obs = ds.observations
        expected = obs[-1] @ coef.a[0] + obs[-2] @ coef.a[1] + coef.c[0]
        np.testing.assert_allclose(
            forecast(ds, result, horizon=1)[0], expected, atol=1e-12
        )

    def test_long_horizon_reaches_fixed_point(self):
        coef = random_stable_coefficients(n=2, p=2, seed=13, radius=0.7)
        spec_ = GeneratorSpec(coefficients=coef, t=400, noise_scale=0.3, seed=14)
        ds = generate(spec_)
        cfg = ModelConfig(p=2, q=0, dependent_mask=(True, True))
        result = fit(ds, cfg)
        est = result.coefficients
        fixed = est.c[0] @ np.linalg.inv(np.eye(2) - est.a[0] - est.a[1])
        path = forecast(ds, result, horizon=400)
        np.testing.assert_allclose(path[-1], fixed, atol=1e-8)

    def test_future_z_requirements(self):
        coef = random_stable_coefficients(n=1, p=1, d=1, q=1, seed=15)
        spec_ = GeneratorSpec(
            coefficients=coef, t=100, noise_scale=0.3, seed=16,
            exogenous="random_walk",
        )
        ds = generate(spec_)
        cfg = ModelConfig(p=1, q=1, dependent_mask=(True, False))
        result = fit(ds, cfg)

        # single step never needs future exogenous rows
        assert forecast(ds, result, horizon=1).shape == (1, 1)

        with pytest.raises(ForecastInputError, match="future"):
            forecast(ds, result, horizon=3)
        with pytest.raises(ForecastInputError, match="2 or 3 rows"):
            forecast(ds, result, horizon=3, future_z=np.zeros((1, 1)))
        with pytest.raises(ForecastInputError, match="columns"):
            forecast(ds, result, horizon=3, future_z=np.zeros((2, 2)))
        with pytest.raises(ForecastInputError, match="finite"):
            forecast(ds, result, horizon=3, future_z=np.full((2, 1), np.nan))

        z2 = np.array([[0.5], [0.7]])
        z3 = np.vstack([z2, [[99.0]]])  # trailing row is never consumed
        out2 = forecast(ds, result, horizon=3, future_z=z2)
        out3 = forecast(ds, result, horizon=3, future_z=z3)
        assert out2.shape == (3, 1)
        np.testing.assert_array_equal(out2, out3)

    def test_bad_inputs(self):
        ds = make_dataset(np.arange(10.0))
        cfg = ModelConfig(p=1, q=0, dependent_mask=(True,))
        result = fit(ds, cfg)
        with pytest.raises(ForecastInputError, match="horizon"):
            forecast(ds, result, horizon=0)
        other = make_dataset(np.random.default_rng(17).normal(size=(10, 2)))
        with pytest.raises(ForecastInputError, match="columns"):
            forecast(other, result, horizon=1)
        wiggly = make_dataset(np.random.default_rng(18).normal(size=(10, 1)))
        deep = fit(wiggly, ModelConfig(p=2, q=0, dependent_mask=(True,)))
        stub = make_dataset([1.0])
        with pytest.raises(ForecastInputError, match="observed rows"):
            forecast(stub, deep, horizon=1)
