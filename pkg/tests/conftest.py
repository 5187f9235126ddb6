"""Shared fixtures and dataset builders for the test suite."""

import numpy as np
import pytest

from varsearch import (
    GeneratorSpec,
    ModelConfig,
    Role,
    TimeSeriesDataset,
    generate,
    random_stable_coefficients,
)


def make_dataset(values, names=None, roles=None) -> TimeSeriesDataset:
    """Build a dataset from a plain array; all columns dependent unless
    roles are given."""
    obs = np.atleast_2d(np.asarray(values, dtype=float))
    if obs.shape[0] == 1 and obs.shape[1] > 1:
        obs = obs.T
    m = obs.shape[1]
    if names is None:
        names = tuple(f"v{i + 1}" for i in range(m))
    if roles is None:
        roles = (Role.DEPENDENT,) * m
    return TimeSeriesDataset(observations=obs, names=tuple(names), roles=tuple(roles))


def noisy_dataset(seed=0, n=2, p=2, d=0, q=0, t=200, noise=0.5,
                  include_constant=True) -> TimeSeriesDataset:
    """Seeded noisy sample from a random stable process."""
    coef = random_stable_coefficients(
        n=n, p=p, d=d, q=q, include_constant=include_constant,
        radius=0.85, seed=seed,
    )
    spec = GeneratorSpec(
        coefficients=coef, t=t, noise_scale=noise, burn_in=50,
        seed=seed + 1000, exogenous="random_walk" if q > 0 else None,
    )
    return generate(spec)


@pytest.fixture
def counting_series():
    """y = 1, 2, 3, 4: follows y_t = y_{t-1} + 1 exactly."""
    return make_dataset([1.0, 2.0, 3.0, 4.0], names=("y",))


@pytest.fixture
def counting_config():
    return ModelConfig(p=1, q=0, dependent_mask=(True,), include_constant=True)


@pytest.fixture
def mixed_dataset():
    """y = 1..3 dependent, z = 10..30 independent."""
    obs = np.array([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]])
    return TimeSeriesDataset(
        observations=obs, names=("y", "z"),
        roles=(Role.DEPENDENT, Role.INDEPENDENT),
    )
