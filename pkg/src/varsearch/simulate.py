"""Synthetic data generation and h-step forecasting.

Generation follows the same row-vector convention as estimation: a new
observation is the previous rows times the coefficient matrices, plus the
constant and a Gaussian innovation.  Stability is judged by the spectral
radius of the companion matrix; with nonzero noise an unstable system is
refused because its trajectories diverge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ForecastInputError, UnstableError
from .model import CoefficientSet, FitResult, Role, TimeSeriesDataset

__all__ = [
    "GeneratorSpec",
    "companion_matrix",
    "companion_spectral_radius",
    "generate",
    "random_stable_coefficients",
    "forecast",
]

STABILITY_LIMIT = 0.999


def companion_matrix(coefficients: CoefficientSet) -> np.ndarray:
    """Companion form of the autoregressive part, shape (n*p, n*p).

    Block row t holds A_{t+1} in the first block column and an identity
    in block column t+1, so the state [y(j), ..., y(j-p+1)] advances by
    right-multiplication.
    """
    a = coefficients.a
    n = coefficients.n_dependent
    p = coefficients.p
    out = np.zeros((n * p, n * p))
    for t in range(p):
        out[t * n : (t + 1) * n, 0:n] = a[t]
        if t + 1 < p:
            out[t * n : (t + 1) * n, (t + 1) * n : (t + 2) * n] = np.eye(n)
    return out


def companion_spectral_radius(coefficients: CoefficientSet) -> float:
    """Largest eigenvalue magnitude of the companion matrix."""
    eigenvalues = np.linalg.eigvals(companion_matrix(coefficients))
    return float(np.abs(eigenvalues).max())


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one synthetic dataset.

    ``exogenous`` is either None (requires q = 0), the string
    "random_walk", or an array of shape (burn_in + t, d) supplying the
    independent series for the whole simulated span including burn-in.
    ``initial_state`` optionally sets the first max(p, q) rows of the
    dependent block; the default is zeros.
    """

    coefficients: CoefficientSet
    t: int
    noise_scale: float = 1.0
    burn_in: int = 100
    seed: int = 0
    exogenous: object = None
    initial_state: object = None

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.noise_scale < 0:
            raise ValueError(f"noise_scale must be >= 0, got {self.noise_scale}")
        coef = self.coefficients
        if coef.q > 0:
            if self.exogenous is None:
                raise ValueError(
                    "coefficients use exogenous lags; pass "
                    "exogenous='random_walk' or an array"
                )
            if isinstance(self.exogenous, str):
                if self.exogenous != "random_walk":
                    raise ValueError(
                        f"unknown exogenous mode {self.exogenous!r}"
                    )
            else:
                z = np.asarray(self.exogenous, dtype=float)
                total = self.burn_in + self.t
                if z.ndim != 2 or z.shape != (total, coef.n_independent):
                    raise ValueError(
                        "supplied exogenous array must have shape "
                        f"({total}, {coef.n_independent}) covering burn-in, "
                        f"got {z.shape}"
                    )
                if not np.all(np.isfinite(z)):
                    raise ValueError("exogenous array must be finite")
                object.__setattr__(self, "exogenous", z)
        row_start = max(coef.p, coef.q)
        if self.initial_state is not None:
            init = np.asarray(self.initial_state, dtype=float)
            if init.shape != (row_start, coef.n_dependent):
                raise ValueError(
                    "initial_state must have shape "
                    f"({row_start}, {coef.n_dependent}), got {init.shape}"
                )
            if not np.all(np.isfinite(init)):
                raise ValueError("initial_state must be finite")
            object.__setattr__(self, "initial_state", init)
        if self.burn_in + self.t <= row_start:
            raise ValueError(
                f"burn_in + t = {self.burn_in + self.t} leaves no room to "
                f"generate past the {row_start} seed rows"
            )


def generate(spec: GeneratorSpec) -> TimeSeriesDataset:
    """Simulate the system and return the post-burn-in sample.

    Raises
    ------
    UnstableError
        When noise_scale > 0 and the companion spectral radius is at or
        above the stability limit.
    """
    coef = spec.coefficients
    n = coef.n_dependent
    p = coef.p
    q = coef.q
    d = coef.n_independent
    if spec.noise_scale > 0:
        radius = companion_spectral_radius(coef)
        if radius >= STABILITY_LIMIT:
            raise UnstableError(radius)
    rng = np.random.default_rng(spec.seed)
    total = spec.burn_in + spec.t
    row_start = max(p, q)

    if q > 0:
        if isinstance(spec.exogenous, str):
            steps = rng.normal(0.0, 1.0, size=(total, d))
            z = np.cumsum(steps, axis=0)
        else:
            z = spec.exogenous
    else:
        z = np.zeros((total, 0))

    y = np.zeros((total, n))
    if spec.initial_state is not None:
        y[:row_start] = spec.initial_state
    constant = coef.c[0] if coef.c is not None else np.zeros(n)
    for j in range(row_start, total):
        row = constant.copy()
        for i in range(1, p + 1):
            row += y[j - i] @ coef.a[i - 1]
        for i in range(1, q + 1):
            row += z[j - i] @ coef.b[i - 1]
        if spec.noise_scale > 0:
            row += rng.normal(0.0, spec.noise_scale, size=n)
        y[j] = row

    observations = np.hstack([y, z])[spec.burn_in :]
    names = [f"y{i + 1}" for i in range(n)] + [f"z{i + 1}" for i in range(d)]
    roles = (Role.DEPENDENT,) * n + (Role.INDEPENDENT,) * d
    return TimeSeriesDataset(
        observations=observations, names=tuple(names), roles=roles
    )


def random_stable_coefficients(
    n: int,
    p: int,
    d: int = 0,
    q: int = 0,
    include_constant: bool = True,
    radius: float = 0.9,
    seed: int = 0,
) -> CoefficientSet:
    """Random coefficients with the companion radius set exactly.

    Replacing A_t by A_t * s**t scales every companion eigenvalue by s,
    so one rescale pins the radius; exogenous blocks and the constant do
    not affect stability and are drawn at a moderate scale.
    """
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    if q > 0 and d < 1:
        raise ValueError("q > 0 requires d >= 1")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    a = [rng.normal(0.0, 1.0 / math.sqrt(n * p), size=(n, n)) for _ in range(p)]
    base = CoefficientSet(a=tuple(a))
    rho = companion_spectral_radius(base)
    if rho > 0:
        s = radius / rho
        a = [a[t] * s ** (t + 1) for t in range(p)]
    b = tuple(rng.normal(0.0, 0.5, size=(d, n)) for _ in range(q))
    c = rng.normal(0.0, 0.5, size=(1, n)) if include_constant else None
    return CoefficientSet(a=tuple(a), b=b, c=c)


def forecast(
    ds: TimeSeriesDataset,
    fit_result: FitResult,
    horizon: int,
    future_z: np.ndarray | None = None,
) -> np.ndarray:
    """Iterative h-step forecast of the dependent block, shape (horizon, n).

    Dependent lags beyond the sample use earlier forecasts; independent
    lags use the observed series and, past the first step, ``future_z``.
    ``future_z`` must supply at least horizon - 1 future rows (one per
    step after the first); a full horizon rows is also accepted.
    """
    if horizon < 1:
        raise ForecastInputError(f"horizon must be >= 1, got {horizon}")
    cfg = fit_result.config
    if len(cfg.dependent_mask) != ds.n_vars:
        raise ForecastInputError(
            "fit and dataset disagree on the number of columns"
        )
    coef = fit_result.coefficients
    p, q = cfg.p, cfg.q
    dep_cols = list(cfg.dependent_indices)
    indep_cols = list(cfg.independent_indices) if q > 0 else []
    n = len(dep_cols)
    t_obs = ds.n_obs
    if t_obs < max(p, q):
        raise ForecastInputError(
            f"need at least max(p, q) = {max(p, q)} observed rows, "
            f"have {t_obs}"
        )

    hist_y = ds.observations[:, dep_cols]
    d = len(indep_cols)
    needs_future = q >= 1 and d > 0 and horizon >= 2
    if needs_future:
        if future_z is None:
            raise ForecastInputError(
                "future values of the independent variables are required "
                "for multi-step forecasts; pass future_z"
            )
        future_z = np.asarray(future_z, dtype=float)
        if future_z.ndim != 2 or future_z.shape[1] != d:
            raise ForecastInputError(
                f"future_z must have {d} columns, got shape "
                f"{getattr(future_z, 'shape', None)}"
            )
        if future_z.shape[0] not in (horizon - 1, horizon):
            raise ForecastInputError(
                f"future_z must supply {horizon - 1} or {horizon} rows, "
                f"got {future_z.shape[0]}"
            )
        if not np.all(np.isfinite(future_z)):
            raise ForecastInputError("future_z must be finite")
    if q > 0:
        hist_z = ds.observations[:, indep_cols]
        if needs_future:
            z_ext = np.vstack([hist_z, future_z[: horizon - 1]])
        else:
            z_ext = hist_z
    constant = coef.c[0] if coef.c is not None else np.zeros(n)

    y_ext = np.vstack([hist_y, np.zeros((horizon, n))])
    for h in range(horizon):
        j = t_obs + h
        row = constant.copy()
        for i in range(1, p + 1):
            row += y_ext[j - i] @ coef.a[i - 1]
        for i in range(1, q + 1):
            row += z_ext[j - i] @ coef.b[i - 1]
        y_ext[j] = row
    return y_ext[t_obs:]
