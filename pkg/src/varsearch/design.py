"""Construction of the stacked regression system Y ~ X Theta.

For regression row r (time point j = row_start + r) the design row is

    [ y(j-1) | ... | y(j-p) | z(j-1) | ... | z(j-q) | 1 ]

with y restricted to the dependent columns and z to the independent
columns of the configuration.  Column blocks are ordered lag-1 first and
the constant column, when present, comes last.  Rows are materialized
copies; the Toeplitz overlap between consecutive rows is not exploited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import ModelConfig, TimeSeriesDataset, structural_violations

__all__ = ["RegressionSystem", "build_regression_system"]


@dataclass(frozen=True, eq=False)
class RegressionSystem:
    """Target matrix Y (T' x n) and design matrix X (T' x K)."""

    y: np.ndarray
    x: np.ndarray
    config: ModelConfig
    row_start: int

    @property
    def effective_t(self) -> int:
        return self.y.shape[0]

    @property
    def n_dependent(self) -> int:
        return self.y.shape[1]

    @property
    def n_columns(self) -> int:
        return self.x.shape[1]


def build_regression_system(
    ds: TimeSeriesDataset, cfg: ModelConfig, row_start=None
) -> RegressionSystem:
    """Stack the lagged observations into a regression system.

    Parameters
    ----------
    ds : TimeSeriesDataset
    cfg : ModelConfig
    row_start : int, optional
        First regression row; defaults to max(p, q).  Passing the maximum
        row start of a whole search space scores every candidate on the
        same target rows.

    Raises
    ------
    ValidationError
        If the configuration cannot be stacked on this dataset.  Only
        structural validity is required here; determinedness (T' > K) is
        enforced by the least-squares solver.
    """
    violations = structural_violations(cfg, ds, row_start=row_start)
    if violations:
        raise ValidationError(violations)
    start = cfg.row_start if row_start is None else row_start
    obs = ds.observations
    t_total = ds.n_obs
    dep = list(cfg.dependent_indices)
    indep = list(cfg.independent_indices) if cfg.q > 0 else []

    y = obs[start:, dep]
    blocks = []
    for lag in range(1, cfg.p + 1):
        blocks.append(obs[start - lag : t_total - lag, dep])
    for lag in range(1, cfg.q + 1):
        blocks.append(obs[start - lag : t_total - lag, indep])
    if cfg.include_constant:
        blocks.append(np.ones((t_total - start, 1)))
    x = np.hstack(blocks)
    return RegressionSystem(y=y.copy(), x=x, config=cfg, row_start=start)
