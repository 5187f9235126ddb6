"""Candidate evaluation: scoring, seeding, and the parallel map.

Every engine scores candidates through ``evaluate_config`` so that error
handling and the invalid-candidate convention (value +inf) are identical
everywhere.  ``derive_candidate_seed`` gives each logical random stream a
seed that depends only on (master seed, stream id), never on scheduling,
which is what makes parallel runs reproducible.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

from ..criteria import CriterionKind
from ..errors import RankDeficientError, ValidationError
from ..model import ModelConfig, TimeSeriesDataset
from ..ols import fit

__all__ = ["derive_candidate_seed", "evaluate_config", "parallel_evaluate"]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def derive_candidate_seed(master_seed: int, stream_id: int) -> int:
    """Decorrelated 64-bit seed for one logical stream.

    SplitMix64 finalizer applied to ``master_seed XOR stream_id * gamma``,
    all arithmetic mod 2**64.  The same (master_seed, stream_id) pair
    always yields the same seed regardless of worker count or call order.
    """
    z = (master_seed ^ ((stream_id * _GAMMA) & _MASK64)) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def evaluate_config(
    ds: TimeSeriesDataset,
    cfg: ModelConfig,
    kind: CriterionKind,
    common_row_start: int | None = None,
):
    """Score one configuration; never raises for a bad candidate.

    Returns ``(value, fit_result)``.  Invalid or rank-deficient candidates
    and undefined criteria come back as ``(inf, None)``, so engines can
    rank them without special cases.
    """
    try:
        result = fit(ds, cfg, row_start=common_row_start)
    except (ValidationError, RankDeficientError):
        return (math.inf, None)
    value = result.criterion(kind)
    if math.isnan(value):
        return (math.inf, result)
    return (value, result)


def _evaluate_one(args):
    ds, cfg, kind, common_row_start = args
    try:
        return evaluate_config(ds, cfg, kind, common_row_start)
    except Exception:
        return (math.inf, None)


def parallel_evaluate(
    candidates,
    ds: TimeSeriesDataset,
    kind: CriterionKind,
    workers: int = 1,
    common_row_start: int | None = None,
):
    """Score a batch of configurations, optionally across processes.

    Results come back in candidate order.  A candidate that fails for any
    reason occupies its slot as ``(inf, None)`` rather than aborting the
    batch.  With ``workers == 1`` everything runs in-process.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    jobs = [(ds, cfg, kind, common_row_start) for cfg in candidates]
    if workers == 1 or len(jobs) <= 1:
        return [_evaluate_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_one, jobs))
