"""Search space over model configurations and shared search types.

A configuration genome is the triple ``(p, q, bits)`` where ``bits`` holds
one dependent/independent flag per switchable column.  Enumeration order is
lexicographic in (p, q, mask-as-binary-integer) with bit i of the mask
integer belonging to the i-th switchable column; that order is also the
deterministic tie-breaker used by every search engine.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..errors import EmptySpaceError
from ..model import ModelConfig, TimeSeriesDataset, validate_config

__all__ = [
    "PartitionMode",
    "SearchMethod",
    "SearchSpace",
    "SearchBudget",
    "SearchResult",
    "enumerate_space",
]


class PartitionMode(enum.Enum):
    FIXED = "fixed"
    SEARCH = "search"


class SearchMethod(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    GA = "ga"
    TABU = "tabu"
    GRASP = "grasp"
    SCATTER = "scatter"
    HYBRID = "hybrid"

    @classmethod
    def from_string(cls, text):
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown method {text!r}; expected one of "
                f"{[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class SearchSpace:
    """Bounds of the configuration search.

    ``p`` ranges over [1, p_max], ``q`` over [0, q_max].  In FIXED mode the
    variable partition comes from the dataset roles; in SEARCH mode the
    columns listed in ``switchable`` have their role searched while all
    others keep their dataset role.
    """

    p_max: int
    q_max: int = 0
    partition_mode: PartitionMode = PartitionMode.FIXED
    switchable: tuple = ()
    include_constant: bool = True

    def __post_init__(self):
        if self.p_max < 1:
            raise ValueError(f"p_max must be >= 1, got {self.p_max}")
        if self.q_max < 0:
            raise ValueError(f"q_max must be >= 0, got {self.q_max}")
        switchable = tuple(sorted(int(i) for i in self.switchable))
        if len(set(switchable)) != len(switchable):
            raise ValueError("switchable column indices must be unique")
        if self.partition_mode is PartitionMode.FIXED and switchable:
            raise ValueError("switchable columns require partition_mode=SEARCH")
        object.__setattr__(self, "switchable", switchable)

    @property
    def n_bits(self) -> int:
        return len(self.switchable) if self.partition_mode is PartitionMode.SEARCH else 0

    @property
    def mask_count(self) -> int:
        return 1 << self.n_bits

    def raw_size(self) -> int:
        """Size before validity filtering."""
        return self.p_max * (self.q_max + 1) * self.mask_count

    @property
    def common_row_start(self) -> int:
        """First regression row shared by every candidate: max(p_max, q_max)."""
        return max(self.p_max, self.q_max)

    def genome_for(self, cfg: ModelConfig) -> tuple:
        bits = tuple(int(cfg.dependent_mask[i]) for i in self.switchable)
        return (cfg.p, cfg.q, bits)

    def config_from_genome(self, genome, ds: TimeSeriesDataset) -> ModelConfig:
        p, q, bits = genome
        mask = list(ds.base_mask)
        for i, col in enumerate(self.switchable):
            mask[col] = bool(bits[i])
        return ModelConfig(
            p=p, q=q, dependent_mask=tuple(mask), include_constant=self.include_constant
        )

    def iter_genomes(self):
        """All genomes in (p, q, mask-integer) lexicographic order."""
        for p in range(1, self.p_max + 1):
            for q in range(self.q_max + 1):
                for mask_int in range(self.mask_count):
                    bits = tuple((mask_int >> i) & 1 for i in range(self.n_bits))
                    yield (p, q, bits)

    @staticmethod
    def genome_order_key(genome) -> tuple:
        p, q, bits = genome
        mask_int = sum(b << i for i, b in enumerate(bits))
        return (p, q, mask_int)


@dataclass(frozen=True)
class SearchBudget:
    """Evaluation budget and seed shared by all search engines.

    ``max_evaluations`` counts least-squares fits of distinct candidates;
    repeat visits are served from a cache for free.  ``stagnation_limit``
    stops a search after that many evaluations without improvement.
    """

    max_evaluations: int
    stagnation_limit: int = 200
    master_seed: int = 0

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        if self.stagnation_limit < 1:
            raise ValueError("stagnation_limit must be >= 1")
        if not 0 <= self.master_seed < (1 << 64):
            raise ValueError("master_seed must be an unsigned 64-bit integer")


@dataclass
class SearchResult:
    """Outcome of one search run.

    ``trajectory`` lists (evaluation index, best-so-far value) at each
    improvement, so its values are non-increasing.  ``candidate_log``
    records every evaluated candidate in evaluation order.
    """

    best_config: ModelConfig
    best_fit: object
    best_value: float
    evaluations_used: int
    trajectory: list = field(default_factory=list)
    candidate_log: list = None
    skipped_invalid: int = 0
    method: str = ""


def enumerate_space(space: SearchSpace, ds: TimeSeriesDataset) -> list:
    """All valid configurations in deterministic lexicographic order.

    Invalid members (per ``validate_config`` at each candidate's natural
    row start) are silently excluded.

    Raises
    ------
    EmptySpaceError
        When no valid configuration remains.
    """
    configs = []
    for genome in space.iter_genomes():
        cfg = space.config_from_genome(genome, ds)
        if not validate_config(cfg, ds):
            configs.append(cfg)
    if not configs:
        raise EmptySpaceError(
            "no valid configuration in the search space for this dataset"
        )
    return configs
