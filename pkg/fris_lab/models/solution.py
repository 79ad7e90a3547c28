"""Optimizer-facing types: phase vectors, candidates, CEO tilting parameters and traces."""

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.errors import InvalidInputError

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class PhaseVector:
    """Discrete phases stored as integer levels v in 1..2**bits; angle = v * 2pi / 2**bits."""

    levels: np.ndarray
    bits: int

    def __post_init__(self) -> None:
        levels = np.array(self.levels, dtype=np.int64)
        if self.bits < 1:
            raise InvalidInputError(f"phase resolution must be at least 1 bit, got {self.bits}")
        if levels.ndim != 1:
            raise InvalidInputError("phase levels must be a vector")
        if levels.size and (levels.min() < 1 or levels.max() > self.v_count):
            raise InvalidInputError(f"phase levels must lie in 1..{self.v_count}")
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    @property
    def v_count(self) -> int:
        return 2 ** self.bits

    @property
    def angles(self) -> np.ndarray:
        return self.levels * (2.0 * np.pi / self.v_count)

    def __len__(self) -> int:
        return int(self.levels.size)


@dataclass(frozen=True)
class Candidate:
    """A feasible solution: binary selection xi with exactly len(phi) ones, its phases and rate."""

    xi: np.ndarray
    phi: PhaseVector
    rate: float

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi, dtype=np.int8)
        if not np.isin(xi, (0, 1)).all():
            raise InvalidInputError("selection vector must be binary")
        if int(xi.sum()) != len(self.phi):
            raise InvalidInputError(
                f"selection has {int(xi.sum())} active elements but {len(self.phi)} phases"
            )
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @property
    def selected(self) -> np.ndarray:
        """Active element indices in ascending order (slot k pairs with the k-th of these)."""
        return np.flatnonzero(self.xi)


@dataclass(frozen=True)
class TiltingParams:
    """CEO sampling parameters: phase probabilities p (M_hat x V) and selection probabilities g (M)."""

    p: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if p.ndim != 2 or g.ndim != 1:
            raise InvalidInputError("p must be a matrix and g a vector")
        if (p < -ROW_SUM_TOL).any() or not np.allclose(p.sum(axis=1), 1.0, rtol=0, atol=ROW_SUM_TOL):
            raise InvalidInputError("rows of p must be nonnegative and sum to 1")
        if (g < -ROW_SUM_TOL).any() or (g > 1 + ROW_SUM_TOL).any():
            raise InvalidInputError("entries of g must lie in [0, 1]")
        p.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "g", g)

    @property
    def m(self) -> int:
        return self.g.size

    @property
    def m_hat(self) -> int:
        return self.p.shape[0]

    @property
    def v_count(self) -> int:
        return self.p.shape[1]


def elite_count(sample_count: int, elite_frac: float) -> int:
    """ceil(elite_frac * sample_count), at least 1."""
    # rounding first keeps products such as 0.05 * 60 from ceiling to 4
    return max(1, math.ceil(round(elite_frac * sample_count, 9)))


class CeoConfig(BaseModel):
    """Cross-entropy loop settings.

    ``max_redraws`` is the number of rounds in which draws repeating a candidate already
    scored in the same run are replaced; repeats left after the last round are scored as
    drawn, and 0 scores every draw as it comes.
    """

    model_config = ConfigDict(frozen=True)

    sample_count_a: int = Field(ge=2)
    elite_frac: float = Field(default=0.05, gt=0, lt=1)
    smoothing: float = Field(default=0.55, gt=0, lt=1)
    tol: float = Field(default=1e-4, gt=0)
    max_iter: int = Field(default=500, ge=1)
    patience: int = Field(default=1, ge=1)
    prob_floor: float = Field(default=0.0, ge=0, lt=0.5)
    max_redraws: int = Field(default=50, ge=0)

    @property
    def elite_count(self) -> int:
        return elite_count(self.sample_count_a, self.elite_frac)

    @model_validator(mode="after")
    def _elite_fits(self) -> "CeoConfig":
        if self.elite_count > self.sample_count_a:
            raise InvalidInputError("elite set larger than the sample count")
        return self


@dataclass
class CeoTrace:
    """Per-iteration history of one optimize call."""

    best_rates: List[float] = field(default_factory=list)
    sampled_best: List[float] = field(default_factory=list)
    mean_elite_rates: List[float] = field(default_factory=list)
    elite_thresholds: List[float] = field(default_factory=list)
    elite_size: int = 0
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.best_rates)


@dataclass(frozen=True)
class OracleResult:
    best_xi: np.ndarray
    best_phi: PhaseVector
    best_rate: float
    evaluations: int

    def as_candidate(self) -> Candidate:
        return Candidate(xi=self.best_xi, phi=self.best_phi, rate=self.best_rate)


@dataclass(frozen=True)
class SubgridPlan:
    """Rows and columns of the benchmark sub-lattice; fallback marks a trimmed factorization."""

    rows: tuple
    cols: tuple
    fallback: bool
    dropped: int = 0


@dataclass(frozen=True)
class RisBaselineResult:
    best: Candidate
    trace: CeoTrace
    aligned: Candidate
    fallback: bool
