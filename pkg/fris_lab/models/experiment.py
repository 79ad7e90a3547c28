# This model defines the experiment configuration schema, read from key = value files and CLI
# overrides, and the per-(trial, scheme) result record persisted to CSV.
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Scheme(str, Enum):
    FRIS = "fris"
    RIS = "ris"
    ALIGNED = "aligned"
    ORACLE = "oracle"


# Fixed per-scheme generator keys; a scheme's stream never depends on which others run.
SCHEME_STREAM_KEYS = {
    Scheme.FRIS: 1,
    Scheme.RIS: 2,
    Scheme.ALIGNED: 3,
    Scheme.ORACLE: 4,
}


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        json_schema_extra={
            "example": {
                "power_dbm": 30,
                "noise_dbm": -90,
                "my": 10,
                "mz": 10,
                "m_hat": 25,
                "bits": 2,
                "trials": 200,
                "schemes": "fris,ris",
            }
        },
    )

    power_dbm: float = 30.0
    noise_dbm: float = -90.0
    rho_db: float = -20.0
    alpha: float = Field(default=2.6, gt=0)
    fc_hz: float = Field(default=5e9, gt=0)
    surface_side_lambda: float = Field(default=2.0, gt=0)
    my: int = Field(default=10, ge=1)
    mz: int = Field(default=10, ge=1)
    m_hat: int = Field(default=25, ge=1)
    bits: int = Field(default=2, ge=1, le=16)
    d_br_m: float = Field(default=400.0, gt=0)
    d_ru_m: float = Field(default=75.0, gt=0)
    sample_factor: float = Field(default=5.0, gt=0)
    elite_frac: float = Field(default=0.05, gt=0, lt=1)
    smoothing: float = Field(default=0.55, gt=0, lt=1)
    tol: float = Field(default=1e-4, gt=0)
    max_iter: int = Field(default=500, ge=1)
    trials: int = Field(default=100, ge=1)
    master_seed: int = Field(default=0, ge=0)
    schemes: Tuple[Scheme, ...] = (Scheme.FRIS, Scheme.RIS)
    correlate_both: bool = False
    out_path: str = "results.csv"

    oracle_budget: int = Field(default=1_000_000, ge=1)
    eigen_floor: float = Field(default=0.0, ge=0)
    prob_floor: float = Field(default=0.0, ge=0, lt=0.5)
    patience: int = Field(default=1, ge=1)
    max_redraws: int = Field(default=50, ge=0)
    ris_m_hat: Optional[int] = Field(default=None, ge=1)
    ris_bits: Optional[int] = Field(default=None, ge=1, le=16)
    workers: int = Field(default=1, ge=1)
    record_wall_time: bool = False

    @field_validator("schemes", mode="before")
    @classmethod
    def _split_schemes(cls, value):
        if isinstance(value, str):
            value = [item.strip().lower() for item in value.split(",") if item.strip()]
        return value

    @model_validator(mode="after")
    def _check_counts(self) -> "ExperimentConfig":
        if not self.schemes:
            raise ValueError("schemes must name at least one of fris, ris, aligned, oracle")
        if len(set(self.schemes)) != len(self.schemes):
            raise ValueError("schemes must not repeat")
        if self.m_hat > self.m:
            raise ValueError(f"m_hat={self.m_hat} exceeds the {self.m} surface elements")
        if self.benchmark_m_hat > self.m:
            raise ValueError(f"ris_m_hat={self.benchmark_m_hat} exceeds the {self.m} surface elements")
        if self.sample_count < 2:
            raise ValueError("sample_factor * (M + m_hat) must give at least 2 samples")
        return self

    @property
    def m(self) -> int:
        return self.my * self.mz

    @property
    def sample_count(self) -> int:
        return int(round(self.sample_factor * (self.m + self.m_hat)))

    @property
    def benchmark_m_hat(self) -> int:
        return self.ris_m_hat if self.ris_m_hat is not None else self.m_hat

    @property
    def benchmark_bits(self) -> int:
        return self.ris_bits if self.ris_bits is not None else self.bits

    def benchmark_sample_count(self) -> int:
        return int(round(self.sample_factor * (self.m + self.benchmark_m_hat)))


CSV_COLUMNS = (
    "trial", "scheme", "my", "mz", "m_hat", "bits", "seed",
    "iterations", "converged", "rate_bps_hz", "wall_ms",
)


class ResultRecord(BaseModel):
    trial: int = Field(ge=0)
    scheme: Scheme
    my: int
    mz: int
    m_hat: int
    bits: int
    seed: int
    iterations: int
    converged: bool
    rate_bps_hz: float = Field(ge=0)
    wall_ms: float = Field(default=0.0, ge=0)
    failure: Optional[str] = Field(default=None, exclude=True)
    subgrid_fallback: bool = Field(default=False, exclude=True)
    channel_digest: str = Field(default="", exclude=True)

    @property
    def failed(self) -> bool:
        return self.failure is not None
