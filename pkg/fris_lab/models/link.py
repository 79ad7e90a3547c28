from dataclasses import dataclass
import hashlib

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from utils.errors import InvalidInputError


class LinkParams(BaseModel):
    """Large-scale parameters of one hop: power gain rho at 1 m, exponent alpha, distance."""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(gt=0)
    alpha: float = Field(gt=0)
    distance_m: float = Field(gt=0)


class RadioParams(BaseModel):
    """Transmit and noise power, both in watts."""

    model_config = ConfigDict(frozen=True)

    power_w: float = Field(gt=0)
    noise_w: float = Field(gt=0)

    @property
    def snr_scale(self) -> float:
        return self.power_w / self.noise_w


@dataclass(frozen=True)
class ChannelRealization:
    """One Monte-Carlo draw: BS->surface, surface->user, and the correlated surface->user vector."""

    h_br: np.ndarray
    h_ru: np.ndarray
    h_ru_corr: np.ndarray

    def __post_init__(self) -> None:
        for name in ("h_br", "h_ru", "h_ru_corr"):
            vec = np.array(getattr(self, name), dtype=complex)
            if vec.ndim != 1:
                raise InvalidInputError(f"{name} must be a vector")
            if not np.all(np.isfinite(vec)):
                raise InvalidInputError(f"{name} contains non-finite entries")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)
        if not self.h_br.shape == self.h_ru.shape == self.h_ru_corr.shape:
            raise InvalidInputError("channel vectors must have the same length")

    @property
    def m(self) -> int:
        return self.h_br.shape[0]

    def digest(self) -> str:
        sha = hashlib.sha256()
        for vec in (self.h_br, self.h_ru, self.h_ru_corr):
            sha.update(np.ascontiguousarray(vec, dtype=np.complex128).tobytes())
        return sha.hexdigest()
