# Surface geometry and its spatial-correlation model. SurfaceGrid is a plain validated value;
# CorrelationModel carries the dense matrices and is frozen after construction.
import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)


class SurfaceGrid(BaseModel):
    """Element lattice of the surface: my elements per row, mz rows, uniform spacing."""

    model_config = ConfigDict(frozen=True)

    my: int = Field(ge=1, description="elements along y (per lattice row)")
    mz: int = Field(ge=1, description="elements along z (lattice rows)")
    spacing_m: float = Field(gt=0, description="inter-element spacing d in meters")
    wavelength_m: float = Field(gt=0, description="carrier wavelength in meters")

    @property
    def m(self) -> int:
        return self.my * self.mz

    @property
    def dense(self) -> bool:
        return self.spacing_m < self.wavelength_m / 2

    @model_validator(mode="after")
    def _warn_sparse_grid(self) -> "SurfaceGrid":
        if not self.dense:
            logger.warning(
                "⚠️ Element spacing %.5f m is not below half a wavelength (%.5f m)",
                self.spacing_m, self.wavelength_m / 2,
            )
        return self


@dataclass(frozen=True)
class CorrelationModel:
    """Jakes correlation matrix J, its symmetric PSD root and the eigenvalue clamp used."""

    j: np.ndarray
    j_sqrt: np.ndarray
    eigen_floor: float = 0.0

    def __post_init__(self) -> None:
        self.j.setflags(write=False)
        self.j_sqrt.setflags(write=False)

    @property
    def m(self) -> int:
        return self.j.shape[0]
