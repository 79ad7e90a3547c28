from .surface import SurfaceGrid, CorrelationModel
from .link import LinkParams, RadioParams, ChannelRealization
from .solution import (
    PhaseVector,
    Candidate,
    TiltingParams,
    CeoConfig,
    CeoTrace,
    OracleResult,
    SubgridPlan,
    RisBaselineResult,
)
from .experiment import Scheme, SCHEME_STREAM_KEYS, ExperimentConfig, ResultRecord, CSV_COLUMNS

__all__ = [
    'SurfaceGrid',
    'CorrelationModel',
    'LinkParams',
    'RadioParams',
    'ChannelRealization',
    'PhaseVector',
    'Candidate',
    'TiltingParams',
    'CeoConfig',
    'CeoTrace',
    'OracleResult',
    'SubgridPlan',
    'RisBaselineResult',
    'Scheme',
    'SCHEME_STREAM_KEYS',
    'ExperimentConfig',
    'ResultRecord',
    'CSV_COLUMNS',
]
