"""Kaplan-Yorke formula, finite-time dimensions and attractor sampling."""

from chua_lyapunov.lyapunov.dimension import (
    dimension_ladder,
    dimension_report,
    entropy_upper_bound,
    kaplan_yorke,
    liminf_proxy,
    local_dimension,
    set_dimension,
)
from chua_lyapunov.lyapunov.models import (
    AttractorSample,
    DimensionReport,
    LadderRung,
    OrderedExponents,
    PointDimension,
    SampleSource,
    SeedFailure,
)
from chua_lyapunov.lyapunov.sampling import sample_attractor, sample_count

__all__ = [
    "AttractorSample",
    "DimensionReport",
    "LadderRung",
    "OrderedExponents",
    "PointDimension",
    "SampleSource",
    "SeedFailure",
    "dimension_ladder",
    "dimension_report",
    "entropy_upper_bound",
    "kaplan_yorke",
    "liminf_proxy",
    "local_dimension",
    "sample_attractor",
    "sample_count",
    "set_dimension",
]
