"""Grenander estimator, integral functionals and the Poisson-gamma representation."""
from .estimator import (
    JumpProfile,
    Sample,
    StepDensity,
    blocks,
    ecdf_vertices,
    grenander,
    grenander_oracle,
    jump_profile,
    least_concave_majorant,
    rescale_to_max,
)
from .functionals import (
    ENTROPY,
    L2,
    FunctionalSpec,
    StatisticValue,
    entropy_statistic,
    integral_functional,
    jump_count_statistic,
    l2_statistic,
)

__version__ = "0.1.0"
