"""
Core functionality for Gibbs Explorer

Counting measures, windows, reference measures, estimates, random streams,
configuration management and the error hierarchy. The run engine lives in
core.engine and is imported from there.
"""

from .config_manager import ConfigManager, get_config
from .counting import (
    CountingMeasure,
    Point,
    eval_by_representation,
    factorial_mass,
    factorial_tuples,
    falling_factorial,
    remove_point,
    total,
)
from .errors import (
    ConfigValidationError,
    GeometryError,
    GibbsExplorerError,
    NotLocallyStableError,
    RejectionBudgetExceeded,
    SeriesNotSummableError,
    VerificationFailure,
)
from .estimate import Estimate
from .reference import ConstantIntensity, Intensity, LinearIntensity, ReferenceMeasure
from .seeding import RandomStreams, SeedRecord
from .window import Window

__all__ = [
    "ConfigManager", "get_config",
    "CountingMeasure", "Point", "total", "remove_point", "factorial_tuples",
    "falling_factorial", "factorial_mass", "eval_by_representation",
    "GibbsExplorerError", "ConfigValidationError", "NotLocallyStableError",
    "RejectionBudgetExceeded", "SeriesNotSummableError", "GeometryError", "VerificationFailure",
    "Estimate", "Intensity", "ConstantIntensity", "LinearIntensity", "ReferenceMeasure",
    "RandomStreams", "SeedRecord", "Window",
]
