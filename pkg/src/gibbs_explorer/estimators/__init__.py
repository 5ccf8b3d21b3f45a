"""Janossy measures, factorial moments and their conversion series"""

from .conversions import factorial_from_janossy, janossy_from_factorial
from .janossy import (
    JanossyBoundRow,
    estimate_janossy_mass,
    janossy_bound_monitor,
    janossy_from_kappa,
    janossy_masses,
)
from .moments import (
    MomentTable,
    RuelleRow,
    TwoPowerCheck,
    converted_factorial_moment,
    correlation_from_kappa,
    estimate_factorial_moment,
    moment_table,
    ruelle_monitor,
    two_power_identity,
)

__all__ = [
    "estimate_janossy_mass", "janossy_masses", "janossy_from_kappa", "janossy_bound_monitor",
    "JanossyBoundRow", "estimate_factorial_moment", "converted_factorial_moment",
    "correlation_from_kappa", "moment_table", "MomentTable", "ruelle_monitor", "RuelleRow",
    "two_power_identity", "TwoPowerCheck", "factorial_from_janossy", "janossy_from_factorial",
]
