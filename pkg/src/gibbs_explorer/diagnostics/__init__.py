"""Statistical verification of finite-volume Gibbs samples"""

from .convergence import (
    ConvergenceRow,
    DisagreementRow,
    disagreement_probe,
    disagreement_sweep,
    local_convergence_probe,
    scale_configuration,
)
from .dlr import dlr_test
from .functions import (
    LocalFunction,
    PairFunction,
    PointFunction,
    local_family,
    pair_family,
    select_functions,
    standard_family,
)
from .gnz import count_identity, gnz_multivariate_test, gnz_test
from .report import TestReport, VerificationSummary, summarize_reports

__all__ = [
    "TestReport", "VerificationSummary", "summarize_reports",
    "PointFunction", "PairFunction", "LocalFunction", "standard_family", "pair_family", "local_family",
    "select_functions", "gnz_test", "gnz_multivariate_test", "count_identity", "dlr_test",
    "local_convergence_probe", "disagreement_probe", "disagreement_sweep", "scale_configuration",
    "ConvergenceRow", "DisagreementRow",
]
