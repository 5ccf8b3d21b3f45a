"""
Series conversions between Janossy masses and factorial moment masses

For a bounded B and a sub-box D:
  alpha_m(D x B^{k-m}) = sum_{k >= m} k!/(k-m)! J_k(D x B^{k-m})
  J_m(B^m)             = (1/m!) sum_{k >= 0} (-1)^k / k! alpha_{m+k}(B^{m+k})
Input sequences are indexed by order starting at 0. A sequence shorter
than the cutoff is complete (all later terms vanish); a longer one is
truncated at the cutoff and its last used term must have decayed.
"""

import math
from typing import Optional, Sequence, Tuple

from gibbs_explorer.core.errors import SeriesNotSummableError

DEFAULT_EXTRA_TERMS = 30
DECAY_TOLERANCE = 1e-8


def _check_decay(last_term: float, total: float, condition: str, cutoff: int):
    if abs(last_term) > DECAY_TOLERANCE * max(1.0, abs(total)):
        raise SeriesNotSummableError(condition, cutoff, last_term)


def factorial_from_janossy(janossy: Sequence[float], m: int, cutoff: Optional[int] = None) -> float:
    """alpha_m from Janossy masses J_k, k = 0, 1, ..."""
    if m < 1:
        raise ValueError(f"factorial moment order must be at least 1, got {m}")
    cutoff = m + DEFAULT_EXTRA_TERMS if cutoff is None else cutoff
    last = min(len(janossy) - 1, cutoff)
    terms = [math.perm(k, m) * janossy[k] for k in range(m, last + 1)]
    value = math.fsum(terms)
    if len(janossy) - 1 > cutoff and terms:
        _check_decay(terms[-1], value, "sum_k k!/(k-m)! J_k converges", cutoff)
    return value


def janossy_from_factorial(alphas: Sequence[float], m: int, cutoff: Optional[int] = None,
                           ruelle_ceiling: Optional[float] = None) -> Tuple[float, float]:
    """
    J_m(B^m) from factorial moment masses alpha_k(B^k), k = 0, 1, ... (alpha_0 = 1)

    Returns (value, remainder). The remainder bounds the dropped tail by
    c^m c^n / n! e^c when a Ruelle ceiling c (alpha_l <= c^l) is known, n
    the number of summed terms; otherwise it is the size of the last term.
    """
    if m < 0:
        raise ValueError(f"Janossy order must be nonnegative, got {m}")
    cutoff = m + DEFAULT_EXTRA_TERMS if cutoff is None else cutoff
    last = min(len(alphas) - 1, cutoff)
    if last < m:
        return 0.0, 0.0
    magnitudes = [alphas[m + k] / math.factorial(k) for k in range(last - m + 1)]
    terms = [(-1) ** k * a for k, a in enumerate(magnitudes)]
    scale = 1.0 / math.factorial(m)
    value = scale * math.fsum(terms)
    truncated = len(alphas) - 1 > cutoff
    if truncated:
        _check_decay(magnitudes[-1], math.fsum(magnitudes),
                     "sum_k alpha_{m+k}(B^{m+k}) / k! < inf", cutoff)
    if not truncated:
        remainder = 0.0
    elif ruelle_ceiling is not None:
        n = len(magnitudes)
        c = float(ruelle_ceiling)
        remainder = scale * c ** m * c ** n / math.factorial(n) * math.exp(c)
    else:
        remainder = scale * magnitudes[-1]
    return value, remainder
