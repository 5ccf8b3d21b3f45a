"""
Monte Carlo estimates with standard errors
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable

import numpy as np


@dataclass(frozen=True)
class Estimate:
    """Value with standard error and sample count; stderr is 0 for exact values"""

    value: float
    stderr: float = 0.0
    n: int = 0

    def __post_init__(self):
        if self.stderr < 0 or math.isnan(self.stderr):
            raise ValueError(f"stderr must be nonnegative, got {self.stderr}")

    @classmethod
    def exact(cls, value: float) -> "Estimate":
        return cls(float(value), 0.0, 0)

    @classmethod
    def from_samples(cls, values: Iterable[float]) -> "Estimate":
        """Sample mean with stderr = sample standard deviation / sqrt(n)"""
        data = np.asarray(list(values), dtype=float)
        n = int(data.size)
        if n == 0:
            raise ValueError("cannot estimate from an empty sample")
        stderr = float(np.std(data, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(float(np.mean(data)), stderr, n)

    def scaled(self, factor: float) -> "Estimate":
        return Estimate(self.value * factor, self.stderr * abs(factor), self.n)

    def shifted(self, offset: float) -> "Estimate":
        return Estimate(self.value + offset, self.stderr, self.n)

    def plus(self, other: "Estimate") -> "Estimate":
        """Sum of independent estimates"""
        return Estimate(self.value + other.value, math.hypot(self.stderr, other.stderr), self.n + other.n)

    def reciprocal(self) -> "Estimate":
        """1/value with delta-method error stderr / value^2"""
        if self.value == 0:
            raise ZeroDivisionError("reciprocal of a zero estimate")
        return Estimate(1.0 / self.value, self.stderr / self.value ** 2, self.n)

    def z_score(self, other: "Estimate") -> float:
        combined = math.hypot(self.stderr, other.stderr)
        difference = self.value - other.value
        if combined == 0:
            return 0.0 if difference == 0 else math.copysign(math.inf, difference)
        return difference / combined

    def agrees_with(self, other: "Estimate", threshold: float = 3.0) -> bool:
        return abs(self.z_score(other)) < threshold

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "stderr": self.stderr, "n": self.n}

    def __str__(self) -> str:
        return f"{self.value:.6g} +/- {self.stderr:.2g} (n={self.n})"
