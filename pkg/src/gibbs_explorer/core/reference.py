"""
Intensity functions and the reference measure lambda = intensity * Lebesgue

Intensities double as local-stability bounds theta of the models, so they
expose a supremum over a window in addition to evaluation and integration.
"""

from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
from scipy import integrate

from .window import Window


class Intensity(ABC):
    """Nonnegative function on R^d with a known supremum on bounded boxes"""

    name = "intensity"

    @abstractmethod
    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        """Values at the rows of an (n, d) array"""

    @abstractmethod
    def sup(self, window: Window) -> float:
        """Upper bound of the function on the window"""

    def integrate(self, window: Window) -> float:
        def integrand(*x):
            return float(self.evaluate(np.asarray([x]))[0])

        value, _ = integrate.nquad(integrand, list(zip(window.lower, window.upper)))
        return float(value)

    @property
    def is_constant(self) -> bool:
        return False

    def __call__(self, coords) -> float:
        """Value at a single location"""
        return float(self.evaluate(np.asarray(coords, dtype=float).reshape(1, -1))[0])

    def times(self, other: "Intensity") -> "Intensity":
        if self.is_constant and other.is_constant:
            return ConstantIntensity(self.value * other.value)
        return ProductIntensity(self, other)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name}


class ConstantIntensity(Intensity):
    name = "constant"

    def __init__(self, value: float = 1.0):
        if not np.isfinite(value) or value < 0:
            raise ValueError(f"constant intensity must be finite and nonnegative, got {value}")
        self.value = float(value)

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return np.full(np.asarray(coords).shape[0], self.value)

    def sup(self, window: Window) -> float:
        return self.value

    def integrate(self, window: Window) -> float:
        return self.value * window.volume

    @property
    def is_constant(self) -> bool:
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name, "value": self.value}

    def __repr__(self) -> str:
        return f"ConstantIntensity({self.value:g})"


class LinearIntensity(Intensity):
    """max(0, base + gradient . x)"""

    name = "linear"

    def __init__(self, base: float, gradient: Sequence[float]):
        self.base = float(base)
        self.gradient = np.asarray(gradient, dtype=float)
        if not np.all(np.isfinite(self.gradient)) or not np.isfinite(self.base):
            raise ValueError("linear intensity parameters must be finite")

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, self.base + np.asarray(coords, dtype=float) @ self.gradient)

    def _corners(self, window: Window) -> np.ndarray:
        grids = np.meshgrid(*[(lo, hi) for lo, hi in zip(window.lower, window.upper)])
        return np.stack([g.ravel() for g in grids], axis=1)

    def sup(self, window: Window) -> float:
        return float(np.max(self.evaluate(self._corners(window))))

    def integrate(self, window: Window) -> float:
        if np.all(self.base + self._corners(window) @ self.gradient >= 0):
            return float((self.base + window.center @ self.gradient) * window.volume)
        return super().integrate(window)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name, "base": self.base, "gradient": self.gradient.tolist()}


class FunctionIntensity(Intensity):
    """User callable on (n, d) arrays with a declared global ceiling"""

    name = "function"

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], ceiling: float, label: str = "function"):
        if not np.isfinite(ceiling) or ceiling < 0:
            raise ValueError(f"function intensity needs a finite ceiling, got {ceiling}")
        self.fn = fn
        self.ceiling = float(ceiling)
        self.label = label

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.atleast_2d(np.asarray(coords, dtype=float))), dtype=float)

    def sup(self, window: Window) -> float:
        return self.ceiling

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name, "label": self.label, "ceiling": self.ceiling}


class ProductIntensity(Intensity):
    name = "product"

    def __init__(self, left: Intensity, right: Intensity):
        self.left = left
        self.right = right

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return self.left.evaluate(coords) * self.right.evaluate(coords)

    def sup(self, window: Window) -> float:
        return self.left.sup(window) * self.right.sup(window)

    def integrate(self, window: Window) -> float:
        if self.left.is_constant:
            return self.left.value * self.right.integrate(window)
        if self.right.is_constant:
            return self.right.value * self.left.integrate(window)
        return super().integrate(window)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name, "factors": [self.left.to_dict(), self.right.to_dict()]}


def intensity_from_config(section: Any) -> Intensity:
    """Build an intensity from a number or a {family: ...} mapping"""
    if isinstance(section, (int, float)):
        return ConstantIntensity(float(section))
    family = section.get("family", "constant")
    if family == "constant":
        return ConstantIntensity(float(section.get("value", 1.0)))
    if family == "linear":
        return LinearIntensity(section["base"], section["gradient"])
    raise ValueError(f"unknown intensity family '{family}'")


class ReferenceMeasure:
    """
    lambda(dx) = intensity(x) dx on R^d

    Total mass over a window is finite for every shipped intensity family;
    mass() checks it.
    """

    def __init__(self, intensity: Optional[Intensity] = None):
        self.intensity = intensity or ConstantIntensity(1.0)

    @property
    def is_lebesgue(self) -> bool:
        return self.intensity.is_constant and self.intensity.value == 1.0

    def density(self, coords: np.ndarray) -> np.ndarray:
        return self.intensity.evaluate(coords)

    def mass(self, window: Window) -> float:
        value = self.intensity.integrate(window)
        if not np.isfinite(value) or value < 0:
            raise ValueError(f"reference measure mass over {window} is not finite: {value}")
        return float(value)

    def weighted(self, theta: Intensity) -> "ReferenceMeasure":
        """The measure theta * lambda"""
        return ReferenceMeasure(theta.times(self.intensity))

    def sample_locations(self, window: Window, rng: np.random.Generator, size: int) -> np.ndarray:
        """size i.i.d. locations with density intensity / mass on the window"""
        if size == 0:
            return np.empty((0, window.dim))
        if self.intensity.is_constant:
            return window.sample_uniform(rng, size)
        ceiling = self.intensity.sup(window)
        accepted = []
        remaining = size
        while remaining > 0:
            batch = window.sample_uniform(rng, max(2 * remaining, 16))
            keep = rng.uniform(0.0, ceiling, size=batch.shape[0]) < self.intensity.evaluate(batch)
            accepted.append(batch[keep][:remaining])
            remaining -= accepted[-1].shape[0]
        return np.concatenate(accepted, axis=0)

    def to_dict(self) -> Dict[str, Any]:
        return {"intensity": self.intensity.to_dict()}

    def __repr__(self) -> str:
        return f"ReferenceMeasure({self.intensity!r})"
