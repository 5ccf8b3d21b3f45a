"""
Poisson sampling and mark randomization
"""

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.window import Window


def sample_poisson(ref: ReferenceMeasure, window: Window, rng: np.random.Generator) -> CountingMeasure:
    """Poisson process with intensity measure ref restricted to the window"""
    mass = ref.mass(window)
    count = int(rng.poisson(mass)) if mass > 0 else 0
    return CountingMeasure(ref.sample_locations(window, rng, count))


def randomize(eta: CountingMeasure, rng: np.random.Generator) -> CountingMeasure:
    """Attach i.i.d. uniform [0, 1] marks in list order"""
    return eta.with_marks(rng.uniform(size=len(eta)))
