import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from designbench import FinitePopulation, sample_assignment


def random_population(seed, n=20, k=2, n1=None, effect=1.0):
    """Population with linear signal plus noise in both arms."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, k))
    slope1 = rng.normal(size=k)
    slope0 = rng.normal(size=k)
    y1 = effect + X @ slope1 + rng.normal(size=n)
    y0 = X @ slope0 + rng.normal(size=n)
    return FinitePopulation(y1=y1, y0=y0, X=X, n1=n1 if n1 is not None else n // 2)


def random_sample(seed, n=40, k=3, n1=None, effect=1.0):
    pop = random_population(seed, n=n, k=k, n1=n1, effect=effect)
    t = sample_assignment(pop.n, pop.n1, seed + 10_000)
    return pop.observe(t)


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)
