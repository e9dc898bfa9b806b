"""Shared per-sample regression state.

Point estimators and variance estimators all consume the same three
objects: the within-arm OLS fits and the Gram factor of the full-sample
design. ``SampleFits`` computes each lazily and caches it so that a
Monte Carlo replication fits each arm exactly once no matter how many
estimators and standard errors are requested.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularGram
from .linalg import GramFactor, OlsFit, ols_fit
from .population import ObservedSample


class SampleFits:
    """Lazy cache of arm fits and the full-sample Gram factor."""

    def __init__(self, sample: ObservedSample):
        self.sample = sample
        self._arm: dict[int, OlsFit] = {}
        self._full: GramFactor | None = None

    def arm_mask(self, t: int) -> np.ndarray:
        return self.sample.t == t

    def arm(self, t: int) -> OlsFit:
        """Within-arm OLS fit of the observed outcome on the design."""
        if t not in self._arm:
            mask = self.arm_mask(t)
            Z = self.sample.design[mask]
            n_t, p = Z.shape
            if n_t < p:
                label = "treated" if t == 1 else "control"
                raise SingularGram(
                    f"{label} arm has {n_t} units for {p} regressors"
                )
            self._arm[t] = ols_fit(Z, self.sample.y[mask])
        return self._arm[t]

    def full_gram(self) -> GramFactor:
        """Gram factor of the design over all n units."""
        if self._full is None:
            self._full = GramFactor(self.sample.design)
        return self._full

    def unit_residuals(self) -> np.ndarray:
        """Within-arm residuals scattered back to unit order."""
        e = np.empty(self.sample.n)
        for t in (1, 0):
            e[self.arm_mask(t)] = self.arm(t).residuals
        return e

    def unit_arm_leverages(self) -> np.ndarray:
        """Within-arm hat diagonals scattered back to unit order."""
        lev = np.empty(self.sample.n)
        for t in (1, 0):
            lev[self.arm_mask(t)] = self.arm(t).leverages
        return lev
