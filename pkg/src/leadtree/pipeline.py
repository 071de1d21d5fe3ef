"""End-to-end helpers: points or distances in, profile and leading tree out."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import CondensedDistanceMatrix, Dataset, compute_density, pairwise_distances
from .ltree import LeadingTree, build, forest_labels, split
from .peaks import PeakProfile, peak_profile, select_centers


@dataclass(frozen=True)
class Fit:
    """Output of :func:`fit`."""

    profile: PeakProfile
    tree: LeadingTree

    @property
    def dc(self) -> float:
        return self.profile.dc

    def labels(self, m: int) -> np.ndarray:
        """Flat clustering with the top ``m`` gamma points as centers."""
        centers = select_centers(self.profile.gamma_order, m)
        return forest_labels(split(self.tree, centers, mode="prefix_fast"))


def fit(data, kernel="gaussian", dc=None, percent=2.0) -> Fit:
    """Density, peaks and leading tree for a dataset or a distance matrix."""
    if isinstance(data, CondensedDistanceMatrix):
        D = data
    else:
        D = pairwise_distances(data if isinstance(data, Dataset) else Dataset(data))
    rho = compute_density(D, kernel=kernel, dc=dc, percent=percent)
    prof = peak_profile(D, rho)
    return Fit(prof, build(prof.nn, prof.gamma_order))
