"""Pairwise distances, cutoff-distance estimation and local-density kernels.

Distances are kept in condensed (upper-triangular) form: for ``n`` points the
``n * (n - 1) / 2`` entries are stored row by row, pair ``(i, j)`` with
``i < j`` sitting at ``n*i - i*(i+1)/2 + j - i - 1``. This is the layout used
by :func:`scipy.spatial.distance.pdist`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from ._errors import DegenerateInputError, InputError, ParameterError

__all__ = [
    "Dataset",
    "CondensedDistanceMatrix",
    "DensityVector",
    "pairwise_distances",
    "estimate_dc",
    "rho_cutoff",
    "rho_gaussian",
    "compute_density",
    "density_order",
    "read_distance_matrix_csv",
]

KERNELS = ("gaussian", "cutoff")


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """N points in A dimensions with optional integer ground truth.

    Parameters
    ----------
    points : array_like, shape (N, A)
        Finite coordinates.
    labels : array_like of int, shape (N,), optional
        Ground-truth class per row.
    label_names : tuple of str, optional
        Human-readable class names, indexed by label value.
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    label_names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError(f"points must be a non-empty 2-D array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            bad = int(np.argwhere(~np.isfinite(pts))[0, 0])
            raise InputError(f"non-finite coordinate in row {bad}")
        object.__setattr__(self, "points", _frozen(pts))
        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (pts.shape[0],):
                raise InputError(f"labels must have shape ({pts.shape[0]},), got {lab.shape}")
            object.__setattr__(self, "labels", _frozen(lab, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n


class CondensedDistanceMatrix:
    """Symmetric distance matrix with zero diagonal, stored as its upper triangle.

    ``D[i, j]`` works for any ordering of ``i`` and ``j``; ``D[i, i]`` is 0.
    """

    __slots__ = ("n", "values")

    def __init__(self, values, n=None):
        vals = np.asarray(values, dtype=float).ravel()
        m = vals.size
        if n is None:
            n = int(round((1 + math.sqrt(1 + 8 * m)) / 2))
        if n * (n - 1) // 2 != m:
            raise InputError(f"{m} condensed entries do not match any point count")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise InputError("distances must be finite and nonnegative")
        self.n = int(n)
        self.values = _frozen(vals)

    @classmethod
    def from_square(cls, square, atol=1e-9):
        """Build from a full ``N x N`` matrix, checking symmetry within ``atol``."""
        sq = np.asarray(square, dtype=float)
        if sq.ndim != 2 or sq.shape[0] != sq.shape[1]:
            raise InputError(f"distance matrix must be square, got shape {sq.shape}")
        if not np.all(np.isfinite(sq)):
            raise InputError("distance matrix has non-finite entries")
        if not np.allclose(sq, sq.T, rtol=0, atol=atol):
            i, j = np.argwhere(np.abs(sq - sq.T) > atol)[0]
            raise InputError(f"distance matrix not symmetric at ({i}, {j})")
        if np.any(np.abs(np.diag(sq)) > atol):
            raise InputError("distance matrix has a nonzero diagonal")
        iu = np.triu_indices(sq.shape[0], k=1)
        return cls(sq[iu], n=sq.shape[0])

    @property
    def size(self) -> int:
        return self.values.size

    def _index(self, i, j):
        n = self.n
        return n * i - i * (i + 1) // 2 + j - i - 1

    def __getitem__(self, ij):
        i, j = ij
        i, j = int(i), int(j)
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"({i}, {j}) out of range for n={self.n}")
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.values[self._index(i, j)])

    def row(self, i) -> np.ndarray:
        """Distances from point ``i`` to every point, as a length-N array."""
        n = self.n
        out = np.empty(n)
        if i > 0:
            j = np.arange(i)
            out[:i] = self.values[n * j - j * (j + 1) // 2 + i - j - 1]
        out[i] = 0.0
        start = self._index(i, i + 1) if i + 1 < n else 0
        out[i + 1:] = self.values[start:start + n - i - 1]
        return out

    def to_square(self) -> np.ndarray:
        sq = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        sq[iu] = self.values
        sq.T[iu] = self.values
        return sq

    def pair_indices(self):
        """Row and column index arrays aligned with ``values``."""
        return np.triu_indices(self.n, k=1)

    def __repr__(self):
        return f"CondensedDistanceMatrix(n={self.n})"


@dataclass(frozen=True)
class DensityVector:
    """Per-point local density with the kernel and cutoff that produced it."""

    rho: np.ndarray
    kernel: str
    dc: float

    def __post_init__(self):
        object.__setattr__(self, "rho", _frozen(self.rho, dtype=float))
        if self.kernel not in KERNELS:
            raise ParameterError(f"unknown kernel {self.kernel!r}")

    def __len__(self):
        return self.rho.size


def pairwise_distances(dataset, metric="euclidean") -> CondensedDistanceMatrix:
    """Euclidean distances between all pairs of points.

    Parameters
    ----------
    dataset : Dataset or array_like of shape (N, A)
    metric : {"euclidean"}

    Returns
    -------
    CondensedDistanceMatrix
    """
    if metric != "euclidean":
        raise ParameterError(f"unsupported metric {metric!r}; only 'euclidean' is built in")
    if not isinstance(dataset, Dataset):
        dataset = Dataset(dataset)
    if dataset.n < 2:
        raise ParameterError("need at least two points for pairwise distances")
    return CondensedDistanceMatrix(pdist(dataset.points, metric="euclidean"), n=dataset.n)


def estimate_dc(D: CondensedDistanceMatrix, percent: float = 2.0) -> float:
    """Cutoff distance at a given percentile of the sorted pairwise distances.

    Returns the entry at 1-based rank ``ceil(percent / 100 * M)`` of the
    ascending distances, with the rank clamped to ``[1, M]``.
    """
    if not 0 < percent < 100:
        raise ParameterError(f"percent must lie in (0, 100), got {percent}")
    m = D.size
    if m < 1:
        raise ParameterError("need at least one pair to estimate dc")
    rank = min(max(math.ceil(percent * m / 100.0), 1), m)
    dc = float(np.partition(D.values, rank - 1)[rank - 1])
    if dc <= 0:
        # kernels need dc > 0; happens when most pairs coincide
        raise DegenerateInputError(f"estimated dc is 0 at the {percent}th percentile")
    return dc


def _check_dc(dc):
    if not (dc > 0 and math.isfinite(dc)):
        raise ParameterError(f"dc must be a positive finite number, got {dc}")


def rho_cutoff(D: CondensedDistanceMatrix, dc: float) -> DensityVector:
    """Count of neighbours strictly closer than ``dc``."""
    _check_dc(dc)
    i, j = D.pair_indices()
    close = D.values < dc
    rho = np.bincount(i[close], minlength=D.n) + np.bincount(j[close], minlength=D.n)
    return DensityVector(rho.astype(float), "cutoff", float(dc))


def rho_gaussian(D: CondensedDistanceMatrix, dc: float) -> DensityVector:
    """Gaussian-kernel density, ``sum_j exp(-(d_ij / dc)**2)`` over ``j != i``."""
    _check_dc(dc)
    i, j = D.pair_indices()
    w = np.exp(-np.square(D.values / dc))
    rho = np.bincount(i, weights=w, minlength=D.n) + np.bincount(j, weights=w, minlength=D.n)
    return DensityVector(rho, "gaussian", float(dc))


def compute_density(D: CondensedDistanceMatrix, kernel="gaussian", dc=None, percent=2.0):
    """Convenience wrapper: estimate ``dc`` if needed and apply the named kernel."""
    if dc is None:
        dc = estimate_dc(D, percent)
    if kernel == "gaussian":
        return rho_gaussian(D, dc)
    if kernel == "cutoff":
        return rho_cutoff(D, dc)
    raise ParameterError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")


def density_order(rho) -> np.ndarray:
    """Indices sorted by density, highest first; equal densities keep index order."""
    r = rho.rho if isinstance(rho, DensityVector) else np.asarray(rho, dtype=float)
    q = np.argsort(-r, kind="stable")
    q.setflags(write=False)
    return q


def read_distance_matrix_csv(path, atol=1e-9) -> CondensedDistanceMatrix:
    """Load an ``N x N`` comma-separated distance matrix (no header)."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not f.strip() for f in rec):
                continue
            try:
                vals = [float(f) for f in rec]
            except ValueError as exc:
                raise InputError(str(exc), line=lineno, path=path) from None
            if not all(math.isfinite(v) for v in vals):
                raise InputError("non-finite distance", line=lineno, path=path)
            if rows and len(vals) != len(rows[0]):
                raise InputError(
                    f"expected {len(rows[0])} fields, got {len(vals)}", line=lineno, path=path
                )
            rows.append(vals)
    if not rows:
        raise InputError("empty distance matrix", path=path)
    return CondensedDistanceMatrix.from_square(np.array(rows), atol=atol)
