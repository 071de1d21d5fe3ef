"""Nearest higher-density neighbours, gamma ranking and baseline assignment."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._errors import IncompleteAssignmentError, ParameterError
from .density import CondensedDistanceMatrix, DensityVector, density_order

__all__ = [
    "NONE",
    "PeakProfile",
    "delta_nn",
    "gamma",
    "gamma_order",
    "select_centers",
    "assign_baseline",
    "peak_profile",
    "write_profile_csv",
]

#: Parent sentinel for the densest point (the tree root).
NONE = -1


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PeakProfile:
    """Everything the density-peaks pipeline computes per point.

    Attributes
    ----------
    rho, delta, gamma : ndarray of float
    nn : ndarray of int
        Nearest neighbour of higher density; ``NONE`` at the root.
    q : ndarray of int
        Density order (densest first).
    gamma_order : ndarray of int
        Indices by decreasing gamma, ties by index.
    kernel : str
    dc : float
    """

    rho: np.ndarray
    delta: np.ndarray
    nn: np.ndarray
    gamma: np.ndarray
    q: np.ndarray
    gamma_order: np.ndarray
    kernel: str = "gaussian"
    dc: float = float("nan")

    def __post_init__(self):
        for name, dtype in (
            ("rho", float), ("delta", float), ("gamma", float),
            ("nn", np.int64), ("q", np.int64), ("gamma_order", np.int64),
        ):
            object.__setattr__(self, name, _frozen(getattr(self, name), dtype=dtype))

    @property
    def n(self) -> int:
        return self.rho.size

    @property
    def root(self) -> int:
        return int(self.q[0])


def delta_nn(D: CondensedDistanceMatrix, q):
    """Distance to, and index of, the nearest point earlier in the density order.

    For every point after the first in ``q`` the minimum is taken over all
    points that precede it; equidistant candidates resolve to the one earliest
    in ``q``. The first point gets the largest distance to any other point and
    parent ``NONE``. A single point gets ``delta = 0``.

    Returns
    -------
    delta : ndarray of float, shape (N,)
    nn : ndarray of int, shape (N,)
    """
    q = np.asarray(q, dtype=np.int64)
    n = D.n
    if q.shape != (n,) or not np.array_equal(np.sort(q), np.arange(n)):
        raise ParameterError("q must be a permutation of range(N)")
    delta = np.zeros(n)
    nn = np.full(n, NONE, dtype=np.int64)
    if n == 1:
        return delta, nn
    for pos in range(1, n):
        p = q[pos]
        cand = D.row(p)[q[:pos]]
        k = int(np.argmin(cand))  # first minimum = earliest in q
        delta[p] = cand[k]
        nn[p] = q[k]
    root = q[0]
    delta[root] = D.row(root).max()
    return delta, nn


def gamma(rho, delta) -> np.ndarray:
    """Elementwise ``rho * delta``."""
    r = rho.rho if isinstance(rho, DensityVector) else np.asarray(rho, dtype=float)
    d = np.asarray(delta, dtype=float)
    if r.shape != d.shape:
        raise ParameterError(f"rho and delta lengths differ: {r.shape} vs {d.shape}")
    return r * d


def gamma_order(g) -> np.ndarray:
    """Indices by decreasing gamma; ties keep ascending index."""
    return np.argsort(-np.asarray(g, dtype=float), kind="stable")


def select_centers(order, m: int) -> np.ndarray:
    """The top ``m`` points of a gamma order."""
    order = np.asarray(order, dtype=np.int64)
    if not 1 <= m <= order.size:
        raise ParameterError(f"m must lie in [1, {order.size}], got {m}")
    return order[:m].copy()


def assign_baseline(nn, q, centers) -> np.ndarray:
    """Label propagation along the density order.

    Center ``k`` (0-based position in ``centers``) gets label ``k + 1``. Every
    other point, visited in ``q`` order, copies the label of its nearest
    higher-density neighbour, which was visited before it.

    Raises
    ------
    IncompleteAssignmentError
        If some point's chain of neighbours ends without meeting a center,
        which happens exactly when the root is not a center.
    """
    nn_l = np.asarray(nn).tolist()
    q_l = np.asarray(q).tolist()
    cen = np.asarray(centers).tolist()
    if not cen:
        raise ParameterError("at least one center is required")
    cl = [-1] * len(nn_l)
    for k, c in enumerate(cen):
        if cl[c] != -1:
            raise ParameterError(f"duplicate center {c}")
        cl[c] = k + 1
    for p in q_l:
        if cl[p] == -1:
            parent = nn_l[p]
            if parent == NONE or cl[parent] == -1:
                raise IncompleteAssignmentError(
                    f"point {p} has no labelled higher-density neighbour "
                    "(is the densest point among the centers?)"
                )
            cl[p] = cl[parent]
    return np.array(cl, dtype=np.int64)


def peak_profile(D: CondensedDistanceMatrix, rho: DensityVector) -> PeakProfile:
    """Run density order, delta/nn and gamma ranking in one go."""
    q = density_order(rho)
    delta, nn = delta_nn(D, q)
    g = gamma(rho, delta)
    return PeakProfile(
        rho=rho.rho, delta=delta, nn=nn, gamma=g, q=q,
        gamma_order=gamma_order(g), kernel=rho.kernel, dc=rho.dc,
    )


def write_profile_csv(path, profile: PeakProfile):
    """One row per point: ``index,rho,delta,nn,gamma`` with 1-based indices.

    The root's ``nn`` is written as ``-1``.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "rho", "delta", "nn", "gamma"])
        for i in range(profile.n):
            parent = int(profile.nn[i])
            w.writerow([
                i + 1,
                repr(float(profile.rho[i])),
                repr(float(profile.delta[i])),
                -1 if parent == NONE else parent + 1,
                repr(float(profile.gamma[i])),
            ])
