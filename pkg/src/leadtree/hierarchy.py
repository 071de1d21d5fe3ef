"""Multi-layer clustering from a single leading tree."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import comb

from ._errors import ParameterError
from .datasets import write_manifest
from .ltree import ClusterForest, LeadingTree, forest_labels, split

__all__ = [
    "Hierarchy",
    "RefinementResult",
    "build_hierarchy",
    "check_refinement",
    "adjusted_rand_index",
    "write_hierarchy",
]


@dataclass(frozen=True)
class Hierarchy:
    """Nested partitions, coarsest first.

    ``layers[k]`` is ``(m_k, labels_k)``; labels are 1-based gamma ranks of the
    centers, so cluster 1 always contains the tree root.
    """

    tree: LeadingTree
    layers: tuple
    forests: tuple

    @property
    def counts(self):
        return tuple(m for m, _ in self.layers)

    def __len__(self):
        return len(self.layers)

    def labels(self, k) -> np.ndarray:
        return self.layers[k][1]


class RefinementResult(NamedTuple):
    ok: bool
    layer: int | None = None  # index of the finer layer in the offending pair
    pair: tuple | None = None  # two points sharing a fine cluster but not a coarse one

    def __bool__(self):
        return self.ok


def _check_counts(counts, n):
    counts = [int(c) for c in counts]
    if not counts:
        raise ParameterError("need at least one layer count")
    if any(not 1 <= c <= n for c in counts):
        raise ParameterError(f"layer counts must lie in [1, {n}], got {counts}")
    if any(b <= a for a, b in zip(counts, counts[1:])):
        raise ParameterError(f"layer counts must be strictly ascending, got {counts}")
    return counts


def build_hierarchy(tree: LeadingTree, layer_counts) -> Hierarchy:
    """One flat clustering per count, each using the top-m gamma points as centers.

    Layers are built incrementally: going from ``m_k`` to ``m_{k+1}`` centers
    only cuts the ``m_{k+1} - m_k`` new edges.
    """
    counts = _check_counts(layer_counts, tree.n)
    order = tree.gamma_order
    forest = split(tree, order[:counts[0]], mode="prefix_fast")
    forests = [forest]
    for lo, hi in zip(counts, counts[1:]):
        forest = forest.extend(order[lo:hi])
        forests.append(forest)
    layers = tuple((f.m, forest_labels(f)) for f in forests)
    return Hierarchy(tree, layers, tuple(forests))


def check_refinement(h) -> RefinementResult:
    """Check that each layer refines the one before it.

    Accepts a :class:`Hierarchy` or a sequence of label vectors ordered
    coarse to fine. On failure, reports the finer layer's index and a witness
    pair of points.
    """
    labelings = [lab for _, lab in h.layers] if isinstance(h, Hierarchy) else list(h)
    for k in range(1, len(labelings)):
        coarse = np.asarray(labelings[k - 1])
        fine = np.asarray(labelings[k])
        if coarse.shape != fine.shape:
            raise ParameterError("layers have different lengths")
        first = {}
        for i, (f, c) in enumerate(zip(fine.tolist(), coarse.tolist())):
            j = first.setdefault(f, i)
            if coarse[j] != c:
                return RefinementResult(False, k, (j, i))
    return RefinementResult(True)


def adjusted_rand_index(a, b) -> float:
    """Adjusted Rand index of two labelings of the same points.

    Returns 1.0 when both labelings are trivially identical in pair terms
    (e.g. both put everything in one cluster).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError(f"labelings must be 1-D and equal length, got {a.shape} and {b.shape}")
    n = a.size
    if n < 2:
        return 1.0
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    sum_ij = comb(table, 2).sum()
    sum_a = comb(table.sum(axis=1), 2).sum()
    sum_b = comb(table.sum(axis=0), 2).sum()
    expected = sum_a * sum_b / comb(n, 2)
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))


def write_hierarchy(out_dir, h: Hierarchy, **manifest):
    """Write ``layer_<k>_m<m>.csv`` (``index,label``, 1-based) per layer plus ``manifest.json``."""
    os.makedirs(out_dir, exist_ok=True)
    files = []
    for k, (m, labels) in enumerate(h.layers, start=1):
        name = f"layer_{k}_m{m}.csv"
        with open(os.path.join(out_dir, name), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "label"])
            w.writerows((i + 1, int(lab)) for i, lab in enumerate(labels))
        files.append(name)
    result = check_refinement(h)
    write_manifest(
        os.path.join(out_dir, "manifest.json"),
        layer_counts=list(h.counts),
        files=files,
        n_points=h.tree.n,
        refinement=bool(result.ok),
        **manifest,
    )
    return files
