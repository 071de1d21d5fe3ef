"""The leading tree: parent pointers plus gamma-ordered child lists.

The tree is stored as an index arena. ``parent[i]`` is the nearest
higher-density neighbour of ``i``, and the children of ``p`` are
``child_idx[child_ptr[p]:child_ptr[p + 1]]``, listed by decreasing gamma.
Splitting never mutates the tree. A :class:`ClusterForest` records which
``(parent, center)`` edges are cut, so one tree can serve any number of
layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._errors import ModeViolationError, ParameterError, StructuralError
from .peaks import NONE

__all__ = [
    "LeadingTree",
    "ClusterForest",
    "build",
    "split",
    "forest_labels",
    "forest_depths",
    "jump_depth",
    "write_parents_csv",
    "to_dot",
]

SPLIT_MODES = ("prefix_fast", "general")


def _frozen(a, dtype=np.int64):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


class LeadingTree:
    """Immutable rooted tree over point indices ``0..N-1``.

    Attributes
    ----------
    parent : ndarray of int
        ``NONE`` at the root.
    child_ptr, child_idx : ndarray of int
        CSR-style child lists, gamma-descending within each node.
    gamma_order : ndarray of int
        The gamma ranking the tree was built from; ``gamma_rank`` is its inverse.
    root : int
    """

    __slots__ = ("parent", "child_ptr", "child_idx", "gamma_order", "gamma_rank", "root")

    def __init__(self, parent, child_ptr, child_idx, gamma_order):
        self.parent = _frozen(parent)
        self.child_ptr = _frozen(child_ptr)
        self.child_idx = _frozen(child_idx)
        self.gamma_order = _frozen(gamma_order)
        rank = np.empty_like(self.gamma_order)
        rank[self.gamma_order] = np.arange(self.gamma_order.size)
        rank.setflags(write=False)
        self.gamma_rank = rank
        self.root = int(self.gamma_order[0])

    @property
    def n(self) -> int:
        return self.parent.size

    def __len__(self):
        return self.parent.size

    def children(self, p) -> np.ndarray:
        return self.child_idx[self.child_ptr[p]:self.child_ptr[p + 1]]

    def edges(self):
        """``(parent, child)`` pairs in arena order."""
        for p in range(self.n):
            for c in self.children(p):
                yield p, int(c)

    def __repr__(self):
        return f"LeadingTree(n={self.n}, root={self.root})"


def _check_parent_array(parent, order):
    n = parent.size
    roots = np.flatnonzero(parent == NONE)
    if roots.size != 1:
        raise StructuralError(f"parent array must have exactly one root, found {roots.size}")
    if np.any((parent < NONE) | (parent >= n)) or np.any(parent == np.arange(n)):
        raise StructuralError("parent array has out-of-range or self-referencing entries")
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise StructuralError("gamma order must be a permutation of range(N)")
    if order[0] != roots[0]:
        raise StructuralError(
            f"gamma order must start at the root {int(roots[0])}, starts at {int(order[0])}"
        )
    # every node must reach the root; mark resolved nodes so the walk is O(N)
    state = np.zeros(n, dtype=np.int8)  # 0 unseen, 1 on current path, 2 reaches root
    state[roots[0]] = 2
    par = parent.tolist()
    st = state.tolist()
    for start in range(n):
        path = []
        v = start
        while st[v] == 0:
            st[v] = 1
            path.append(v)
            v = par[v]
        if st[v] == 1:
            raise StructuralError(f"cycle through node {v} in parent array")
        for u in path:
            st[u] = 2


def build(nn, gamma_order, validate=True) -> LeadingTree:
    """Turn the nearest-higher-density array into a leading tree.

    Nodes are attached to their parent in gamma order, so each child list
    comes out gamma-descending. Attaching in this order is a stable grouping
    of ``gamma_order[1:]`` by parent, which is done here as a stable sort.

    Parameters
    ----------
    nn : array_like of int
        Parent per point, ``NONE`` at the root.
    gamma_order : array_like of int
        Gamma-descending permutation whose first entry is the root.
    validate : bool
        Check for a single root and absence of cycles (O(N)).
    """
    parent = np.asarray(nn, dtype=np.int64)
    order = np.asarray(gamma_order, dtype=np.int64)
    n = parent.size
    if validate:
        _check_parent_array(parent, order)
    kids = order[1:]
    keys = parent[kids]
    child_idx = kids[np.argsort(keys, kind="stable")]
    child_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=child_ptr[1:])
    return LeadingTree(parent, child_ptr, child_idx, order)


@dataclass(frozen=True)
class ClusterForest:
    """A leading tree minus the edges from each non-root center to its parent.

    ``centers[k]`` roots component ``k`` and labels it ``k + 1``.
    """

    tree: LeadingTree
    centers: tuple
    cut_set: tuple
    mode: str = "prefix_fast"
    # per-parent count of leading children already cut; prefix_fast bookkeeping
    _removed: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.centers)

    def center_labels(self) -> dict:
        return {c: k + 1 for k, c in enumerate(self.centers)}

    def extend(self, more_centers) -> "ClusterForest":
        """A finer forest with extra centers appended (incremental split)."""
        return _split(self.tree, self.centers, more_centers, self.mode, self.cut_set, self._removed)


def _split(tree, done, new, mode, cuts, removed):
    if mode not in SPLIT_MODES:
        raise ParameterError(f"unknown split mode {mode!r}; expected one of {SPLIT_MODES}")
    new = [int(c) for c in new]
    centers = list(done) + new
    n = tree.n
    if not centers:
        raise ParameterError("at least one center is required")
    if any(not 0 <= c < n for c in new):
        raise ParameterError("center index out of range")
    if len(set(centers)) != len(centers):
        raise ParameterError("centers must be distinct")
    cuts = list(cuts)
    removed = dict(removed)
    parent = tree.parent
    ptr = tree.child_ptr
    kids = tree.child_idx
    if mode == "prefix_fast":
        rank = tree.gamma_rank
        for k in range(len(done), len(centers)):
            if rank[centers[k]] != k:
                raise ModeViolationError(
                    f"center {centers[k]} at position {k} has gamma rank {int(rank[centers[k]])}; "
                    "prefix_fast needs the top-m gamma prefix in order"
                )
        for c in new:
            if c == tree.root:
                continue
            p = int(parent[c])
            r = removed.get(p, 0)
            # higher-gamma siblings are earlier centers, already cut
            if ptr[p] + r >= ptr[p + 1] or kids[ptr[p] + r] != c:
                raise StructuralError(f"center {c} is not the first remaining child of {p}")
            removed[p] = r + 1
            cuts.append((p, c))
    else:
        if tree.root not in centers:
            raise ParameterError(f"the root {tree.root} must be one of the centers")
        for c in new:
            if c == tree.root:
                continue
            p = int(parent[c])
            if c not in kids[ptr[p]:ptr[p + 1]]:
                raise StructuralError(f"center {c} not found among the children of {p}")
            cuts.append((p, c))
    return ClusterForest(tree, tuple(centers), tuple(cuts), mode, removed)


def split(tree: LeadingTree, centers, mode="prefix_fast") -> ClusterForest:
    """Cut the edge from every non-root center to its parent.

    Parameters
    ----------
    tree : LeadingTree
    centers : sequence of int
        Distinct point indices. In ``prefix_fast`` mode they must be exactly
        the first ``m`` entries of the tree's gamma order.
    mode : {"prefix_fast", "general"}
        ``prefix_fast`` pops the first remaining child of each parent, which is
        valid for gamma prefixes only. ``general`` searches the child list and
        accepts any center set containing the root.

    Raises
    ------
    ModeViolationError
        ``prefix_fast`` with a center set that is not a gamma prefix.
    StructuralError
        A center is missing from its parent's child list.
    """
    return _split(tree, (), centers, mode, (), {})


def _traverse(forest: ClusterForest):
    tree = forest.tree
    n = tree.n
    ptr = tree.child_ptr.tolist()
    kids = tree.child_idx.tolist()
    is_center = forest.center_labels()
    labels = [0] * n
    depth = [0] * n
    for c, lab in is_center.items():
        stack = [c]
        while stack:
            v = stack.pop()
            labels[v] = lab
            dv = depth[v] + 1
            for ch in kids[ptr[v]:ptr[v + 1]]:
                if ch not in is_center:
                    depth[ch] = dv
                    stack.append(ch)
    return labels, depth


def forest_labels(forest: ClusterForest) -> np.ndarray:
    """Label every point with the 1-based rank of its component's center."""
    labels, _ = _traverse(forest)
    if 0 in labels:
        # only possible when the root is missing from the centers
        raise StructuralError("some nodes are not reachable from any center")
    return np.array(labels, dtype=np.int64)


def forest_depths(forest: ClusterForest) -> np.ndarray:
    """Jump depth of every point at once."""
    _, depth = _traverse(forest)
    return np.array(depth, dtype=np.int64)


def jump_depth(forest: ClusterForest, i: int) -> int:
    """Number of parent hops from ``i`` to the center of its component."""
    centers = set(forest.centers)
    parent = forest.tree.parent
    hops = 0
    v = int(i)
    while v not in centers:
        v = int(parent[v])
        if v == NONE:
            raise StructuralError(f"node {i} does not reach any center")
        hops += 1
    return hops


def write_parents_csv(path, forest: ClusterForest):
    """``index,parent,depth,label`` per point, 1-based; component roots get parent -1."""
    labels, depth = _traverse(forest)
    centers = set(forest.centers)
    parent = forest.tree.parent
    with open(path, "w") as fh:
        fh.write("index,parent,depth,label\n")
        for i in range(forest.tree.n):
            p = -1 if i in centers else int(parent[i]) + 1
            fh.write(f"{i + 1},{p},{depth[i]},{labels[i]}\n")


def to_dot(forest: ClusterForest, name="leading_tree") -> str:
    """Graphviz digraph of the forest; cut edges omitted, centers drawn doubled."""
    cut = set(forest.cut_set)
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for k, c in enumerate(forest.centers):
        lines.append(f'  {c + 1} [shape=doublecircle, xlabel="C{k + 1}"];')
    for p, c in forest.tree.edges():
        if (p, c) not in cut:
            lines.append(f"  {p + 1} -> {c + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"
