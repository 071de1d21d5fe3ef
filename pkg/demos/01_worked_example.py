"""
A leading tree by hand: the 13-point worked example
====================================================

Thirteen points, their nearest-denser-neighbor pointers and their gamma
ranking are enough to build a leading tree. Cutting it at three centers
gives a flat clustering without touching any distances.
"""

# %%
# The fixture stores 0-based arrays; the root's parent is -1.
import numpy as np

from leadtree import build, forest_labels, jump_depth, split
from leadtree.datasets import ds1_fixture
from leadtree.ltree import to_dot

fx = ds1_fixture()
print("parent pointers:", fx.nneigh.tolist())
print("gamma order:    ", fx.sort_gamma_ind.tolist())

# %%
# Child lists are stored in one CSR arena and kept in gamma order, so the
# first child of every node is its most central one.
tree = build(fx.nneigh, fx.sort_gamma_ind)
for p in range(tree.n):
    kids = tree.children(p)
    if kids.size:
        print(f"node {p + 1:2d} -> {(kids + 1).tolist()}")

# %%
# Splitting marks the edges above the extra centers as cut. The tree itself
# is never modified, so the same tree serves any number of splits.
forest = split(tree, fx.centers)
labels = forest_labels(forest)
print("cut edges (child, parent):", [(c + 1, p + 1) for c, p in forest.cut_set])
print("labels:  ", labels.tolist())
print("expected:", fx.cl.tolist())
assert np.array_equal(labels, fx.cl)

# %%
# The jump depth of a point is the number of parent hops to its center.
print("jump depths:", [jump_depth(forest, i) for i in range(tree.n)])

# %%
# The forest can be exported to Graphviz; centers are drawn as double circles.
print(to_dot(forest))
