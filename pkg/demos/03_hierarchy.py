"""
Nested clusterings from one tree
================================

A single leading tree yields a whole family of clusterings: adding centers
only cuts more edges, so each layer refines the previous one.
"""

# %%
import os

import numpy as np

from leadtree import adjusted_rand_index, build_hierarchy, check_refinement, fit
from leadtree.datasets import GeneratorSpec, generate, load_ecoli

ds = generate(GeneratorSpec("five_spiral", seed=0))
f = fit(ds)
h = build_hierarchy(f.tree, (2, 3, 5))

# %%
# Cluster sizes per layer, and agreement with the generating spirals.
for m, labels in h.layers:
    sizes = np.bincount(labels)[1:].tolist()
    print(f"m={m}: sizes {sizes}, ARI {adjusted_rand_index(ds.labels, labels):.3f}")
print("each layer refines the previous one:", bool(check_refinement(h)))

# %%
# A coarse cluster is the union of the fine clusters inside it.
coarse, fine = h.labels(0), h.labels(2)
for c in np.unique(coarse):
    print(f"coarse cluster {c} = fine clusters {np.unique(fine[coarse == c]).tolist()}")

# %%
# The same works on real data. Point LEADTREE_ECOLI at a copy of the UCI
# ecoli.data file to run this cell.
path = os.environ.get("LEADTREE_ECOLI")
if path:
    ecoli = load_ecoli(path)
    he = build_hierarchy(fit(ecoli).tree, (2, 4, 8))
    for m, labels in he.layers:
        print(f"Ecoli m={m}: sizes {np.bincount(labels)[1:].tolist()}")
    print("nested:", bool(check_refinement(he)))
else:
    print("LEADTREE_ECOLI not set; skipping the Ecoli layers")
