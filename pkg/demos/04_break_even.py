"""
When does building the tree pay off?
====================================

Building a leading tree costs something up front. Each additional layer is
then produced by a split, which is cheap compared to rerunning the
label-propagation assignment. This demo times the three stages and derives
the number of layers at which the tree becomes the cheaper route.
"""

# %%
from leadtree.bench import break_even_layers, scaling_study

res = scaling_study(sizes=(1000, 4000, 16000), m=8, repeats=11)

# %%
# Median wall-clock time per stage, in microseconds.
print("      N    assign  construct    split   break-even layers")
for k, n in enumerate(res.sizes):
    ta, tc, ts = (res.timings[st][k].median_ns / 1e3 for st in ("assign", "construct", "split"))
    print(f"{n:7d} {ta:9.1f} {tc:10.1f} {ts:8.1f}   {res.break_even[k]}")

# %%
# Assignment and construction grow linearly with N; the split cost depends
# only on the number of centers.
for st in ("assign", "construct", "split"):
    slope, _, r2 = res.fits[st]
    print(f"{st:9s}: {slope:8.2f} ns per point, R^2 = {r2:.3f}")
print("split time flat in N:", res.flatness.flat)

# %%
# The break-even count is the smallest Nl with Nl * (T_assign - T_split) > T_construct.
print("example: construct 300, assign 5, split 2 ->", break_even_layers(300, 5, 2), "layers")
