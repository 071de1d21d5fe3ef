"""Density-peaks clustering with an explicit leading tree.

The nearest-higher-density array computed by density-peaks clustering is a
tree. Keeping it around turns every further flat clustering into a handful of
edge cuts, which makes multi-layer hierarchies cheap.
"""

from ._errors import (
    DegenerateInputError,
    IncompleteAssignmentError,
    InputError,
    LeadTreeError,
    ModeViolationError,
    ParameterError,
    StructuralError,
)
from .density import (
    CondensedDistanceMatrix,
    Dataset,
    DensityVector,
    compute_density,
    density_order,
    estimate_dc,
    pairwise_distances,
    rho_cutoff,
    rho_gaussian,
)
from .hierarchy import Hierarchy, adjusted_rand_index, build_hierarchy, check_refinement
from .ltree import ClusterForest, LeadingTree, build, forest_labels, jump_depth, split
from .peaks import (
    NONE,
    PeakProfile,
    assign_baseline,
    delta_nn,
    gamma,
    gamma_order,
    peak_profile,
    select_centers,
)
from .pipeline import Fit, fit

__version__ = "0.1.0"
