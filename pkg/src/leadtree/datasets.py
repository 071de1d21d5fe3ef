"""Synthetic generators, the UCI Ecoli loader, the 13-city fixture and CSV I/O."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._errors import InputError, ParameterError
from .density import Dataset

__all__ = [
    "GeneratorSpec",
    "Ds1Fixture",
    "generate",
    "gen_five_spherical",
    "gen_five_spiral",
    "gen_blobs",
    "load_ecoli",
    "ds1_fixture",
    "read_points_csv",
    "write_points_csv",
    "write_manifest",
]

KINDS = ("five_spherical", "five_spiral")
KIND_ALIASES = {
    "five_spherical": "five_spherical",
    "5spherical": "five_spherical",
    "five_spiral": "five_spiral",
    "5spiral": "five_spiral",
}

# five sphere centers on a circle of radius 10: two close pairs and one loner
SPHERE_ANGLES_DEG = (0.0, 30.0, 150.0, 180.0, 270.0)
SPHERE_CIRCUMRADIUS = 10.0
SPIRAL_THETAS = (0.0, 0.3, 2.2, 2.5, 4.4)
# each arm spans radius < 1.6; pairs 4 apart, pairs 7 apart, loner far right
SPIRAL_CENTERS = ((-2.0, 0.0), (2.0, 0.0), (-2.0, 7.0), (2.0, 7.0), (12.0, 3.5))
SPIRAL_T_RANGE = (2.0, 4.0 * math.pi)
DEFAULT_SIZES = {"five_spherical": 2200, "five_spiral": 1060}


def _default_sphere_centers():
    a = np.deg2rad(SPHERE_ANGLES_DEG)
    return tuple((float(SPHERE_CIRCUMRADIUS * math.cos(t)), float(SPHERE_CIRCUMRADIUS * math.sin(t)))
                 for t in a)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic dataset.

    ``n_points=None`` picks the published size for the kind. Points are split
    across the five groups as evenly as possible, earlier groups taking the
    remainder.
    """

    kind: str = "five_spherical"
    n_points: int | None = None
    seed: int = 0
    sphere_centers: tuple = field(default_factory=_default_sphere_centers)
    sphere_radius: float = 1.0
    spiral_thetas: tuple = SPIRAL_THETAS
    spiral_centers: tuple = SPIRAL_CENTERS
    t_range: tuple = SPIRAL_T_RANGE

    def __post_init__(self):
        kind = KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ParameterError(f"unknown dataset kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        if self.n_points is None:
            object.__setattr__(self, "n_points", DEFAULT_SIZES[kind])
        if self.n_points < 1:
            raise ParameterError("n_points must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterError("seed must be an unsigned 64-bit integer")
        lo, hi = self.t_range
        if not lo < hi:
            raise ParameterError("t_range must be increasing")
        if len(self.spiral_centers) != len(self.spiral_thetas):
            raise ParameterError("spiral_centers and spiral_thetas must have equal length")
        if self.sphere_radius <= 0:
            raise ParameterError("sphere_radius must be positive")

    @property
    def n_groups(self) -> int:
        return len(self.sphere_centers) if self.kind == "five_spherical" else len(self.spiral_thetas)

    def group_sizes(self):
        k = self.n_groups
        base, extra = divmod(self.n_points, k)
        return [base + (1 if i < extra else 0) for i in range(k)]

    def to_dict(self):
        d = asdict(self)
        d["sphere_centers"] = [list(c) for c in self.sphere_centers]
        d["spiral_thetas"] = list(self.spiral_thetas)
        d["spiral_centers"] = [list(c) for c in self.spiral_centers]
        d["t_range"] = list(self.t_range)
        return d


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


def gen_five_spherical(spec: GeneratorSpec | None = None) -> Dataset:
    """Uniform samples on five sphere surfaces, projected onto the xy-plane.

    Returns a 2-D :class:`Dataset` whose labels are the sphere indices.
    """
    spec = spec or GeneratorSpec("five_spherical")
    rng = _rng(spec.seed)
    pts, lab = [], []
    for k, (size, (cx, cy)) in enumerate(zip(spec.group_sizes(), spec.sphere_centers)):
        v = rng.standard_normal((size, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        pts.append(v[:, :2] * spec.sphere_radius + (cx, cy))
        lab.append(np.full(size, k))
    return Dataset(np.vstack(pts), np.concatenate(lab))


def spiral_points(t, theta):
    """Points ``(-t/8 cos(t + theta), -t/8 sin(t + theta))``."""
    t = np.asarray(t, dtype=float)
    return np.column_stack((-t / 8 * np.cos(t + theta), -t / 8 * np.sin(t + theta)))


def gen_five_spiral(spec: GeneratorSpec | None = None) -> Dataset:
    """Five spiral curves with ``t`` drawn uniformly from ``spec.t_range``.

    Spiral ``k`` starts at angle ``spec.spiral_thetas[k]`` and is translated
    to ``spec.spiral_centers[k]``.
    """
    spec = spec or GeneratorSpec("five_spiral")
    rng = _rng(spec.seed)
    lo, hi = spec.t_range
    pts, lab = [], []
    groups = zip(spec.group_sizes(), spec.spiral_thetas, spec.spiral_centers)
    for k, (size, theta, center) in enumerate(groups):
        t = rng.uniform(lo, hi, size)
        pts.append(spiral_points(t, theta) + center)
        lab.append(np.full(size, k))
    return Dataset(np.vstack(pts), np.concatenate(lab))


def generate(spec: GeneratorSpec) -> Dataset:
    if spec.kind == "five_spherical":
        return gen_five_spherical(spec)
    return gen_five_spiral(spec)


def gen_blobs(n, k=8, seed=0, dim=2, spread=10.0, scale=1.0, duplicates=0) -> Dataset:
    """Isotropic Gaussian mixture with ``k`` components and uniform centers.

    ``duplicates`` extra rows are copies of randomly chosen existing points,
    which produces exact distance and density ties.
    """
    if n < 1 or k < 1:
        raise ParameterError("n and k must be positive")
    rng = _rng(seed)
    centers = rng.uniform(-spread, spread, (k, dim))
    comp = rng.integers(0, k, n)
    pts = centers[comp] + rng.normal(scale=scale, size=(n, dim))
    if duplicates:
        src = rng.integers(0, n, duplicates)
        pts = np.vstack([pts, pts[src]])
        comp = np.concatenate([comp, comp[src]])
    return Dataset(pts, comp)


def load_ecoli(path) -> Dataset:
    """Read the UCI ``ecoli.data`` file.

    Each line holds a sequence name, seven numeric attributes and a class
    string, separated by whitespace. The name is dropped; classes are mapped
    to integers in sorted order and kept in ``label_names``.
    """
    feats, classes = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 9:
                raise InputError(f"expected 9 fields (name, 7 attributes, class), got {len(fields)}",
                                 line=lineno, path=path)
            try:
                vals = [float(f) for f in fields[1:8]]
            except ValueError as exc:
                raise InputError(str(exc), line=lineno, path=path) from None
            if not all(math.isfinite(v) for v in vals):
                raise InputError("non-finite attribute", line=lineno, path=path)
            feats.append(vals)
            classes.append(fields[8])
    if not feats:
        raise InputError("no data rows", path=path)
    names = tuple(sorted(set(classes)))
    index = {c: i for i, c in enumerate(names)}
    return Dataset(np.array(feats), np.array([index[c] for c in classes]), label_names=names)


@dataclass(frozen=True)
class Ds1Fixture:
    """Intermediate arrays of the 13-city example, 0-based with ``-1`` at the root."""

    nneigh: np.ndarray
    ord_rho: np.ndarray
    sort_gamma_ind: np.ndarray
    cl: np.ndarray
    centers: tuple = (12, 5, 10)


# as printed (1-based, root parent 0)
_DS1_NNEIGH = (12, 13, 12, 6, 6, 13, 8, 6, 11, 11, 12, 13, 0)
_DS1_ORD_RHO = (13, 12, 11, 10, 9, 6, 3, 2, 4, 8, 1, 7, 5)
_DS1_SORT_GAMMA_IND = (13, 6, 11, 3, 12, 1, 8, 4, 2, 7, 10, 5, 9)
_DS1_CL = (1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 1, 1)


def ds1_fixture(one_based=False) -> Ds1Fixture:
    """The 13-point worked example.

    With ``one_based=True`` the arrays are returned exactly as printed
    (root parent ``0``); otherwise indices are shifted to 0-based and the
    root parent becomes ``-1``. ``cl`` is a label vector and never shifted.
    """
    arrays = [np.array(a, dtype=np.int64) for a in
              (_DS1_NNEIGH, _DS1_ORD_RHO, _DS1_SORT_GAMMA_IND, _DS1_CL)]
    if one_based:
        return Ds1Fixture(*arrays, centers=(13, 6, 11))
    nneigh, ord_rho, sgi, cl = arrays
    return Ds1Fixture(nneigh - 1, ord_rho - 1, sgi - 1, cl)


def read_points_csv(path, header=True) -> Dataset:
    """Load points from CSV.

    With ``header=True`` the first row names the columns; a final column
    named ``label`` is read as integer ground truth.
    """
    rows, labels = [], []
    has_label = False
    ncol = None
    pending_header = header
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, rec in enumerate(reader, start=1):
            if not rec or all(not f.strip() for f in rec):
                continue
            if pending_header:
                pending_header = False
                has_label = rec[-1].strip().lower() == "label"
                ncol = len(rec)
                continue
            if ncol is None:
                ncol = len(rec)
            if len(rec) != ncol:
                raise InputError(f"expected {ncol} fields, got {len(rec)}", line=lineno, path=path)
            coord = rec[:-1] if has_label else rec
            try:
                vals = [float(f) for f in coord]
            except ValueError as exc:
                raise InputError(str(exc), line=lineno, path=path) from None
            if not all(math.isfinite(v) for v in vals):
                raise InputError("non-finite coordinate", line=lineno, path=path)
            rows.append(vals)
            if has_label:
                try:
                    labels.append(int(rec[-1]))
                except ValueError:
                    raise InputError(f"label {rec[-1]!r} is not an integer",
                                     line=lineno, path=path) from None
    if not rows:
        raise InputError("no data rows", path=path)
    return Dataset(np.array(rows), np.array(labels) if has_label else None)


def write_points_csv(path, dataset: Dataset, header=True):
    """Write points with shortest round-trip float formatting."""
    has_label = dataset.labels is not None
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow([f"x{i + 1}" for i in range(dataset.dim)] + (["label"] if has_label else []))
        for i, row in enumerate(dataset.points.tolist()):
            w.writerow([repr(v) for v in row] + ([int(dataset.labels[i])] if has_label else []))


def write_manifest(path, **entries):
    """Sidecar JSON manifest with sorted keys."""
    with open(path, "w") as fh:
        json.dump(entries, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, set)):
        return list(obj)
    return str(obj)
