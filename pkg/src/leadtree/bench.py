"""Timing harness for assignment versus leading-tree construction and splitting.

Three stages are timed in isolation, each on precomputed inputs:

``assign``
    label propagation along the density order (:func:`peaks.assign_baseline`)
``construct``
    building the leading tree from ``nn`` and the gamma order
``split``
    recording the ``m - 1`` edge cuts (labels not materialised)
``split_labels``
    ``split`` followed by :func:`ltree.forest_labels`; optional

Constructing the tree pays off after ``Nl`` layers once
``T_construct + Nl * T_split < Nl * T_assign``.
"""

from __future__ import annotations

import csv
import gc
import math
import platform
import statistics
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.spatial import cKDTree

from ._errors import ParameterError
from .density import Dataset, density_order
from .ltree import build, forest_labels, split
from .peaks import NONE, PeakProfile, assign_baseline, gamma, gamma_order, select_centers
from .pipeline import fit

__all__ = [
    "STAGES",
    "StageInputs",
    "StageTiming",
    "BenchRow",
    "BenchReport",
    "prepare_inputs",
    "inputs_from_arrays",
    "fast_profile",
    "time_stage",
    "break_even_layers",
    "linear_fit",
    "flatness_test",
    "run_benchmark",
    "scaling_study",
    "write_report_csv",
]

STAGES = ("assign", "construct", "split")
ALL_STAGES = STAGES + ("split_labels",)
REPORT_COLUMNS = ("dataset", "N", "m", "stage", "median_ns", "min_ns", "repeats", "break_even_Nl")
MIN_REPEATS = 3
DEFAULT_REPEATS = 21
# below this the interpreter call overhead dominates what is being measured
LOW_CONFIDENCE_NS = 5_000
# datasets larger than this get their profile from fast_profile instead of the full matrix
EXACT_PROFILE_LIMIT = 6000

_sink = []


@dataclass(frozen=True)
class StageInputs:
    """Everything the timed stages consume, computed up front."""

    name: str
    nn: np.ndarray
    q: np.ndarray
    gamma_order: np.ndarray
    centers: np.ndarray
    tree: object

    @property
    def n(self) -> int:
        return self.nn.size

    @property
    def m(self) -> int:
        return self.centers.size


def prepare_inputs(profile: PeakProfile, m: int, name="") -> StageInputs:
    return inputs_from_arrays(profile.nn, profile.q, profile.gamma_order, m, name)


def inputs_from_arrays(nn, q, order, m: int, name="") -> StageInputs:
    """Stage inputs straight from the three index arrays (0-based)."""
    nn = np.asarray(nn, dtype=np.int64)
    q = np.asarray(q, dtype=np.int64)
    order = np.asarray(order, dtype=np.int64)
    centers = select_centers(order, m)
    return StageInputs(name, nn, q, order, centers, build(nn, order))


def fast_profile(points, percent=2.0, seed=0, n_pairs=200_000, k=16) -> PeakProfile:
    """Cutoff-kernel profile for large N without a distance matrix.

    ``dc`` is the ``percent`` percentile of ``n_pairs`` random pairs. Densities
    come from a kd-tree ball count. Each point's nearest higher-density
    neighbour is searched among its ``k`` nearest neighbours first and by a
    full scan when none qualifies or a distance tie reaches the end of that
    list, so ``nn`` agrees with the exact pipeline on the same ``dc``.
    """
    X = np.asarray(points.points if isinstance(points, Dataset) else points, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise ParameterError("need at least two points")
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, n_pairs)
    j = rng.integers(0, n, n_pairs)
    d = np.linalg.norm(X[i[i != j]] - X[j[i != j]], axis=1)
    rank_dc = min(max(math.ceil(percent * d.size / 100.0), 1), d.size)
    dc = float(np.partition(d, rank_dc - 1)[rank_dc - 1])
    if dc <= 0:
        raise ParameterError("sampled dc is zero")
    return _kdtree_profile(X, dc, k)


def _kdtree_profile(X, dc, k=16):
    n = X.shape[0]
    kd = cKDTree(X)
    # ball query is inclusive; shrink by one ulp for the strict kernel
    rho = kd.query_ball_point(X, np.nextafter(dc, 0), return_length=True).astype(float) - 1
    q = density_order(rho)
    rank = np.empty(n, dtype=np.int64)
    rank[q] = np.arange(n)
    kk = min(k + 1, n)
    dist, nbr = kd.query(X, k=kk)
    dist = dist.reshape(n, kk)
    nbr = nbr.reshape(n, kk)
    higher = rank[nbr] < rank[:, None]
    dmask = np.where(higher, dist, np.inf)
    dmin = dmask.min(axis=1)
    # among equidistant candidates prefer the earliest in density order
    tied = higher & (dist == dmin[:, None])
    nrank = np.where(tied, rank[nbr], n).min(axis=1)
    nn = np.where(nrank < n, q[np.minimum(nrank, n - 1)], NONE)
    delta = dmin.copy()
    unresolved = np.isinf(dmin) | (dmin >= dist[:, -1])
    unresolved[q[0]] = False
    for p in np.flatnonzero(unresolved):
        cand = q[:rank[p]]
        dd = np.linalg.norm(X[cand] - X[p], axis=1)
        t = int(np.argmin(dd))
        delta[p] = dd[t]
        nn[p] = cand[t]
    root = q[0]
    nn[root] = NONE
    delta[root] = np.linalg.norm(X - X[root], axis=1).max()
    g = gamma(rho, delta)
    return PeakProfile(rho, delta, nn, g, q, gamma_order(g), kernel="cutoff", dc=dc)


@dataclass(frozen=True)
class StageTiming:
    stage: str
    median_ns: float
    min_ns: int
    repeats: int
    samples: tuple = field(repr=False)

    @property
    def low_confidence(self) -> bool:
        return self.min_ns <= 0 or self.median_ns < LOW_CONFIDENCE_NS


def _stage_callable(stage, inp: StageInputs):
    if stage == "assign":
        return lambda: assign_baseline(inp.nn, inp.q, inp.centers)
    if stage == "construct":
        return lambda: build(inp.nn, inp.gamma_order, validate=False)
    if stage == "split":
        return lambda: split(inp.tree, inp.centers, mode="prefix_fast")
    if stage == "split_labels":
        return lambda: forest_labels(split(inp.tree, inp.centers, mode="prefix_fast"))
    raise ParameterError(f"unknown stage {stage!r}; expected one of {ALL_STAGES}")


def time_stage(stage, inputs: StageInputs, repeats=DEFAULT_REPEATS, warmup=5) -> StageTiming:
    """Wall-clock one stage ``repeats`` times; report median and minimum in ns.

    The garbage collector is paused while timing and every result is kept
    alive in a sink until the next call.
    """
    if repeats < MIN_REPEATS:
        raise ParameterError(f"repeats must be at least {MIN_REPEATS}, got {repeats}")
    fn = _stage_callable(stage, inputs)
    for _ in range(warmup):
        _sink.append(fn())
    samples = []
    clock = time.perf_counter_ns
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repeats):
            t0 = clock()
            out = fn()
            t1 = clock()
            _sink.append(out)
            samples.append(t1 - t0)
    finally:
        if was_enabled:
            gc.enable()
        _sink.clear()
    return StageTiming(stage, float(statistics.median(samples)), min(samples), repeats, tuple(samples))


def break_even_layers(t_constr, t_assign, t_split):
    """Smallest integer ``Nl`` with ``Nl > t_constr / (t_assign - t_split)``.

    Returns ``None`` when splitting is not cheaper than assigning.
    """
    for name, v in (("t_constr", t_constr), ("t_assign", t_assign), ("t_split", t_split)):
        if not (v > 0 and math.isfinite(v)):
            raise ParameterError(f"{name} must be positive and finite, got {v}")
    if t_assign <= t_split:
        return None
    return math.floor(t_constr / (t_assign - t_split)) + 1


def linear_fit(x, y):
    """Least-squares line; returns ``(slope, intercept, r_squared)``."""
    res = stats.linregress(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(res.slope), float(res.intercept), float(res.rvalue ** 2)


@dataclass(frozen=True)
class FlatnessResult:
    flat: bool
    slope: float
    ci: tuple
    p_value: float
    change_over_range: float
    tolerance: float


def flatness_test(sizes, samples, level=0.99, rel_tol=0.2) -> FlatnessResult:
    """Is time independent of N?

    ``samples[k]`` holds the raw timings at ``sizes[k]``. A line is fitted
    through all of them. The answer is yes when the ``level`` confidence
    interval of the slope contains zero, or when the whole interval implies a
    change over the size range below ``rel_tol`` times the median time.
    """
    x = np.concatenate([np.full(len(s), n, dtype=float) for n, s in zip(sizes, samples)])
    y = np.concatenate([np.asarray(s, dtype=float) for s in samples])
    res = stats.linregress(x, y)
    tq = stats.t.ppf(0.5 + level / 2, df=x.size - 2)
    lo, hi = res.slope - tq * res.stderr, res.slope + tq * res.stderr
    span = float(x.max() - x.min())
    change = max(abs(lo), abs(hi)) * span
    tol = rel_tol * float(np.median(y))
    flat = bool(lo <= 0 <= hi or change <= tol)
    return FlatnessResult(flat, float(res.slope), (float(lo), float(hi)), float(res.pvalue), change, tol)


@dataclass(frozen=True)
class BenchRow:
    dataset: str
    N: int
    m: int
    stage: str
    median_ns: float
    min_ns: int
    repeats: int
    break_even_Nl: int | None
    low_confidence: bool = False


@dataclass
class BenchReport:
    rows: list
    environment: str
    summary: dict = field(default_factory=dict)

    def rows_for(self, dataset):
        return [r for r in self.rows if r.dataset == dataset]

    def median(self, dataset, stage):
        for r in self.rows:
            if r.dataset == dataset and r.stage == stage:
                return r.median_ns
        raise KeyError((dataset, stage))

    def text(self) -> str:
        out = [f"environment: {self.environment}"]
        for name, s in self.summary.items():
            nl = s["break_even_Nl"]
            out.append(
                f"{name}: N={s['N']} m={s['m']} split<assign={s['split_faster']} "
                f"break_even_Nl={'-' if nl is None else nl}"
            )
            if s["low_confidence"]:
                out.append(f"  low-confidence stages (median < {LOW_CONFIDENCE_NS} ns): "
                           + ", ".join(s["low_confidence"]))
        return "\n".join(out) + "\n"


def environment_note() -> str:
    info = time.get_clock_info("perf_counter")
    return (f"python {platform.python_version()} numpy {np.__version__} "
            f"{platform.machine()} clock={info.implementation} res={info.resolution:g}s single-thread")


def _as_profile(data, kernel, percent, seed):
    if isinstance(data, PeakProfile):
        return data
    if isinstance(data, Dataset) and data.n > EXACT_PROFILE_LIMIT:
        return fast_profile(data, percent=percent, seed=seed)
    return fit(data, kernel=kernel, percent=percent).profile


def run_benchmark(datasets, layer_counts, repeats=DEFAULT_REPEATS, kernel="gaussian",
                  percent=2.0, seed=0, stages=STAGES) -> BenchReport:
    """Time every stage on every dataset at its finest layer count.

    Parameters
    ----------
    datasets : dict
        Name to :class:`Dataset`, :class:`PeakProfile` or ready
        :class:`StageInputs` (whose own ``m`` is then used).
    layer_counts : dict or sequence of int
        Per-dataset layer counts, or one sequence for all; the largest count
        is the ``m`` used for timing.
    """
    if repeats < MIN_REPEATS:
        raise ParameterError(f"repeats must be at least {MIN_REPEATS}, got {repeats}")
    report = BenchReport([], environment_note())
    for name, data in datasets.items():
        if isinstance(data, StageInputs):
            inp = data
        else:
            counts = layer_counts[name] if isinstance(layer_counts, dict) else layer_counts
            prof = _as_profile(data, kernel, percent, seed)
            inp = prepare_inputs(prof, min(max(int(c) for c in counts), prof.n), name)
        m = inp.m
        timings = {st: time_stage(st, inp, repeats) for st in stages}
        nl = None
        if all(s in timings for s in STAGES):
            nl = break_even_layers(timings["construct"].median_ns,
                                   timings["assign"].median_ns,
                                   timings["split"].median_ns)
        for st, t in timings.items():
            report.rows.append(BenchRow(name, inp.n, m, st, t.median_ns, t.min_ns,
                                        t.repeats, nl, t.low_confidence))
        report.summary[name] = {
            "N": inp.n,
            "m": m,
            "split_faster": bool(timings["split"].median_ns < timings["assign"].median_ns)
            if "split" in timings and "assign" in timings else None,
            "break_even_Nl": nl,
            "low_confidence": [st for st, t in timings.items() if t.low_confidence],
        }
    return report


@dataclass
class ScalingResult:
    sizes: tuple
    m: int
    timings: dict  # stage -> list of StageTiming, aligned with sizes
    fits: dict = field(default_factory=dict)
    flatness: FlatnessResult | None = None
    break_even: list = field(default_factory=list)

    def medians(self, stage):
        return [t.median_ns for t in self.timings[stage]]


def scaling_study(sizes=(1000, 4000, 16000, 64000), m=8, repeats=DEFAULT_REPEATS, seed=0,
                  percent=2.0) -> ScalingResult:
    """Time all stages on Gaussian blobs of increasing size.

    Fits a line to the assign and construct medians, tests split times for
    flatness and derives the break-even layer count at every size.
    """
    from .datasets import gen_blobs

    timings = {st: [] for st in STAGES}
    nls = []
    for k, n in enumerate(sizes):
        ds = gen_blobs(n, k=m, seed=seed + k)
        prof = fast_profile(ds, percent=percent, seed=seed)
        inp = prepare_inputs(prof, m, f"blobs{n}")
        for st in STAGES:
            timings[st].append(time_stage(st, inp, repeats))
        nls.append(break_even_layers(timings["construct"][-1].median_ns,
                                     timings["assign"][-1].median_ns,
                                     timings["split"][-1].median_ns))
    res = ScalingResult(tuple(sizes), m, timings, break_even=nls)
    for st in ("assign", "construct", "split"):
        res.fits[st] = linear_fit(sizes, res.medians(st))
    res.flatness = flatness_test(sizes, [t.samples for t in timings["split"]])
    return res


def write_report_csv(path, report: BenchReport):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in report.rows:
            w.writerow([r.dataset, r.N, r.m, r.stage, f"{r.median_ns:.0f}", r.min_ns, r.repeats,
                        "" if r.break_even_Nl is None else r.break_even_Nl])
