"""Cluster validity indices and the optimal-cluster-count sweep.

Four indices score each candidate cluster count on the converged
partition: the partition coefficient (maximize), partition entropy
(minimize), the Xie-Beni ratio (minimize), and a separation/compactness
ratio (maximize).  The sweep runs one clustering per candidate c and
picks the consensus winner by majority vote across the four indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import JobSpec
from .errors import NumericError
from .fcm import FcmConfig, run_fcm
from .ingest import PartitionedStore, partition
from .mca import MCAModel, ProjectedData, project_store

SEPARATION_EPS = 1e-12

# Direction each index prefers: +1 picks the maximum, -1 the minimum.
INDEX_DIRECTIONS = {"pc": +1, "pe": -1, "xb": -1, "sc": +1}


def pc(u) -> float:
    """Partition coefficient, mean squared membership; 1/c (uniform) to 1 (crisp)."""
    u = np.asarray(u, dtype=float)
    return float((u * u).sum() / u.shape[0])


def pe(u) -> float:
    """Partition entropy (natural log); 0 (crisp) to ln c (uniform)."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(u > 0.0, u * np.log(u), 0.0)
    return float(-terms.sum() / u.shape[0])


def _pairwise_min_sep_sq(centroids) -> float:
    c = centroids.shape[0]
    if c < 2:
        raise NumericError("separation needs at least two centroids")
    best = math.inf
    for i in range(c):
        diff = centroids[i + 1:] - centroids[i]
        if len(diff):
            best = min(best, float((diff * diff).sum(axis=1).min()))
    return best


def _scatter(u, centroids, coords, exponent) -> float:
    diff = coords[:, None, :] - centroids[None, :, :]
    return float(((u ** exponent) * (diff * diff).sum(axis=2)).sum())


def xb(u, centroids, data) -> float:
    """Xie-Beni index: squared-membership scatter over n times the minimum
    squared centroid separation.  Coincident centroids give +inf."""
    coords = data.coords if isinstance(data, ProjectedData) else np.asarray(data, float)
    u = np.asarray(u, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    sep = _pairwise_min_sep_sq(centroids)
    if sep < SEPARATION_EPS:
        return math.inf
    return _scatter(u, centroids, coords, 2.0) / (u.shape[0] * sep)


def sc(u, centroids, data, m: float = 2.0) -> float:
    """Separation/compactness ratio: minimum squared centroid separation over
    the per-record average of the m-weighted scatter.  Larger is better.

    Degenerate cases return sentinels rather than raising: coincident
    centroids give 0 (no separation), and a zero scatter with separated
    centroids gives +inf (perfectly compact).
    """
    coords = data.coords if isinstance(data, ProjectedData) else np.asarray(data, float)
    u = np.asarray(u, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    sep = _pairwise_min_sep_sq(centroids)
    if sep < SEPARATION_EPS:
        return 0.0
    compact = _scatter(u, centroids, coords, m) / u.shape[0]
    if compact <= 0.0:
        return math.inf
    return sep / compact


@dataclass
class ValidityRow:
    c: int
    pc: float
    pe: float
    xb: float
    sc: float
    iters: int
    jm: float
    failed: bool = False


@dataclass
class ValidityReport:
    rows: list = field(default_factory=list)
    best_per_index: dict = field(default_factory=dict)
    consensus_c: int = 0

    def row_for(self, c: int) -> ValidityRow:
        for row in self.rows:
            if row.c == c:
                return row
        raise KeyError(c)


def _vote(rows) -> tuple[dict, int]:
    """Best c per index, then majority vote with the smallest-XB tiebreak."""
    usable = [r for r in rows if not r.failed]
    if not usable:
        raise NumericError("every cluster count in the sweep failed")
    best = {}
    for name, direction in INDEX_DIRECTIONS.items():
        scored = [(getattr(r, name), r.c) for r in usable]
        if direction > 0:
            best[name] = max(scored, key=lambda t: (t[0], -t[1]))[1]
        else:
            best[name] = min(scored, key=lambda t: (t[0], t[1]))[1]
    tally: dict[int, int] = {}
    for winner in best.values():
        tally[winner] = tally.get(winner, 0) + 1
    top = max(tally.values())
    tied = sorted(c for c, votes in tally.items() if votes == top)
    if len(tied) == 1:
        return best, tied[0]
    xb_of = {r.c: r.xb for r in usable}
    return best, min(tied, key=lambda c: (xb_of[c], c))


def sweep(store: PartitionedStore, model: MCAModel | None, c_min: int, c_max: int,
          config: FcmConfig, spec: JobSpec, available_cores=None) -> ValidityReport:
    """Cluster at every c in [c_min, c_max] and score the four indices.

    Each candidate gets a fresh initialization seeded with config.seed + c,
    so the whole sweep is reproducible while candidates stay independent.
    A candidate that fails (for instance, more clusters than distinct
    points) is recorded as a failed row and excluded from the vote.
    """
    if not (2 <= c_min <= c_max):
        raise NumericError(f"need 2 <= c_min <= c_max, got [{c_min}, {c_max}]")
    if c_max > store.n // 2:
        raise NumericError(f"c_max {c_max} exceeds n/2 = {store.n // 2}")

    # The projection is global and does not depend on c: materialize it once
    # and run every candidate on the projected coordinates.
    if model is not None:
        projected, _ = project_store(store, model, spec, available_cores=available_cores)
        coord_store = partition(projected.coords, store.num_partitions)
    else:
        projected = ProjectedData(np.asarray(store.data, dtype=float))
        coord_store = store

    report = ValidityReport()
    for c in range(c_min, c_max + 1):
        run_cfg = FcmConfig(c=c, m=config.m, epsilon=config.epsilon,
                            max_iters=config.max_iters, seed=config.seed + c)
        try:
            result = run_fcm(coord_store, None, run_cfg, spec, available_cores=available_cores)
            row = ValidityRow(
                c=c,
                pc=pc(result.u),
                pe=pe(result.u),
                xb=xb(result.u, result.v, projected),
                sc=sc(result.u, result.v, projected, m=config.m),
                iters=result.iters_run,
                jm=result.objective_trace[-1],
            )
        except NumericError:
            row = ValidityRow(c=c, pc=math.nan, pe=math.nan, xb=math.nan, sc=math.nan,
                              iters=0, jm=math.nan, failed=True)
        report.rows.append(row)
    report.best_per_index, report.consensus_c = _vote(report.rows)
    return report


def write_validity_csv(report: ValidityReport, path):
    """validity.csv: one row per candidate c, consensus appended as a comment."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("c,pc,pe,xb,sc,iters,jm\n")
        for r in report.rows:
            if r.failed:
                fh.write(f"{r.c},failed,failed,failed,failed,0,failed\n")
            else:
                fh.write(f"{r.c},{r.pc:.17g},{r.pe:.17g},{r.xb:.17g},{r.sc:.17g},"
                         f"{r.iters},{r.jm:.17g}\n")
        fh.write(f"# consensus_c={report.consensus_c}\n")


def write_plot_data(report: ValidityReport, path):
    """Plot-ready columns with each index min-max normalized to [0, 1]."""
    rows = [r for r in report.rows if not r.failed]
    names = ["pc", "pe", "xb", "sc"]
    finite = {}
    for name in names:
        vals = np.array([getattr(r, name) for r in rows])
        good = np.isfinite(vals)
        lo = vals[good].min() if good.any() else 0.0
        hi = vals[good].max() if good.any() else 1.0
        span = hi - lo if hi > lo else 1.0
        norm = np.where(good, (vals - lo) / span, 1.0)
        finite[name] = norm
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# c pc_norm pe_norm xb_norm sc_norm\n")
        for i, r in enumerate(rows):
            cols = " ".join(f"{finite[name][i]:.6f}" for name in names)
            fh.write(f"{r.c} {cols}\n")
