"""Fuzzy c-means as two alternating jobs.

Job 1 broadcasts the current centroids and has every partition compute
membership rows for its records; the reducer only glues sub-matrices
back together.  Job 2 has every partition emit weighted partial sums;
the reducer adds them and the driver divides.  Iterate until the
membership matrix stops moving.  This script runs the loop manually
once to show the moving parts, then lets run_fcm drive.
"""
import numpy as np

from mrfcm import datasets, ingest, mca
from mrfcm.engine import JobSpec
from mrfcm.fcm import (FcmConfig, init_centroids, job1_membership,
                       job2_centroids, run_fcm)

# encode the screening stand-in and fit the projection model
rows = datasets.mammographic_mass_rows()
dataset = ingest.discretize(rows, ingest.infer_schema(datasets.MAMMOGRAPHIC_HEADER, rows))
store = ingest.partition(dataset, 8)
margins, burt, _ = mca.accumulate_burt(store, dataset.cardinalities)
model = mca.fit_mca(margins, burt)
spec = JobSpec(8, 4, "fcm-demo")

# ── one iteration by hand ───────────────────────────────────────────────────
projected, _ = mca.project_store(store, model)
centroids = init_centroids(projected, c=2, seed=42)
print("initial centroids (two distinct projected records):")
print(np.round(centroids, 4))

u, _ = job1_membership(store, model, centroids, spec)
print(f"\njob 1 produced U: {u.shape[0]} x {u.shape[1]}, "
      f"row sums in [{u.sum(axis=1).min():.12f}, {u.sum(axis=1).max():.12f}]")

centroids, objective_value, _ = job2_centroids(store, model, u, spec, centroids=centroids)
print(f"job 2 produced V and the objective J_m = {objective_value:.4f}")
print(np.round(centroids, 4))

# ── the full driver loop ────────────────────────────────────────────────────
config = FcmConfig(c=2, m=2.0, epsilon=1e-5, max_iters=100, seed=42)
result = run_fcm(store, model, config, spec)
print(f"\nrun_fcm: {result.iters_run} iterations, converged={result.converged}")
print("objective trace (non-increasing):")
for i, (jm, delta) in enumerate(zip(result.objective_trace, result.max_delta_trace), 1):
    marker = "  <- stopped here" if i == result.iters_run else ""
    print(f"    iter {i:>2}: J_m = {jm:12.4f}   max |dU| = {delta:.2e}{marker}")

# how fuzzy did the partition end up?
hard = result.u.argmax(axis=1)
confident = (result.u.max(axis=1) > 0.9).mean()
print(f"\ncluster sizes (hard assignment): {np.bincount(hard).tolist()}")
print(f"records with > 0.9 membership in their cluster: {100 * confident:.1f}%")
