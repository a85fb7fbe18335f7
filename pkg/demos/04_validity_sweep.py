"""Finding the number of clusters nobody told us.

Cluster the same data at every candidate c, score each result with four
validity indices, and let them vote.  The partition coefficient and
entropy reward crisp memberships; Xie-Beni and the separation ratio
reward geometry.  The balanced-lever table is the interesting case: its
tilt outcome gives three genuine groups, and three of the four indices
find them.

Writes validity_sweep.png if matplotlib is importable; prints either way.
"""
import numpy as np

from mrfcm import datasets, ingest, mca
from mrfcm.engine import JobSpec
from mrfcm.fcm import FcmConfig
from mrfcm.validity import INDEX_DIRECTIONS, sweep

rows = datasets.balance_scale_rows()
dataset = ingest.discretize(rows, ingest.infer_schema(datasets.BALANCE_SCALE_HEADER, rows))
store = ingest.partition(dataset, 8)
margins, burt, _ = mca.accumulate_burt(store, dataset.cardinalities)
model = mca.fit_mca(margins, burt)
print(f"balanced-lever table: n={dataset.n}, J={dataset.total_categories}, "
      f"{model.dim} MCA axes retained")

config = FcmConfig(c=2, m=1.5, epsilon=1e-5, max_iters=100, seed=7)
report = sweep(store, model, 2, 6, config, JobSpec(8, 4, "sweep-demo"))

print(f"\n{'c':>3} {'PC':>10} {'PE':>10} {'XB':>10} {'SC':>10} {'iters':>6}")
for row in report.rows:
    print(f"{row.c:>3} {row.pc:>10.4f} {row.pe:>10.4f} {row.xb:>10.4f} "
          f"{row.sc:>10.4f} {row.iters:>6}")

print("\nwho votes for what:")
arrows = {+1: "max", -1: "min"}
for name, direction in INDEX_DIRECTIONS.items():
    print(f"    {name.upper():<3} ({arrows[direction]})  ->  c = {report.best_per_index[name]}")
print(f"consensus: c = {report.consensus_c} "
      f"(the table's tilt outcome has 3 classes: L, B, R)")

# ── optional picture ─────────────────────────────────────────────────────────
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    cs = [row.c for row in report.rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in INDEX_DIRECTIONS:
        vals = np.array([getattr(row, name) for row in report.rows])
        finite = np.isfinite(vals)
        lo, hi = vals[finite].min(), vals[finite].max()
        norm = (vals - lo) / (hi - lo if hi > lo else 1.0)
        ax.plot(cs, norm, marker="o", label=name.upper())
    ax.axvline(report.consensus_c, color="gray", ls="--", lw=1,
               label=f"consensus c={report.consensus_c}")
    ax.set_xlabel("number of clusters c")
    ax.set_ylabel("index value (min-max normalized)")
    ax.set_title("Validity indices versus cluster count")
    ax.legend()
    fig.tight_layout()
    fig.savefig("validity_sweep.png", dpi=120)
    print("\nwrote validity_sweep.png")
else:
    print("\nmatplotlib not available; skipped the figure")
