"""Independent straight-line oracles used to check the pipeline.

Everything here is written from the operation contracts alone: plain
single-threaded loops over explicit dense matrices, no reuse of the
package's internals beyond numpy.  Slow on purpose, trusted because it
is simple.
"""
import numpy as np

SINGULARITY_DISTANCE = 1e-12
EMPTY_CLUSTER_EPS = 1e-12


def dense_ca_row_coords(indicator, num_columns):
    """Row principal coordinates of an indicator matrix via the full SVD.

    Builds the correspondence matrix, removes the independence expectation,
    standardizes by the square-root masses, and scales left singular vectors
    by their singular values.  Returns (coords, squared singular values).
    """
    Z = np.asarray(indicator, dtype=float)
    n = Z.shape[0]
    grand = Z.sum()
    P = Z / grand
    r = P.sum(axis=1)
    col = P.sum(axis=0)
    S = (P - np.outer(r, col)) / np.sqrt(np.outer(r, col))
    U, sig, Vt = np.linalg.svd(S, full_matrices=False)
    lam = sig ** 2
    coords = (U * sig) / np.sqrt(r)[:, None]
    return coords, lam


def indicator_of(codes, cardinalities):
    """Explicit n x J one-hot expansion of encoded records."""
    codes = np.asarray(codes)
    n = codes.shape[0]
    J = int(sum(cardinalities))
    offsets = np.concatenate(([0], np.cumsum(cardinalities)))[:-1]
    Z = np.zeros((n, J))
    for i in range(n):
        for q in range(codes.shape[1]):
            Z[i, offsets[q] + codes[i, q]] = 1.0
    return Z


def burt_of(codes, cardinalities):
    Z = indicator_of(codes, cardinalities)
    return Z.T @ Z


def reference_membership(point, centroids, m):
    """One membership row by the textbook formula plus the coincidence rule."""
    c = len(centroids)
    dists = np.array([np.sqrt(((point - centroids[i]) ** 2).sum()) for i in range(c)])
    coincident = dists < SINGULARITY_DISTANCE
    if coincident.any():
        row = coincident.astype(float)
        return row / row.sum()
    row = np.empty(c)
    for i in range(c):
        row[i] = 1.0 / sum((dists[i] / dists[j]) ** (2.0 / (m - 1.0)) for j in range(c))
    return row


def reference_objective(u, centroids, coords, m):
    total = 0.0
    for k in range(len(coords)):
        for i in range(len(centroids)):
            total += (u[k, i] ** m) * ((coords[k] - centroids[i]) ** 2).sum()
    return total


def reference_init(coords, c, seed):
    """Distinct rows in first-appearance order, sampled without replacement."""
    seen = {}
    for k, row in enumerate(coords):
        key = tuple(row)
        if key not in seen:
            seen[key] = k
    distinct = np.array(list(seen.keys()), dtype=float)
    if len(distinct) < c:
        raise ValueError("not enough distinct points")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(distinct), size=c, replace=False)
    return distinct[picks]


def reference_fcm(coords, c, m=2.0, epsilon=1e-5, max_iters=100, seed=0,
                  fixed_iterations=False):
    """Single-threaded fuzzy c-means, one loop, no partitioning anywhere."""
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    centroids = reference_init(coords, c, seed)
    u_prev = None
    trace = []
    converged = False
    iters = 0
    for iters in range(1, max_iters + 1):
        u = np.array([reference_membership(coords[k], centroids, m) for k in range(n)])
        trace.append(reference_objective(u, centroids, coords, m))
        um = u ** m
        weights = um.sum(axis=0)
        new_centroids = np.empty_like(centroids)
        for i in range(len(centroids)):
            if weights[i] < EMPTY_CLUSTER_EPS:
                continue
            new_centroids[i] = (um[:, i][:, None] * coords).sum(axis=0) / weights[i]
        starved = [i for i in range(len(centroids)) if weights[i] < EMPTY_CLUSTER_EPS]
        if starved:
            claim = u.max(axis=1)
            order = np.argsort(claim, kind="stable")
            for slot, i in enumerate(starved):
                new_centroids[i] = coords[order[slot]]
        centroids = new_centroids
        if u_prev is not None and np.abs(u - u_prev).max() < epsilon and not fixed_iterations:
            converged = True
            u_prev = u
            break
        u_prev = u
    return u_prev, centroids, trace, iters, converged


def reference_pc(u):
    total = 0.0
    for k in range(u.shape[0]):
        for i in range(u.shape[1]):
            total += u[k, i] ** 2
    return total / u.shape[0]


def reference_pe(u):
    total = 0.0
    for k in range(u.shape[0]):
        for i in range(u.shape[1]):
            if u[k, i] > 0:
                total += u[k, i] * np.log(u[k, i])
    return -total / u.shape[0]


def reference_xb(u, centroids, coords):
    num = 0.0
    for k in range(coords.shape[0]):
        for i in range(centroids.shape[0]):
            num += (u[k, i] ** 2) * ((coords[k] - centroids[i]) ** 2).sum()
    sep = min(((centroids[i] - centroids[j]) ** 2).sum()
              for i in range(len(centroids)) for j in range(len(centroids)) if i != j)
    return num / (coords.shape[0] * sep)


def reference_sc(u, centroids, coords, m):
    sep = min(((centroids[i] - centroids[j]) ** 2).sum()
              for i in range(len(centroids)) for j in range(len(centroids)) if i != j)
    compact = 0.0
    for k in range(coords.shape[0]):
        for i in range(centroids.shape[0]):
            compact += (u[k, i] ** m) * ((coords[k] - centroids[i]) ** 2).sum()
    return sep / (compact / coords.shape[0])


def random_membership(rng, n, c):
    """A valid row-stochastic matrix drawn from a Dirichlet."""
    return rng.dirichlet(np.ones(c), size=n)
