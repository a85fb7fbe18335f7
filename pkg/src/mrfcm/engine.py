"""A small deterministic map-shuffle-reduce runtime.

Jobs run over a PartitionedStore with an immutable broadcast context.
Logical map tasks equal ``num_mappers`` and are queued onto a bounded
worker pool, so deployments with many more mappers than cores behave
like their cluster counterparts.  The shuffle orders every key's values
by (origin partition, emission order), which makes floating-point
reductions order-stable: rerunning a job with any mapper/reducer count
produces the same grouped inputs.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import EngineError
from .ingest import PartitionedStore


@dataclass(frozen=True)
class JobSpec:
    """Deployment shape of one job: how many map and reduce tasks."""

    num_mappers: int
    num_reducers: int
    job_name: str = "job"

    def __post_init__(self):
        if self.num_mappers < 1 or self.num_reducers < 1:
            raise EngineError(f"{self.job_name}: mapper/reducer counts must be >= 1")


class KeyedRecord(NamedTuple):
    key: object
    value: object
    origin: int  # partition index, secondary sort key


@dataclass
class JobMetrics:
    job_name: str
    num_mappers: int
    num_reducers: int
    map_wall_time: float = 0.0
    shuffle_wall_time: float = 0.0
    reduce_wall_time: float = 0.0
    records_in: int = 0
    records_out: int = 0

    @property
    def total_time(self) -> float:
        return self.map_wall_time + self.shuffle_wall_time + self.reduce_wall_time

    def csv_line(self) -> str:
        return (f"{self.job_name},{self.num_mappers},{self.num_reducers},"
                f"{self.map_wall_time:.6f},{self.shuffle_wall_time:.6f},"
                f"{self.reduce_wall_time:.6f},{self.total_time:.6f}")


METRICS_HEADER = "job_name,num_mappers,num_reducers,map_s,shuffle_s,reduce_s,total_s"


def set_parallelism(spec: JobSpec, available_cores: int | None = None) -> tuple[int, int]:
    """Effective concurrent (map, reduce) worker counts.

    Logical task counts stay at the spec's values; only the number of
    simultaneously running workers is capped by the core count.
    """
    cores = available_cores if available_cores is not None else (os.cpu_count() or 1)
    if cores < 1:
        raise EngineError("available_cores must be >= 1")
    return min(spec.num_mappers, cores), min(spec.num_reducers, cores)


def _assign_round_robin(items, num_tasks):
    """Deterministic task assignment: item i goes to task i mod num_tasks."""
    tasks = [[] for _ in range(min(num_tasks, len(items)) or 1)]
    for i, item in enumerate(items):
        tasks[i % len(tasks)].append(item)
    return tasks


def run_job(spec: JobSpec, store: PartitionedStore, broadcast,
            map_fn: Callable, reduce_fn: Callable,
            available_cores: int | None = None):
    """Execute one map-shuffle-reduce pass.

    map_fn(partition_index, block, broadcast) yields (key, value) pairs;
    reduce_fn(key, values) returns the reduced value for that key, where
    ``values`` is ordered by (origin partition, emission order).  Returns
    (sorted list of (key, reduced_value), JobMetrics).  Output does not
    depend on worker scheduling.
    """
    map_workers, reduce_workers = set_parallelism(spec, available_cores)
    metrics = JobMetrics(spec.job_name, spec.num_mappers, spec.num_reducers)
    pids = list(range(store.num_partitions))
    map_tasks = _assign_round_robin(pids, spec.num_mappers)

    def run_map_task(task_pids):
        emitted = []
        for pid in task_pids:
            try:
                pairs = map_fn(pid, store.block(pid), broadcast)
            except Exception as exc:
                raise EngineError(f"{spec.job_name}: map failed on partition {pid}: {exc}") from exc
            for seq, (key, value) in enumerate(pairs):
                emitted.append((KeyedRecord(key, value, pid), seq))
        return emitted

    t0 = time.perf_counter()
    if map_workers <= 1 or len(map_tasks) <= 1:
        map_outputs = [run_map_task(t) for t in map_tasks]
    else:
        with ThreadPoolExecutor(max_workers=map_workers) as pool:
            map_outputs = list(pool.map(run_map_task, map_tasks))
    metrics.map_wall_time = time.perf_counter() - t0

    # Shuffle: group by key, order each group by (origin, emission order).
    t0 = time.perf_counter()
    groups: dict = {}
    n_in = 0
    for task_out in map_outputs:
        for record, seq in task_out:
            groups.setdefault(record.key, []).append((record.origin, seq, record.value))
            n_in += 1
    try:
        keys = sorted(groups)
    except TypeError as exc:
        raise EngineError(f"{spec.job_name}: emitted keys are not totally ordered: {exc}") from exc
    for key in keys:
        groups[key].sort(key=lambda t: (t[0], t[1]))
    metrics.records_in = n_in
    metrics.shuffle_wall_time = time.perf_counter() - t0

    reduce_tasks = _assign_round_robin(keys, spec.num_reducers)

    def run_reduce_task(task_keys):
        out = []
        for key in task_keys:
            values = [v for _, _, v in groups[key]]
            try:
                out.append((key, reduce_fn(key, values)))
            except Exception as exc:
                raise EngineError(f"{spec.job_name}: reduce failed on key {key!r}: {exc}") from exc
        return out

    t0 = time.perf_counter()
    if reduce_workers <= 1 or len(reduce_tasks) <= 1:
        reduce_outputs = [run_reduce_task(t) for t in reduce_tasks]
    else:
        with ThreadPoolExecutor(max_workers=reduce_workers) as pool:
            reduce_outputs = list(pool.map(run_reduce_task, reduce_tasks))
    metrics.reduce_wall_time = time.perf_counter() - t0

    order = {key: i for i, key in enumerate(keys)}
    results = sorted((pair for task in reduce_outputs for pair in task), key=lambda kv: order[kv[0]])
    metrics.records_out = len(results)
    return results, metrics
