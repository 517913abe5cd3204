"""Batch benchmark harness with hardware-independent cost reporting.

Wall-clock numbers vary across machines, so rows carry the lift count of the
decision run as the portable cost metric and the millisecond column is
informational only.  Instances are generated per index from a spawned seed,
decided under one or all queue policies, and reported as CSV rows in index
order; independent instances may be decided on a process pool capped by the
``HYTN_THREADS`` environment variable.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .generate import Family, GenSpec, gen_random, gen_slow_family, spawn_seed
from .model import HyTN, classify
from .mpg import QueuePolicy
from .solver import check_consistency

CSV_HEADER = "id,n,m,W,class,verdict,lifts,policy,ms,seed"

ALL_POLICIES = (
    QueuePolicy.FIFO,
    QueuePolicy.LIFO,
    QueuePolicy.LIFO_EARLY_STOP,
    QueuePolicy.MAX_PRIORITY,
)


@dataclass(frozen=True)
class BenchRow:
    instance_id: int
    n: int
    m: int
    max_weight: int
    net_class: str
    verdict: str
    lifts: int
    policy: str
    ms: float
    seed: int

    def as_csv(self) -> str:
        return (
            f"{self.instance_id},{self.n},{self.m},{self.max_weight},"
            f"{self.net_class},{self.verdict},{self.lifts},{self.policy},"
            f"{self.ms:.3f},{self.seed}"
        )


@dataclass(frozen=True)
class BenchSpec:
    """One benchmark batch: a family plus its generation parameters."""

    family: Family
    count: int
    seed: int
    n: int = 1000
    max_weight: int = 1000
    hyper_fraction: float = 0.1
    out_degree: int = 3
    slow_w0: int = 16
    policies: tuple[QueuePolicy, ...] = (QueuePolicy.LIFO_EARLY_STOP,)

    def instance(self, index: int) -> tuple[HyTN, int, int]:
        """Materialize instance ``index``: network, its W, its seed."""
        if self.family is Family.RANDOM:
            seed = spawn_seed(self.seed, index)
            spec = GenSpec(self.n, self.max_weight, self.hyper_fraction,
                           self.out_degree, seed)
            return gen_random(spec), self.max_weight, seed
        if self.family is Family.SLOW:
            w = self.slow_w0 << index
            return gen_slow_family(w), w, self.seed
        raise ValueError(
            "sat3 instances are NP-complete to decide and cannot be benchmarked"
        )


def _decide_one(args: tuple[BenchSpec, int]) -> list[BenchRow]:
    spec, index = args
    net, w, seed = spec.instance(index)
    cls = classify(net).value
    rows = []
    for policy in spec.policies:
        consistent, stats = check_consistency(net, policy)
        rows.append(
            BenchRow(
                instance_id=index,
                n=net.order,
                m=net.size,
                max_weight=w,
                net_class=cls,
                verdict="CONSISTENT" if consistent else "INCONSISTENT",
                lifts=stats.lifts,
                policy=policy.value,
                ms=stats.elapsed_s * 1000.0,
                seed=seed,
            )
        )
    return rows


def pool_size(count: int) -> int:
    cap = os.environ.get("HYTN_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, count))


def run_bench(spec: BenchSpec) -> list[BenchRow]:
    """Decide every instance of the batch, rows in instance-index order."""
    jobs = [(spec, i) for i in range(spec.count)]
    workers = pool_size(spec.count)
    if workers == 1:
        nested: Iterable[list[BenchRow]] = map(_decide_one, jobs)
        return [row for rows in nested for row in rows]
    # Compile the solver kernel before forking so workers inherit it.
    check_consistency(gen_slow_family(2))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [row for rows in pool.map(_decide_one, jobs) for row in rows]


def write_csv(rows: Sequence[BenchRow], out: TextIO) -> None:
    out.write(CSV_HEADER + "\n")
    for row in rows:
        out.write(row.as_csv() + "\n")
