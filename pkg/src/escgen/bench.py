"""Timing harness: fast conditional sampler vs. the rejection baseline.

One trial draws ``samples`` size sequences with one method. For the fast
method the trial also pays for ``prepare``, so with ``samples=1`` this is
the single-draw comparison and with ``samples=200`` the amortized one.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from escgen.distributions import ClusterSizeSpec
from escgen.errors import SamplerExhausted, UnreachableError
from escgen.samplers import (
    DEFAULT_MAX_ATTEMPTS,
    make_rng,
    prepare,
    sample_sizes,
    sample_sizes_naive,
)

BENCH_HEADER = ("method", "kind", "params", "n", "samples", "trial", "wall_seconds", "attempts")
METHODS = ("naive", "fast")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    kind: str
    params: str
    n: int
    samples: int
    trial: int
    wall_seconds: float
    attempts: int | None = None

    @property
    def exhausted(self) -> bool:
        return math.isinf(self.wall_seconds)

    def row(self) -> list[str]:
        return [
            self.method,
            self.kind,
            self.params,
            str(self.n),
            str(self.samples),
            str(self.trial),
            repr(self.wall_seconds),
            "" if self.attempts is None else str(self.attempts),
        ]


def trial_seed(seed: int, trial: int) -> int:
    return (seed + trial) % 2**64


def warm_up(spec: ClusterSizeSpec) -> None:
    """Trigger JIT compilation / cache loading outside any timed region."""
    rng = make_rng(0)
    for mode in ("ondemand", "precomputed"):
        try:
            sample_sizes(prepare(spec, 8, mode), rng)
        except UnreachableError:
            sample_sizes(prepare(ClusterSizeSpec.geometric(0.5), 8, mode), rng)


def run_trial(
    spec: ClusterSizeSpec,
    n: int,
    samples: int,
    trial: int,
    method: str,
    seed: int,
    mode: str = "precomputed",
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> BenchRecord:
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    rng = make_rng(trial_seed(seed, trial))
    attempts = None
    if method == "fast":
        t0 = time.perf_counter()
        tables = prepare(spec, n, mode)
        for _ in range(samples):
            sample_sizes(tables, rng)
        wall = time.perf_counter() - t0
    else:
        attempts = 0
        t0 = time.perf_counter()
        try:
            for _ in range(samples):
                _, a = sample_sizes_naive(spec, n, rng, max_attempts, with_attempts=True)
                attempts += a
            wall = time.perf_counter() - t0
        except SamplerExhausted as exc:
            attempts += exc.attempts
            wall = math.inf
    return BenchRecord(method, spec.kind, spec.describe(), n, samples, trial, wall, attempts)


def _run_task(args):
    return run_trial(*args)


def run_bench(
    spec: ClusterSizeSpec,
    n: int,
    samples: int,
    trials: int,
    seed: int,
    mode: str = "precomputed",
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    methods=METHODS,
    jobs: int = 1,
) -> list[BenchRecord]:
    """All (trial, method) records, trial-major. Trial t uses seed + t."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    tasks = [
        (spec, n, samples, t, m, seed, mode, max_attempts) for t in range(trials) for m in methods
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=warm_up, initargs=(spec,)) as ex:
            return list(ex.map(_run_task, tasks))
    warm_up(spec)
    return [_run_task(t) for t in tasks]


def write_csv(records, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in records:
        w.writerow(r.row())


def records_to_json(records) -> list[dict]:
    out = []
    for r in records:
        d = asdict(r)
        if r.exhausted:
            d["wall_seconds"] = None
        out.append(d)
    return out
