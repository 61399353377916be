"""Build, verify and time index structures.

Timing follows a warm-cache protocol: for each repetition the structure is
built (timed), ``warmup`` untimed queries are run, then ``queries`` timed
queries are run in one compiled loop and the elapsed monotonic time is
divided by the query count.  Workloads are drawn before timing from
PCG64 streams; the warmup stream uses ``seed + 1`` so it differs from the
timed one.  Every loop folds its answers into a checksum so that none of
the work can be skipped.
"""
from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .bits import BitVector
from .errors import EmptySelectError, InvariantError
from .index import RankSelectIndex, rank_checksum, select_checksum
from .oracle import all_ranks, all_selects, ranks_at, selects_at
from .variants import STRUCTURES, build_structure

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "structure", "dataset", "n", "density", "kind", "build_ms", "space_pct",
    "mean_ns", "mean_wrong_blocks", "reps", "seed",
]


@dataclass
class Workload:
    kind: str
    queries: np.ndarray
    seed: int


def make_workload(kind: str, n: int, n1: int, count: int, seed: int) -> Workload:
    """Uniform queries: rank over ``[0, n - 1]``, select over ``[1, n1]``."""
    gen = np.random.Generator(np.random.PCG64(seed))
    if kind == "rank":
        q = gen.integers(0, n, size=count, dtype=np.int64)
    elif kind == "select":
        if n1 == 0:
            raise EmptySelectError("select workload on a vector with no 1 bits")
        q = gen.integers(1, n1 + 1, size=count, dtype=np.int64)
    else:
        raise ValueError(f"unknown workload kind {kind!r}")
    return Workload(kind, q, seed)


def _run(idx: RankSelectIndex, workload: Workload) -> int:
    if workload.kind == "rank":
        return int(rank_checksum(idx.state, workload.queries))
    return int(select_checksum(idx.state, workload.queries))


@dataclass
class KindResult:
    mean_ns: float
    checksums: list
    mean_wrong_blocks: float | None = None


@dataclass
class BenchReport:
    structure: str
    dataset: str
    n: int
    density: float
    build_ms: float
    space_pct: float
    space_bytes: dict
    reps: int
    seed: int
    kinds: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        out = []
        for kind, res in self.kinds.items():
            out.append({
                "structure": self.structure,
                "dataset": self.dataset,
                "n": self.n,
                "density": f"{self.density:.6f}",
                "kind": kind,
                "build_ms": f"{self.build_ms:.3f}",
                "space_pct": f"{self.space_pct:.4f}",
                "mean_ns": f"{res.mean_ns:.2f}",
                "mean_wrong_blocks": "" if res.mean_wrong_blocks is None else f"{res.mean_wrong_blocks:.6f}",
                "reps": self.reps,
                "seed": self.seed,
            })
        return out


def run_bench(bv: BitVector, structure: str, kinds=("rank", "select"), warmup: int = 10**6,
              queries: int = 10**6, reps: int = 5, seed: int = 0, dataset: str = "") -> BenchReport:
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}")
    if reps < 1 or queries < 1 or warmup < 0:
        raise ValueError("need reps >= 1, queries >= 1, warmup >= 0")
    kinds = list(kinds)
    if "select" in kinds and bv.n1 == 0:
        raise EmptySelectError("select benchmark on a vector with no 1 bits")

    work = {k: make_workload(k, bv.n, bv.n1, queries, seed) for k in kinds}
    warm = {k: make_workload(k, bv.n, bv.n1, warmup, seed + 1) for k in kinds}
    # compile outside the timed region
    build_structure(structure, BitVector.ones(64))

    build_ns = []
    elapsed = {k: [] for k in kinds}
    sums = {k: [] for k in kinds}
    idx = None
    for rep in range(reps):
        t0 = time.perf_counter_ns()
        idx = build_structure(structure, bv)
        build_ns.append(time.perf_counter_ns() - t0)
        for k in kinds:
            _run(idx, warm[k])
            t0 = time.perf_counter_ns()
            sums[k].append(_run(idx, work[k]))
            elapsed[k].append(time.perf_counter_ns() - t0)
        log.info("%s rep %d done", structure, rep)

    space = idx.space()
    report = BenchReport(
        structure=structure, dataset=dataset, n=bv.n, density=bv.n1 / bv.n,
        build_ms=float(np.mean(build_ns)) / 1e6, space_pct=space.overhead_pct,
        space_bytes=space.component_bytes, reps=reps, seed=seed,
    )
    for k in kinds:
        res = KindResult(mean_ns=float(np.mean(elapsed[k])) / queries, checksums=sums[k])
        if k == "select":
            res.mean_wrong_blocks = accuracy_report(idx, work[k].queries)
        report.kinds[k] = res
    return report


def accuracy_report(idx: RankSelectIndex, queries) -> float:
    """Mean wrong_blocks over the given select queries."""
    if idx.n1 == 0:
        raise EmptySelectError("accuracy report needs at least one 1 bit")
    _, wrong = idx.select_instrumented_many(queries)
    return float(wrong.mean()) if wrong.size else 0.0


@dataclass
class VerifyResult:
    ok: bool
    checked_rank: int = 0
    checked_select: int = 0
    counterexample: str | None = None

    def __bool__(self):
        return self.ok


_CHUNK = 1 << 16


def verify(idx: RankSelectIndex, bv: BitVector, sample="full", seed: int = 0) -> VerifyResult:
    """Compare rank and select against the oracle.

    ``sample`` is ``"full"`` (every query) or a count of uniform random
    queries per kind.  Stops at the first mismatch.
    """
    n, n1 = bv.n, bv.n1
    if sample == "full":
        rank_q = np.arange(n, dtype=np.int64)
        select_q = np.arange(1, n1 + 1, dtype=np.int64)
    else:
        count = int(sample)
        rank_q = make_workload("rank", n, n1, count, seed).queries
        select_q = make_workload("select", n, n1, count, seed).queries if n1 else np.zeros(0, np.int64)

    if idx.n != n or idx.n1 != n1:
        return VerifyResult(False, counterexample=f"size mismatch: index (n={idx.n}, n1={idx.n1}) vs vector (n={n}, n1={n1})")

    if sample == "full":
        all_r, all_s = all_ranks(bv), all_selects(bv)

        def expect_rank(q):
            return all_r[q]

        def expect_select(q):
            return all_s[q - 1]
    else:
        def expect_rank(q):
            return ranks_at(bv, q)

        def expect_select(q):
            return selects_at(bv, q)

    result = VerifyResult(True)
    for start in range(0, len(rank_q), _CHUNK):
        q = rank_q[start : start + _CHUNK]
        got, want = idx.rank_many(q), expect_rank(q)
        bad = np.flatnonzero(got != want)
        if bad.size:
            k = bad[0]
            return _fail(result, f"rank({int(q[k])}): expected {int(want[k])}, got {int(got[k])}")
        result.checked_rank += len(q)

    for start in range(0, len(select_q), _CHUNK):
        q = select_q[start : start + _CHUNK]
        want = expect_select(q)
        try:
            got = idx.select_many(q)
        except InvariantError:
            return _fail(result, _first_select_failure(idx, q, want))
        bad = np.flatnonzero(got != want)
        if bad.size:
            k = bad[0]
            return _fail(result, f"select({int(q[k])}): expected {int(want[k])}, got {int(got[k])}")
        result.checked_select += len(q)
    return result


def _fail(result, message):
    result.ok = False
    result.counterexample = message
    return result


def _first_select_failure(idx, queries, expected):
    for j, want in zip(queries.tolist(), expected.tolist()):
        try:
            got = idx.select(j)
        except InvariantError as exc:
            return f"select({j}): expected {want}, raised {exc}"
        if got != want:
            return f"select({j}): expected {want}, got {got}"
    return "select raised on a chunk but no single query reproduces it"


def write_csv(reports, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for report in reports:
            writer.writerows(report.rows())
