"""Partitions into maximal (transversal) tournaments.

A partition is stored canonically: transversal ``t`` holds vertex ``t`` of
part 0, and for every other part ``j`` a permutation ``pi_j`` of ``0..r-1``
puts vertex ``j*r + pi_j[t]`` into transversal ``t``.  The partition index
is the mixed-radix number whose digits are the lexicographic ranks of
``pi_1, ..., pi_{c-1}`` (``pi_1`` most significant, radix ``r!``), so the
index ranges over ``[0, (r!)^(c-1))``.

``omega`` of a partition counts vertices whose minimum semidegree inside
their own member tournament is at most ``(c-2)//4``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import multiprocessing as mp
import numpy as np

from . import _kernel
from .mpt import MptInstance, induce_transversal
from .strong import deficiency, strong_report

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 20


class BudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"{count} partitions exceed the enumeration budget of {budget}")
        self.count = count
        self.budget = budget


def omega_threshold(c: int) -> int:
    return (c - 2) // 4


def count_partitions(r: int, c: int) -> int:
    if r < 1 or c < 2:
        raise ValueError("need r >= 1 and c >= 2")
    return math.factorial(r) ** (c - 1)


def partitions_per_transversal(r: int, c: int) -> int:
    """Number of partitions containing a fixed transversal tournament."""
    return math.factorial(r - 1) ** (c - 1)


# permutation ranking (Lehmer code, lexicographic)


def perm_rank(p: Sequence[int]) -> int:
    n = len(p)
    rank = 0
    rest = sorted(p)
    for i, x in enumerate(p):
        k = rest.index(x)
        rank += k * math.factorial(n - 1 - i)
        rest.pop(k)
    return rank


def perm_unrank(rank: int, n: int) -> list[int]:
    rest = list(range(n))
    out = []
    for i in range(n - 1, -1, -1):
        f = math.factorial(i)
        k, rank = divmod(rank, f)
        out.append(rest.pop(k))
    return out


@dataclass(frozen=True)
class MaxPartition:
    """``transversals[t][j]`` is the part-``j`` vertex of tournament ``t``."""

    transversals: tuple[tuple[int, ...], ...]
    index: int

    @property
    def r(self) -> int:
        return len(self.transversals)

    def to_json(self) -> dict:
        return {"partition": [list(t) for t in self.transversals], "index": str(self.index)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _perms_from_index(r: int, c: int, index: int) -> np.ndarray:
    fr = math.factorial(r)
    digits = []
    for _ in range(c - 1):
        index, d = divmod(index, fr)
        digits.append(d)
    digits.reverse()
    perms = np.empty((c, r), dtype=np.int64)
    perms[0] = np.arange(r)
    for j, d in enumerate(digits, start=1):
        perms[j] = perm_unrank(d, r)
    return perms


def partition_from_perms(perms: np.ndarray, index: int) -> MaxPartition:
    c, r = perms.shape
    return MaxPartition(
        tuple(tuple(int(j * r + perms[j, t]) for j in range(c)) for t in range(r)), index
    )


def partition_at(inst: MptInstance | tuple[int, int], index: int) -> MaxPartition:
    r, c = (inst.r, inst.c) if isinstance(inst, MptInstance) else inst
    total = count_partitions(r, c)
    if not (0 <= index < total):
        raise IndexError(f"partition index {index} outside [0, {total})")
    return partition_from_perms(_perms_from_index(r, c, index), index)


def canonicalize(transversals: Sequence[Sequence[int]], r: int, c: int) -> MaxPartition:
    """Order transversals by their part-0 vertex and compute the index; validates."""
    ts = [tuple(int(v) for v in t) for t in transversals]
    if len(ts) != r or any(len(t) != c for t in ts):
        raise ValueError(f"need {r} transversals of {c} vertices")
    for t in ts:
        for j, v in enumerate(t):
            if v // r != j:
                raise ValueError(f"vertex {v} at position {j} is not in part {j}")
    if sorted(v for t in ts for v in t) != list(range(r * c)):
        raise ValueError("transversals are not disjoint / do not cover all vertices")
    ts.sort(key=lambda t: t[0])
    fr = math.factorial(r)
    index = 0
    for j in range(1, c):
        index = index * fr + perm_rank([t[j] - j * r for t in ts])
    return MaxPartition(tuple(ts), index)


def partition_index(p: MaxPartition | Sequence[Sequence[int]], r: int, c: int) -> int:
    ts = p.transversals if isinstance(p, MaxPartition) else p
    return canonicalize(ts, r, c).index


# per-partition statistics


@dataclass(frozen=True)
class PartitionStats:
    omega: int
    strong_count: int
    is_strong_partition: bool


def partition_stats(inst: MptInstance, p: MaxPartition, threshold: int | None = None) -> PartitionStats:
    thr = omega_threshold(inst.c) if threshold is None else threshold
    omega = 0
    strong = 0
    for t in p.transversals:
        tour = induce_transversal(inst, t)
        omega += deficiency(tour, thr)
        strong += strong_report(tour).is_strong
    return PartitionStats(omega, strong, strong == p.r)


def omega_of_partition(inst: MptInstance, p: MaxPartition) -> int:
    return partition_stats(inst, p).omega


@dataclass(frozen=True)
class RangeAggregate:
    """Commutative monoid summary of a set of visited partitions."""

    visited: int = 0
    omega_sum: int = 0
    strong_partitions: int = 0
    first_strong: int | None = None  # lowest index of a strong partition
    min_omega: int | None = None
    max_omega: int | None = None
    strong_members: int = 0  # strongly connected member tournaments, summed

    def __add__(self, other: "RangeAggregate") -> "RangeAggregate":
        def pick(f, a, b):
            return b if a is None else a if b is None else f(a, b)

        return RangeAggregate(
            self.visited + other.visited,
            self.omega_sum + other.omega_sum,
            self.strong_partitions + other.strong_partitions,
            pick(min, self.first_strong, other.first_strong),
            pick(min, self.min_omega, other.min_omega),
            pick(max, self.max_omega, other.max_omega),
            self.strong_members + other.strong_members,
        )

    @classmethod
    def of(cls, index: int, stats: PartitionStats) -> "RangeAggregate":
        return cls(
            1,
            stats.omega,
            int(stats.is_strong_partition),
            index if stats.is_strong_partition else None,
            stats.omega,
            stats.omega,
            stats.strong_count,
        )

    def to_json(self) -> dict:
        return {
            "visited": str(self.visited),
            "omega_sum": str(self.omega_sum),
            "strong_partitions": str(self.strong_partitions),
            "first_strong": None if self.first_strong is None else str(self.first_strong),
            "min_omega": self.min_omega,
            "max_omega": self.max_omega,
            "strong_members": str(self.strong_members),
        }


def stats_visitor(inst: MptInstance, threshold: int | None = None) -> Callable[[int, MaxPartition], RangeAggregate]:
    """Pure-Python visitor producing the same aggregate as the compiled scan."""
    return lambda i, p: RangeAggregate.of(i, partition_stats(inst, p, threshold))


def _scan_chunk(adj, r, c, lo, hi, threshold, stop):
    perms = _perms_from_index(r, c, lo)
    visited, osum, sp, first, mn, mx, sm = _kernel.scan(adj, perms, r, c, hi - lo, threshold, stop)
    if visited == 0:
        return RangeAggregate()
    return RangeAggregate(
        int(visited), int(osum), int(sp), None if first < 0 else lo + int(first), int(mn), int(mx), int(sm)
    )


def enumerate_range(inst: MptInstance, lo: int, hi: int, visitor=None, *, threshold: int | None = None):
    """Visit ``partition_at(i)`` for ``lo <= i < hi`` in increasing order.

    Without a visitor the compiled scan runs and a :class:`RangeAggregate` is
    returned.  A visitor is called as ``visitor(index, partition)`` and its
    results are folded with ``+`` (``None`` for an empty range).
    """
    total = count_partitions(inst.r, inst.c)
    if not (0 <= lo <= hi <= total):
        raise IndexError(f"range [{lo}, {hi}) outside [0, {total}]")
    thr = omega_threshold(inst.c) if threshold is None else threshold
    if visitor is None:
        return _scan_chunk(inst.adj, inst.r, inst.c, lo, hi, thr, False)
    acc = None
    if lo == hi:
        return acc
    perms = _perms_from_index(inst.r, inst.c, lo)
    for i in range(lo, hi):
        if i > lo:
            _kernel.advance(perms)
        v = visitor(i, partition_from_perms(perms, i))
        acc = v if acc is None else acc + v
    return acc


def _chunks(lo: int, hi: int, size: int) -> list[tuple[int, int]]:
    return [(a, min(a + size, hi)) for a in range(lo, hi, size)]


_worker_adj = None


def _worker_init(adj):
    global _worker_adj
    _worker_adj = adj


def _worker_scan(args):
    r, c, lo, hi, thr, stop = args
    return _scan_chunk(_worker_adj, r, c, lo, hi, thr, stop)


def scan(
    inst: MptInstance,
    lo: int = 0,
    hi: int | None = None,
    *,
    threads: int = 1,
    chunk: int = CHUNK,
    threshold: int | None = None,
    stop_at_strong: bool = False,
) -> RangeAggregate:
    """Parallel compiled scan of ``[lo, hi)``; result is independent of
    ``threads`` and ``chunk`` (with ``stop_at_strong`` the scan ends after the
    first chunk, in index order, containing a strong partition)."""
    total = count_partitions(inst.r, inst.c)
    hi = total if hi is None else hi
    if not (0 <= lo <= hi <= total):
        raise IndexError(f"range [{lo}, {hi}) outside [0, {total}]")
    thr = omega_threshold(inst.c) if threshold is None else threshold
    parts = _chunks(lo, hi, chunk)
    agg = RangeAggregate()
    if threads <= 1 or len(parts) <= 1:
        for a, b in parts:
            agg = agg + _scan_chunk(inst.adj, inst.r, inst.c, a, b, thr, stop_at_strong)
            if stop_at_strong and agg.first_strong is not None:
                break
        return agg
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(threads, mp_context=ctx, initializer=_worker_init, initargs=(inst.adj,)) as ex:
        jobs = [ex.submit(_worker_scan, (inst.r, inst.c, a, b, thr, stop_at_strong)) for a, b in parts]
        for job in jobs:
            agg = agg + job.result()
            if stop_at_strong and agg.first_strong is not None:
                for rest in jobs:
                    rest.cancel()
                break
    return agg


def omega_exhaustive(inst: MptInstance, budget: int = DEFAULT_BUDGET, threads: int = 1) -> int:
    total = count_partitions(inst.r, inst.c)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return scan(inst, threads=threads).omega_sum


@dataclass(frozen=True)
class ExhaustiveResult:
    status: str  # "found" | "none" | "unknown"
    partition: MaxPartition | None
    visited: int
    total: int

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "partition": None if self.partition is None else self.partition.to_json(),
            "visited": str(self.visited),
            "total": str(self.total),
        }


def find_strong_partition_exhaustive(
    inst: MptInstance, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> ExhaustiveResult:
    """Lowest-index strong partition, a certified ``none`` when the whole space
    fits the budget, else ``unknown`` after scanning the first ``budget`` indices."""
    total = count_partitions(inst.r, inst.c)
    hi = min(total, budget)
    agg = scan(inst, 0, hi, threads=threads, stop_at_strong=True)
    if agg.first_strong is not None:
        return ExhaustiveResult("found", partition_at(inst, agg.first_strong), agg.visited, total)
    return ExhaustiveResult("none" if hi == total else "unknown", None, agg.visited, total)


def enumerate_slots(r: int, c: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
    """Membership table of partitions ``lo..hi-1`` (see ``_kernel.slots``)."""
    hi = count_partitions(r, c) if hi is None else hi
    return _kernel.slots(_perms_from_index(r, c, lo), r, c, hi - lo)


@dataclass(frozen=True)
class OmegaSurvey:
    """Empirical look at omega over instances with no strong partition."""

    instances: int
    without_strong: int
    min_omega: int | None  # empirical upper bound on the minimum over such instances
    min_ratio: float | None  # omega / (r!)^(c-1), the forced lower bound being 1


def omega_survey(instances: Sequence[MptInstance], budget: int = DEFAULT_BUDGET, threads: int = 1) -> OmegaSurvey:
    vals = []
    for inst in instances:
        total = count_partitions(inst.r, inst.c)
        if total > budget:
            raise BudgetExceeded(total, budget)
        agg = scan(inst, threads=threads)
        if agg.strong_partitions == 0:
            vals.append((agg.omega_sum, agg.omega_sum / total))
    if not vals:
        return OmegaSurvey(len(instances), 0, None, None)
    return OmegaSurvey(len(instances), len(vals), min(v for v, _ in vals), min(q for _, q in vals))
