"""Local search for strong partitions beyond exhaustive range.

A move swaps the part-``j`` vertices of two member tournaments, which keeps
the partition valid; these transpositions generate every partition.  The
objective ``(non-strong members, total deficiency)`` is compared
lexicographically.  Each restart runs steepest descent (ties -> lowest
``(tournament pair, part)``); with ``tabu_length > 0`` equal-objective
moves are also taken, never undoing one of the last ``tabu_length`` swaps.
A restart ends at a local optimum or after ``max_moves`` moves.
"""

from __future__ import annotations

import multiprocessing as mp
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gen import CounterRNG
from .mpt import MptInstance, induce_transversal
from .partitions import MaxPartition, canonicalize, omega_threshold
from .strong import is_strong_scores, strong_report

# re-verify partition validity and incremental scores after every move (tests)
CHECK_MOVES = False


@dataclass(frozen=True)
class SearchParams:
    seed: int = 0
    max_restarts: int = 64
    max_moves: int = 400
    tabu_length: int = 8
    w_nonstrong: int = 1
    w_deficiency: int = 1
    threads: int = 1

    def __post_init__(self):
        if min(self.seed, self.max_restarts, self.max_moves, self.tabu_length,
               self.w_nonstrong, self.w_deficiency) < 0 or self.threads < 1:
            raise ValueError("search parameters must be non-negative (threads >= 1)")


@dataclass(frozen=True)
class SearchOutcome:
    found: MaxPartition | None
    best_objective: tuple[int, int]
    moves_evaluated: int
    restarts: int
    wall_time: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {
            "found": self.found is not None,
            "partition": None if self.found is None else self.found.to_json(),
            "best_objective": list(self.best_objective),
            "moves_evaluated": self.moves_evaluated,
            "restarts": self.restarts,
        }


class _State:
    def __init__(self, inst: MptInstance, members: np.ndarray, thr: int):
        self.adj = inst.adj.astype(np.int64)
        self.c = inst.c
        self.thr = thr
        self.members = members
        self.scores = np.array([self.adj[np.ix_(m, m)].sum(axis=1) for m in members])
        self.stats = [self._stats(s) for s in self.scores]

    def _stats(self, scores: np.ndarray) -> tuple[int, int]:
        low = np.minimum(scores, self.c - 1 - scores) <= self.thr
        return (0 if is_strong_scores(scores) else 1), int(low.sum())

    def totals(self) -> tuple[int, int]:
        return sum(s[0] for s in self.stats), sum(s[1] for s in self.stats)

    def replaced(self, t: int, j: int, v_new: int) -> np.ndarray:
        m = self.members[t]
        v_old = m[j]
        s = self.scores[t] - self.adj[m, v_old] + self.adj[m, v_new]
        row = self.adj[v_new, m].copy()
        row[j] = 0
        s[j] = row.sum()
        return s

    def try_swap(self, a: int, b: int, j: int):
        va, vb = self.members[a, j], self.members[b, j]
        sa, sb = self.replaced(a, j, vb), self.replaced(b, j, va)
        return sa, sb, self._stats(sa), self._stats(sb)

    def apply(self, a, b, j, sa, sb, st_a, st_b):
        self.members[a, j], self.members[b, j] = self.members[b, j], self.members[a, j]
        self.scores[a], self.scores[b] = sa, sb
        self.stats[a], self.stats[b] = st_a, st_b
        if CHECK_MOVES:
            self.audit()

    def audit(self):
        r = self.members.shape[0]
        for j in range(self.c):
            assert sorted(self.members[:, j]) == list(range(j * r, (j + 1) * r)), "partition broken"
        for t, m in enumerate(self.members):
            assert (self.adj[np.ix_(m, m)].sum(axis=1) == self.scores[t]).all(), "stale scores"


def _weighted(p: SearchParams, tot: tuple[int, int]) -> tuple[int, int]:
    return p.w_nonstrong * tot[0], p.w_deficiency * tot[1]


def _random_members(r: int, c: int, rng: CounterRNG) -> np.ndarray:
    members = np.empty((r, c), dtype=np.int64)
    for j in range(c):
        perm = list(range(r)) if j == 0 else rng.shuffle(list(range(r)))
        members[:, j] = [j * r + k for k in perm]
    return members


def _restart(inst: MptInstance, params: SearchParams, k: int):
    """One descent; returns (members or None, best objective, moves evaluated)."""
    r, c = inst.r, inst.c
    rng = CounterRNG(CounterRNG(params.seed, "search").spawn(k), "search")
    st = _State(inst, _random_members(r, c, rng), omega_threshold(c))
    cur = st.totals()
    best = _weighted(params, cur)
    evaluated = 0
    tabu: deque = deque(maxlen=params.tabu_length or None)
    for _ in range(params.max_moves + 1):
        if cur[0] == 0:
            return st.members.copy(), _weighted(params, cur), evaluated
        choice = None
        for a in range(r):
            for b in range(a + 1, r):
                for j in range(c):
                    key = (j, frozenset((int(st.members[a, j]), int(st.members[b, j]))))
                    sa, sb, st_a, st_b = st.try_swap(a, b, j)
                    evaluated += 1
                    tot = (cur[0] - st.stats[a][0] - st.stats[b][0] + st_a[0] + st_b[0],
                           cur[1] - st.stats[a][1] - st.stats[b][1] + st_a[1] + st_b[1])
                    obj = _weighted(params, tot)
                    if key in tabu and obj >= _weighted(params, cur):
                        continue
                    if choice is None or obj < choice[0]:
                        choice = (obj, tot, key, (a, b, j, sa, sb, st_a, st_b))
        if choice is None:
            break
        obj, tot, key, move = choice
        here = _weighted(params, cur)
        if obj < here or (params.tabu_length and obj == here):
            st.apply(*move)
            cur = tot
            if params.tabu_length:
                tabu.append(key)
            best = min(best, obj)
        else:
            break
    return None, best, evaluated


def _verified(inst: MptInstance, members: np.ndarray) -> MaxPartition:
    part = canonicalize(members.tolist(), inst.r, inst.c)
    for t in part.transversals:
        if not strong_report(induce_transversal(inst, t)).is_strong:
            raise AssertionError(f"search returned a non-strong member {t}")
    return part


_worker_inst = None


def _worker_init(inst):
    global _worker_inst
    _worker_inst = inst


def _worker_restart(args):
    params, k = args
    return _restart(_worker_inst, params, k)


def find_strong_partition_local(inst: MptInstance, params: SearchParams | None = None) -> SearchOutcome:
    """Heuristic search; ``found=None`` means only that nothing was found.

    Restart ``k`` is seeded from ``(params.seed, k)`` alone, so the outcome
    (the lowest successful restart) does not depend on ``params.threads``.
    """
    params = params or SearchParams()
    t0 = time.perf_counter()
    best = (inst.r * params.w_nonstrong + 1, inst.n * params.w_deficiency + 1)
    evaluated = 0

    def finish(k, res):
        nonlocal evaluated, best
        members, obj, ev = res
        evaluated += ev
        best = min(best, obj)
        if members is not None:
            return SearchOutcome(_verified(inst, members), best, evaluated, k + 1, time.perf_counter() - t0)
        return None

    if params.threads <= 1:
        for k in range(params.max_restarts):
            out = finish(k, _restart(inst, params, k))
            if out:
                return out
    else:
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(params.threads, mp_context=ctx, initializer=_worker_init, initargs=(inst,)) as ex:
            for lo in range(0, params.max_restarts, params.threads):
                ks = range(lo, min(lo + params.threads, params.max_restarts))
                results = list(ex.map(_worker_restart, [(params, k) for k in ks]))
                for k, res in zip(ks, results):
                    out = finish(k, res)
                    if out:
                        return out
    return SearchOutcome(None, best, evaluated, params.max_restarts, time.perf_counter() - t0)
