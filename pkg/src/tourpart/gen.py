"""Seeded instance generators.

All randomness comes from :class:`CounterRNG`, a counter-mode SplitMix64::

    key      = mix(seed + tag * G)           # one stream per (seed, tag)
    word_k   = mix(key + k * G),  k = 1, 2, ...
    mix(z)   : z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
               z ^= z >> 27; z *= 0x94D049BB133111EB
               z ^= z >> 31                   (all mod 2**64)

with ``G = 0x9E3779B97F4A7C15``.  A coin is the top bit of a word;
``randbelow(n)`` is ``(word * n) >> 64``.

Stream tags: random=1, regular=2, dominant=3, near_regular=4, search=5.

``gen_random`` draws one coin per cross-part pair ``u < v`` in row-major order
(``u`` ascending, then ``v``); coin 1 orients ``u -> v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .mpt import MptInstance

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1

STREAM_TAGS = {"random": 1, "regular": 2, "dominant": 3, "near_regular": 4, "search": 5}
KINDS = tuple(k for k in STREAM_TAGS if k != "search")


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class CounterRNG:
    def __init__(self, seed: int, tag: int | str = 0):
        if isinstance(tag, str):
            tag = STREAM_TAGS[tag]
        self.key = _mix((seed + tag * GAMMA) & MASK64)
        self.counter = 0

    def word(self) -> int:
        self.counter += 1
        return _mix((self.key + self.counter * GAMMA) & MASK64)

    def words(self, count: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + 1 + count, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            return _mix_array(np.uint64(self.key) + k * np.uint64(GAMMA))

    def coins(self, count: int) -> np.ndarray:
        return (self.words(count) >> np.uint64(63)).astype(np.uint8)

    def randbelow(self, n: int) -> int:
        return (self.word() * n) >> 64

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def spawn(self, index: int) -> int:
        """Derived seed for sub-task ``index``."""
        return _mix(((self.key + (index + 1) * GAMMA) & MASK64) ^ 0xD1B54A32D192ED03)


@dataclass(frozen=True)
class GenSpec:
    kind: str
    r: int
    c: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; choose from {KINDS}")
        if self.r < 1 or self.c < 2 or self.seed < 0:
            raise ValueError("need r >= 1, c >= 2, seed >= 0")
        if self.kind == "regular" and (self.r * (self.c - 1)) % 2:
            raise ValueError(f"no regular instance: r(c-1) = {self.r * (self.c - 1)} is odd")


def _meta(kind, r, c, seed):
    return (f"gen kind={kind} r={r} c={c} seed={seed}",)


def _random_adj(r: int, c: int, rng: CounterRNG) -> np.ndarray:
    n = r * c
    iu, ju = np.triu_indices(n, 1)
    cross = (iu // r) != (ju // r)
    iu, ju = iu[cross], ju[cross]
    coin = rng.coins(len(iu))
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[iu, ju] = coin
    adj[ju, iu] = 1 - coin
    return adj


def gen_random(r: int, c: int, seed: int = 0) -> MptInstance:
    GenSpec("random", r, c, seed)
    return MptInstance(c, r, _random_adj(r, c, CounterRNG(seed, "random")), _meta("random", r, c, seed))


def gen_dominant(r: int, c: int, seed: int = 0) -> MptInstance:
    """Vertex 0 beats every vertex outside part 0; other pairs are fair coins."""
    GenSpec("dominant", r, c, seed)
    adj = _random_adj(r, c, CounterRNG(seed, "dominant"))
    adj[0, r:] = 1
    adj[r:, 0] = 0
    return MptInstance(c, r, adj, _meta("dominant", r, c, seed))


def _circulant_adj(r: int, c: int, rng: CounterRNG) -> np.ndarray:
    # labels L in Z_n, part(L) = L mod c; vertex id = (L mod c) * r + L // c
    n = r * c
    diffs = [d for d in range(1, n) if d % c and d < n - d]
    coin = rng.coins(len(diffs))
    S = [d if b else n - d for d, b in zip(diffs, coin)]
    L = np.arange(n)
    vid = (L % c) * r + L // c
    adj = np.zeros((n, n), dtype=np.uint8)
    for d in S:
        adj[vid, vid[(L + d) % n]] = 1
    return adj


def _excess(adj: np.ndarray) -> np.ndarray:
    return adj.sum(axis=1, dtype=np.int64) - adj.sum(axis=0, dtype=np.int64)


def _bfs_path(adj: np.ndarray, src: int, targets: np.ndarray, rng: CounterRNG) -> list[int]:
    """Shortest directed path from ``src`` to the reachable target of least
    excess (ties broken by ``rng``); ``targets`` holds per-vertex excess."""
    n = adj.shape[0]
    parent = np.full(n, -1)
    parent[src] = src
    order = [src]
    q = deque([src])
    while q:
        v = q.popleft()
        for w in np.flatnonzero(adj[v]):
            if parent[w] < 0:
                parent[w] = v
                order.append(int(w))
                q.append(int(w))
    reach = np.array(order)
    best = targets[reach].min()
    cands = sorted(int(v) for v in reach[targets[reach] == best])
    w = rng.choice(cands)
    path = [w]
    while path[-1] != src:
        path.append(int(parent[path[-1]]))
    return path[::-1]


def repair_regular(adj: np.ndarray, target: int, rng: CounterRNG) -> np.ndarray:
    """Reverse directed paths between surplus and deficit vertices until every
    ``|d^+ - d^-| <= target``.  Each reversal lowers ``sum |excess|``."""
    adj = adj.copy()
    while True:
        e = _excess(adj)
        if np.abs(e).max() <= target:
            return adj
        if e.max() >= 2:
            u = rng.choice(sorted(np.flatnonzero(e == e.max()).tolist()))
            path = _bfs_path(adj, u, e, rng)
        else:
            w = rng.choice(sorted(np.flatnonzero(e == e.min()).tolist()))
            path = _bfs_path(adj.T, w, -e, rng)[::-1]
        for a, b in zip(path, path[1:]):
            adj[a, b], adj[b, a] = 0, 1


def gen_regular(r: int, c: int, seed: int = 0) -> MptInstance:
    """Every vertex gets ``d^+ = d^- = r(c-1)/2``; circulant template, repaired if needed."""
    GenSpec("regular", r, c, seed)
    rng = CounterRNG(seed, "regular")
    adj = _circulant_adj(r, c, rng)
    if np.abs(_excess(adj)).max():
        adj = repair_regular(adj, 0, rng)
    inst = MptInstance(c, r, adj, _meta("regular", r, c, seed))
    assert (inst.out_degree == r * (c - 1) // 2).all()
    return inst


def gen_near_regular(r: int, c: int, seed: int = 0) -> MptInstance:
    """Fair-coin instance repaired to global irregularity at most 1
    (regular whenever r(c-1) is even)."""
    GenSpec("near_regular", r, c, seed)
    rng = CounterRNG(seed, "near_regular")
    adj = repair_regular(_random_adj(r, c, rng), 1, rng)
    return MptInstance(c, r, adj, _meta("near_regular", r, c, seed))


_GENERATORS = {
    "random": gen_random,
    "regular": gen_regular,
    "dominant": gen_dominant,
    "near_regular": gen_near_regular,
}


def generate(spec: GenSpec | str, r: int | None = None, c: int | None = None, seed: int = 0) -> MptInstance:
    if isinstance(spec, str):
        spec = GenSpec(spec, r, c, seed)
    return _GENERATORS[spec.kind](spec.r, spec.c, spec.seed)
