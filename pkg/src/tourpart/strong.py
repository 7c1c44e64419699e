"""Strong connectivity and semidegree analysis of tournaments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mpt import Tournament


@dataclass(frozen=True)
class StrongReport:
    is_strong: bool
    condensation_order: int
    min_semidegree: int
    # (A, B) in local indices with every arc between them going A -> B; None when strong
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def _masks(rows: np.ndarray) -> list[int]:
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(p.tobytes(), "little") for p in packed]


def _closure(start: int, rows: list[int], within: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= rows[low.bit_length() - 1]
            frontier ^= low
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def components(t: Tournament) -> list[int]:
    """Strong components as bitmasks, by forward/backward bitset reachability."""
    out_rows = _masks(t.adj)
    in_rows = _masks(t.adj.T)
    left = (1 << t.order) - 1
    comps = []
    while left:
        v = (left & -left).bit_length() - 1
        comp = _closure(v, out_rows, left) & _closure(v, in_rows, left)
        comps.append(comp)
        left &= ~comp
    return comps


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def strong_report(t: Tournament) -> StrongReport:
    n = t.order
    scores = t.scores
    min_semi = int(np.minimum(scores, n - 1 - scores).min()) if n else 0
    if n <= 1:
        return StrongReport(True, 1, min_semi)
    comps = components(t)
    if len(comps) == 1:
        return StrongReport(True, 1, min_semi)
    in_rows = _masks(t.adj.T)
    full = (1 << n) - 1
    # source component: no arc enters it from outside
    for comp in comps:
        preds = 0
        for v in _bits(comp):
            preds |= in_rows[v]
        if not preds & ~comp:
            return StrongReport(False, len(comps), min_semi, (_bits(comp), _bits(full & ~comp)))
    raise AssertionError("condensation without a source")  # pragma: no cover


def is_strong(t: Tournament) -> bool:
    return strong_report(t).is_strong


def is_strong_scores(scores) -> bool:
    """Landau-type criterion: a tournament is strong iff for every ``0 < k < n``
    the k smallest scores sum to more than ``k(k-1)/2``."""
    s = sorted(int(x) for x in scores)
    acc = 0
    for k, x in enumerate(s[:-1], start=1):
        acc += x
        if acc == k * (k - 1) // 2:
            return False
    return True


def deficiency(t: Tournament, threshold: int) -> int:
    """Number of vertices with ``min(d^+, d^-) <= threshold`` inside ``t``."""
    s = t.scores
    return int(np.count_nonzero(np.minimum(s, t.order - 1 - s) <= threshold))
