"""Exact counting of low-degree transversal tournaments.

For a vertex ``x`` the number of transversal tournaments through ``x`` in
which ``x`` has out-degree ``k`` is the coefficient of ``z**k`` in
``prod_{i != part(x)} (d_i^-(x) + d_i^+(x) z)``.  Coordinates with
``d_i^+ in {0, r}`` need no special handling: the impossible branch has a
zero factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .mpt import MptInstance
from .partitions import omega_threshold, partitions_per_transversal


def threshold_for(c: int, mode: str = "floor") -> int:
    """``floor((c-2)/4)`` (default) or ``ceil((c-2)/4)``."""
    if mode == "floor":
        return (c - 2) // 4
    if mode == "ceil":
        return -(-(c - 2) // 4)
    raise ValueError(f"threshold mode must be 'floor' or 'ceil', not {mode!r}")


def poly_product(factors: Sequence[tuple[int, int]]) -> list[int]:
    """Coefficients of ``prod (a + b z)`` for integer pairs ``(a, b)``."""
    coef = [1]
    for a, b in factors:
        nxt = [0] * (len(coef) + 1)
        for k, v in enumerate(coef):
            nxt[k] += v * a
            nxt[k + 1] += v * b
        coef = nxt
    return coef


@dataclass(frozen=True)
class OutdegreeSpectrum:
    vertex: int
    direction: str  # "+" counts out-degree k, "-" in-degree k
    m: tuple[int, ...]


def _factors(inst: MptInstance, x: int, direction: str) -> list[tuple[int, int]]:
    if direction not in "+-" or len(direction) != 1:
        raise ValueError("direction must be '+' or '-'")
    own = inst.part(x)
    out = []
    for i in range(inst.c):
        if i == own:
            continue
        dp = int(inst.part_out[x, i])
        dm = inst.r - dp
        out.append((dm, dp) if direction == "+" else (dp, dm))
    return out


def outdegree_spectrum(inst: MptInstance, x: int, direction: str = "+") -> OutdegreeSpectrum:
    inst._check_vertex(x)
    return OutdegreeSpectrum(x, direction, tuple(poly_product(_factors(inst, x, direction))))


def t_value(inst: MptInstance, x: int, direction: str = "+", threshold: int | None = None) -> int:
    """Transversal tournaments through ``x`` where its out- (in-) degree is at most ``threshold``."""
    thr = omega_threshold(inst.c) if threshold is None else threshold
    return sum(outdegree_spectrum(inst, x, direction).m[: thr + 1])


@dataclass(frozen=True)
class CountReport:
    r: int
    c: int
    threshold: int
    t_plus: tuple[int, ...]
    t_minus: tuple[int, ...]
    factor: int  # ((r-1)!)^(c-1): partitions containing a given transversal tournament
    t_sum: int
    omega: int

    @property
    def f_plus(self) -> tuple[int, ...]:
        return tuple(self.factor * t for t in self.t_plus)

    @property
    def f_minus(self) -> tuple[int, ...]:
        return tuple(self.factor * t for t in self.t_minus)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "c": self.c,
            "threshold": self.threshold,
            "omega": str(self.omega),
            "t_sum": str(self.t_sum),
            "factor": str(self.factor),
            "vertices": [
                {"vertex": x, "t_plus": str(tp), "t_minus": str(tm), "f_plus": str(self.factor * tp),
                 "f_minus": str(self.factor * tm)}
                for x, (tp, tm) in enumerate(zip(self.t_plus, self.t_minus))
            ],
        }


def omega_exact(inst: MptInstance, threshold: int | None = None) -> CountReport:
    """Closed-form sum of omega over all partitions (and per-vertex T/F counts).

    With the default ``floor((c-2)/4)`` threshold no vertex can be low on both
    sides, so ``omega`` equals the enumerated total.
    """
    thr = omega_threshold(inst.c) if threshold is None else threshold
    tp, tm = [], []
    for x in range(inst.n):
        tp.append(t_value(inst, x, "+", thr))
        tm.append(t_value(inst, x, "-", thr))
    factor = partitions_per_transversal(inst.r, inst.c)
    t_sum = sum(tp) + sum(tm)
    return CountReport(inst.r, inst.c, thr, tuple(tp), tuple(tm), factor, t_sum, factor * t_sum)


# real-valued extension


@dataclass(frozen=True)
class RealVector:
    g: tuple[float, ...]
    r: float

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(float(v) for v in self.g))
        if any(not (0.0 <= v <= self.r) for v in self.g):
            raise ValueError(f"coordinates must lie in [0, {self.r}]")

    @property
    def s(self) -> int:
        return len(self.g)


def m_real_all(g: RealVector) -> list[float]:
    """All coefficients of ``prod (r - g_i + g_i z)``; the DP only adds
    non-negative terms so plain float accumulation is stable."""
    coef = [1.0]
    r = g.r
    for x in g.g:
        lo, hi = r - x, x
        nxt = [0.0] * (len(coef) + 1)
        for k, v in enumerate(coef):
            nxt[k] += v * lo
            nxt[k + 1] += v * hi
        coef = nxt
    return coef


def m_real(g: RealVector, k: int) -> float:
    if not (0 <= k <= g.s):
        raise ValueError(f"k must lie in [0, {g.s}]")
    return m_real_all(g)[k]


def _extreme_positions(g: Sequence[float]) -> tuple[int, int]:
    hi = max(range(len(g)), key=lambda i: (g[i], -i))
    lo = min((i for i in range(len(g)) if i != hi), key=lambda i: (g[i], i))
    return hi, lo


def smooth_extremes(g: RealVector) -> RealVector:
    """Replace one maximal and one minimal coordinate by their average."""
    if g.s < 2:
        raise ValueError("need at least two coordinates")
    hi, lo = _extreme_positions(g.g)
    avg = (g.g[hi] + g.g[lo]) / 2
    vals = list(g.g)
    vals[hi] = vals[lo] = min(max(avg, 0.0), g.r)
    return RealVector(tuple(vals), g.r)


@dataclass(frozen=True)
class Prop1Hypothesis:
    holds: bool
    q: int
    p_r: int
    p_0: int
    t: int
    Gamma: float
    gamma: float
    total: float
    required: float
    interior: tuple[int, ...] = field(repr=False)  # coordinates other than the two extremes


def prop1_hypothesis(g: RealVector, q: int) -> Prop1Hypothesis:
    """``p_r + 1 <= q`` and ``sum g >= q (r + Gamma - gamma) + gamma``, with
    ``p_r``/``p_0`` counted over the coordinates other than one maximum and
    one minimum."""
    hi, lo = _extreme_positions(g.g)
    interior = tuple(i for i in range(g.s) if i not in (hi, lo))
    p_r = sum(1 for i in interior if g.g[i] == g.r)
    p_0 = sum(1 for i in interior if g.g[i] == 0.0)
    Gamma, gamma = g.g[hi], g.g[lo]
    total = math.fsum(g.g)
    required = q * (g.r + Gamma - gamma) + gamma
    return Prop1Hypothesis(
        p_r + 1 <= q and total >= required, q, p_r, p_0, len(interior) - p_r - p_0, Gamma, gamma, total, required, interior
    )


def smoothing_condition(g: RealVector, q: int) -> bool:
    """Whether ``M(interior; q-1) <= M(interior; q)``, the condition under which
    averaging the two extremes cannot decrease ``sum_{k<=q} M(g; k)``."""
    h = prop1_hypothesis(g, q)
    sub = m_real_all(RealVector(tuple(g.g[i] for i in h.interior), g.r))
    at = lambda k: sub[k] if 0 <= k < len(sub) else 0.0  # noqa: E731
    return at(q - 1) <= at(q)


def claim1_violations(g: RealVector, q: int) -> list[tuple[int, ...]]:
    """Subsets ``I`` of the strictly-interior coordinates with
    ``|I| = t - (q - p_r) + 1`` and ``sum g_i/(r - g_i) < q - p_r`` (exhaustive)."""
    h = prop1_hypothesis(g, q)
    free = [i for i in h.interior if 0.0 < g.g[i] < g.r]
    size = h.t - (q - h.p_r) + 1
    if size < 0 or size > len(free):
        return []
    need = q - h.p_r
    return [
        I for I in combinations(free, size) if math.fsum(g.g[i] / (g.r - g.g[i]) for i in I) < need
    ]


def binomial_profile_sum(s: int, q: int, eps: float, r: float) -> float:
    """``sum_{k<=q} C(s,k) eps^k (r-eps)^(s-k)`` (all coordinates equal to eps)."""
    return math.fsum(math.comb(s, k) * eps**k * (r - eps) ** (s - k) for k in range(q + 1))
