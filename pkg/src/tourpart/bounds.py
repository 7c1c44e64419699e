"""Evaluation of the counting bounds and sufficient conditions.

Rational quantities are compared exactly.  Quantities involving ``sqrt(c)``
or ``3**(3/4)`` are enclosed with mpmath interval arithmetic (outward
rounding) and their endpoints are converted to exact fractions, so a
comparison is ``holds``/``fails`` only when the enclosures are disjoint and
``borderline`` otherwise.

Verdicts for lemma-level checks: ``holds``, ``fails``, ``borderline``,
``hypothesis-fails``.  Verdicts for the sufficient conditions:
``guaranteed``, ``inconclusive``, ``out-of-scope``, ``borderline``.
``inconclusive`` never means that no strong partition exists.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from mpmath import iv
from mpmath.libmp import to_rational

from .counting import (
    RealVector,
    binomial_profile_sum,
    m_real_all,
    omega_exact,
    prop1_hypothesis,
    t_value,
    threshold_for,
)
from .mpt import MptInstance, irregularity
from .partitions import partitions_per_transversal

DEFAULT_PREC = 160
PROP1_TOL = 1e-9
TABLE_R = (2, 3, 5, 10, 100)
# reference values for the p(c) base cases and the C(r) table
PUBLISHED_PC = {10: "36.65", 11: "62.3", 12: "105.05", 13: "180.72"}
PUBLISHED_CR = {2: 26, 3: 30, 5: 35, 10: 40, 100: 60}


@contextmanager
def _ivprec(bits: int):
    if bits < 128:
        raise ValueError("interval precision must be at least 128 bits")
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _endpoint(raw) -> Fraction:
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def _decimal(x: Fraction, digits: int, up: bool) -> str:
    """Decimal string of ``x`` rounded toward +inf (``up``) or -inf."""
    if x == 0:
        return "0"
    e = math.floor(math.log10(abs(x.numerator)) - math.log10(x.denominator))
    scale = Fraction(10) ** (digits - 1 - e)
    y = x * scale
    k = math.ceil(y) if up else math.floor(y)
    return str(Fraction(k) / scale) if scale < 1 else _fmt_scaled(k, digits - 1 - e)


def _fmt_scaled(k: int, shift: int) -> str:
    sign = "-" if k < 0 else ""
    s = str(abs(k)).rjust(shift + 1, "0")
    whole, frac = s[: len(s) - shift], s[len(s) - shift:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


@dataclass(frozen=True)
class Quantity:
    """Closed enclosure ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction
    exact: bool = False

    @classmethod
    def of(cls, x: Fraction | int) -> "Quantity":
        x = Fraction(x)
        return cls(x, x, True)

    @classmethod
    def from_iv(cls, x) -> "Quantity":
        a, b = x._mpi_
        return cls(_endpoint(a), _endpoint(b))

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def to_json(self, digits: int = 30) -> dict:
        out = {"lo": _decimal(self.lo, digits, False), "hi": _decimal(self.hi, digits, True)}
        if self.exact:
            out["exact"] = str(self.lo)
        return out


def compare(lhs: Quantity, rhs: Quantity, relation: str) -> str:
    """``holds``/``fails`` when certified, else ``borderline``."""
    if relation == ">=":
        if lhs.lo >= rhs.hi:
            return "holds"
        if lhs.hi < rhs.lo:
            return "fails"
    elif relation == "<=":
        if lhs.hi <= rhs.lo:
            return "holds"
        if lhs.lo > rhs.hi:
            return "fails"
    elif relation == "<":
        if lhs.hi < rhs.lo:
            return "holds"
        if lhs.lo >= rhs.hi:
            return "fails"
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return "borderline"


@dataclass(frozen=True)
class ConditionReport:
    name: str
    relation: str
    lhs: Quantity | None
    rhs: Quantity | None
    hypotheses: dict[str, bool]
    verdict: str
    checks: dict[str, bool] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": None if self.lhs is None else self.lhs.to_json(),
            "rhs": None if self.rhs is None else self.rhs.to_json(),
            "hypotheses": self.hypotheses,
            "checks": self.checks,
            "verdict": self.verdict,
            "notes": list(self.notes),
            "data": self.data,
        }


# degree hypotheses shared by the theorem and corollaries


def degree_bound_1(r: int, c: int) -> Fraction:
    return Fraction(r * (c - 1) * (c + 6), 4 * (c + 1))


def degree_bound_2(inst: MptInstance, q: int | None = None) -> int:
    irr = irregularity(inst)
    q = threshold_for(inst.c) if q is None else q
    return q * (inst.r + irr.mu) + max(irr.delta_V_plus, irr.delta_V_minus)


def lemma3_bound(c: int, d_self: int, d_other: int, q: int) -> Fraction:
    """``sum_{k<=q} C(c-1,k) (a/b)^k (b/(c-1))^(c-1)`` written without the ratio,
    so ``b = 0`` is defined (``0**0 = 1``)."""
    return Fraction(
        sum(math.comb(c - 1, k) * d_self**k * d_other ** (c - 1 - k) for k in range(q + 1)), (c - 1) ** (c - 1)
    )


def lemma3_check(inst: MptInstance, x: int, direction: str = "+", threshold: int | None = None) -> ConditionReport:
    c, r = inst.c, inst.r
    q = threshold_for(c) if threshold is None else threshold
    irr = irregularity(inst)
    hyp = irr.delta >= q * (r + irr.mu) + max(irr.delta_V_plus, irr.delta_V_minus)
    t = t_value(inst, x, direction, q)
    dp, dm = int(inst.out_degree[x]), int(inst.in_degree[x])
    a, b = (dp, dm) if direction == "+" else (dm, dp)
    bound = lemma3_bound(c, a, b, q)
    lhs, rhs = Quantity.of(t), Quantity.of(bound)
    notes = []
    if b == 0:
        notes.append("ratio form undefined (opposite degree 0); product form used, T compared to the 0-degree case")
    checks = {}
    side = inst.part_out[x] if direction == "+" else inst.part_in[x]
    forced = int((side == r).sum())
    if threshold_for(c, "ceil") < forced:
        checks["forced_zero"] = t == 0
    verdict = compare(lhs, rhs, "<=") if hyp else "hypothesis-fails"
    return ConditionReport(
        f"lemma3[{x}{direction}]", "<=", lhs, rhs, {"min_degree": hyp}, verdict, checks, tuple(notes),
        {"vertex": x, "direction": direction, "threshold": q, "forced": forced},
    )


def lemma4_terms(c: int, p: int | Fraction, m: int | Fraction) -> tuple[Fraction, Fraction, Fraction | None]:
    """(lhs, rhs, claim bound) for ratio ``p/m``; the claim bound is None when
    its denominator ``p(c-1-q) - m(q+1)`` is not positive."""
    q = threshold_for(c)
    ratio = Fraction(p) / Fraction(m)
    lhs = sum(math.comb(c - 1, k) * ratio**k for k in range(q + 1))
    big = ratio if ratio >= 1 else 1 / ratio
    rhs = math.comb(c - 1, q) * Fraction(3 * c - 2, 2 * c - 4) * big**q
    den = Fraction(p) * (c - 1 - q) - Fraction(m) * (q + 1)
    claim = None if den <= 0 else math.comb(c - 1, q) * ratio**q * Fraction(p) * (c - 1 - q) / den
    return lhs, rhs, claim


def lemma4_check(c: int, p: int, m: int) -> ConditionReport:
    q = threshold_for(c)
    hyps = {"c>=10": c >= 10, "r_integral": (p + m) % (c - 1) == 0}
    r = Fraction(p + m, c - 1)
    hyps["min_degree"] = min(p, m) >= r * (c - 1) * (c + 6) / (4 * (c + 1)) and min(p, m) > 0
    if min(p, m) <= 0:
        return ConditionReport("lemma4", "<", None, None, hyps, "hypothesis-fails")
    lhs, rhs, claim = lemma4_terms(c, p, m)
    checks = {"degree_ratio": p * (c - 1 - q) >= m * (q + 2)}
    if claim is not None:
        checks["claim"] = lhs < claim
    verdict = compare(Quantity.of(lhs), Quantity.of(rhs), "<") if all(hyps.values()) else "hypothesis-fails"
    data = {"p": p, "m": m, "q": q}
    if claim is not None:
        data["claim_bound"] = str(claim)
    return ConditionReport("lemma4", "<", Quantity.of(lhs), Quantity.of(rhs), hyps, verdict, checks, (), data)


def proposition1_check(g: RealVector, q: int, rel_tol: float = PROP1_TOL) -> ConditionReport:
    h = prop1_hypothesis(g, q)
    lhs = math.fsum(m_real_all(g)[: q + 1])
    eps = h.total / g.s
    rhs = binomial_profile_sum(g.s, q, eps, g.r)
    hyps = {"p_r+1<=q": h.p_r + 1 <= q, "sum_bound": h.total >= h.required}
    if not all(hyps.values()):
        verdict = "hypothesis-fails"
    else:
        verdict = "holds" if lhs <= rhs * (1 + rel_tol) else "fails"
    return ConditionReport(
        "proposition1", "<=", Quantity(Fraction(lhs), Fraction(lhs)), Quantity(Fraction(rhs), Fraction(rhs)), hyps,
        verdict, {}, (f"relative tolerance {rel_tol:g}",), {"epsilon": eps, "q": q, "p_r": h.p_r, "t": h.t},
    )


# main theorem


@dataclass(frozen=True)
class TheoremReport:
    r: int
    c: int
    q: int
    alpha: Fraction
    beta: Fraction
    mu: int
    delta: int
    delta_V_plus: int
    delta_V_minus: int
    deg1: bool
    deg2: bool
    deg1_bound: Fraction
    deg2_bound: int
    omega: int
    lhs: Fraction
    rhs: Fraction | None
    verdict: str

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "c": self.c,
            "threshold": self.q,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "mu": self.mu,
            "delta": self.delta,
            "delta_V_plus": self.delta_V_plus,
            "delta_V_minus": self.delta_V_minus,
            "hypotheses": {"deg1": self.deg1, "deg2": self.deg2},
            "deg1_bound": str(self.deg1_bound),
            "deg2_bound": self.deg2_bound,
            "omega": str(self.omega),
            "lhs": Quantity.of(self.lhs).to_json(),
            "rhs": None if self.rhs is None else Quantity.of(self.rhs).to_json(),
            "verdict": self.verdict,
        }


def theorem_rhs(r: int, c: int, alpha: Fraction, beta: Fraction, q: int | None = None) -> Fraction:
    q = threshold_for(c) if q is None else q
    return (
        math.comb(c - 1, q)
        * Fraction(3 * c - 2, 2 * c - 4)
        * (alpha / beta) ** q
        * Fraction(r, 2) ** (c - 1)
        * (alpha ** (c - 1) + beta ** (c - 1))
    )


def theorem_check(inst: MptInstance, threshold: str = "floor") -> TheoremReport:
    """Evaluate the main sufficient condition; ``threshold`` picks the rounding
    of ``(c-2)/4`` used for T and the binomial factor."""
    r, c = inst.r, inst.c
    q = threshold_for(c, threshold)
    irr = irregularity(inst)
    counts = omega_exact(inst, q)
    lhs = Fraction(counts.t_sum, r * c)
    assert lhs == Fraction(counts.omega, partitions_per_transversal(r, c) * r * c)
    b1 = degree_bound_1(r, c)
    b2 = degree_bound_2(inst, q)
    deg1, deg2 = irr.delta >= b1, irr.delta >= b2
    rhs = theorem_rhs(r, c, irr.alpha, irr.beta, q) if irr.beta > 0 and c > 2 else None
    if c < 10:
        verdict = "out-of-scope"
    elif deg1 and deg2 and rhs is not None and lhs >= rhs:
        verdict = "guaranteed"
    else:
        verdict = "inconclusive"
    return TheoremReport(
        r, c, q, irr.alpha, irr.beta, irr.mu, irr.delta, irr.delta_V_plus, irr.delta_V_minus,
        deg1, deg2, b1, b2, counts.omega, lhs, rhs, verdict,
    )


# corollaries (irrational constants -> intervals)


def _rho():
    return iv.mpf(2) / iv.sqrt(iv.sqrt(iv.mpf(27)))  # 2 / 3^(3/4)


def _ivfrac(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def corollary1_rhs(c: int, alpha: Fraction, beta: Fraction, prec: int = DEFAULT_PREC) -> Quantity:
    q = threshold_for(c)
    with _ivprec(prec):
        val = (
            iv.sqrt(iv.mpf(c))
            * iv.mpf(9) / iv.mpf(7)
            * _rho() ** (c - 1)
            * _ivfrac((alpha / beta) ** q * (alpha ** (c - 1) + beta ** (c - 1)))
        )
        return Quantity.from_iv(val)


def corollary1_check(inst: MptInstance, prec: int = DEFAULT_PREC) -> ConditionReport:
    r, c = inst.r, inst.c
    irr = irregularity(inst)
    hyps = {
        "c>=10": c >= 10,
        "deg1": irr.delta >= degree_bound_1(r, c),
        "deg2": irr.delta >= degree_bound_2(inst),
    }
    lhs = Quantity.of(Fraction(1, r))
    if irr.beta == 0:
        verdict = "out-of-scope" if c < 10 else "inconclusive"
        return ConditionReport("corollary1", ">=", lhs, None, hyps, verdict, {}, ("beta = 0: bound undefined",))
    rhs = corollary1_rhs(c, irr.alpha, irr.beta, prec)
    side = compare(lhs, rhs, ">=")
    if c < 10:
        verdict = "out-of-scope"
    elif not (hyps["deg1"] and hyps["deg2"]):
        verdict = "inconclusive"
    else:
        verdict = {"holds": "guaranteed", "fails": "inconclusive", "borderline": "borderline"}[side]
    return ConditionReport("corollary1", ">=", lhs, rhs, hyps, verdict, {"inequality": side == "holds"},
                           (), {"inequality": side})


@lru_cache(maxsize=None)
def corollary2_rhs(c: int, prec: int = DEFAULT_PREC) -> Quantity:
    """Enclosure of ``sqrt(c) (18/7) (2/3^(3/4))^(c-1)``."""
    with _ivprec(prec):
        return Quantity.from_iv(iv.sqrt(iv.mpf(c)) * iv.mpf(18) / iv.mpf(7) * _rho() ** (c - 1))


@lru_cache(maxsize=None)
def _decreasing_from(prec: int) -> int:
    """Smallest ``c0 >= 10`` with ``(1 + 1/c0) * rho^2 < 1`` certified; then
    ``RHS(c+1)/RHS(c) = sqrt(1+1/c) * rho < 1`` for every ``c >= c0``."""
    c0 = 10
    with _ivprec(prec):
        rho2 = _rho() ** 2
        while not ((1 + iv.mpf(1) / c0) * rho2 < 1):
            c0 += 1
    return c0


def corollary2_check(r: int, c: int, prec: int = DEFAULT_PREC) -> str:
    return compare(Quantity.of(Fraction(1, r)), corollary2_rhs(c, prec), ">=")


def corollary2_threshold(r: int, prec: int = DEFAULT_PREC, max_c: int = 100_000) -> int:
    """Least ``c >= 10`` from which the regular-case inequality holds for all larger c."""
    if r < 1:
        raise ValueError("r must be positive")
    c0 = _decreasing_from(prec)
    best = None
    for c in range(10, max_c):
        v = corollary2_check(r, c, prec)
        if v == "borderline":
            raise ArithmeticError(f"undecided comparison at r={r}, c={c}; raise the precision")
        if v == "holds":
            if best is None:
                best = c
            if c >= c0:
                return best
        else:
            best = None
    raise ArithmeticError(f"no threshold below {max_c}")


def c_table(rs: Iterable[int] = TABLE_R, prec: int = DEFAULT_PREC) -> list[dict]:
    rows = []
    for r in rs:
        cr = corollary2_threshold(r, prec)
        rows.append(
            {
                "r": r,
                "C": cr,
                "rhs_at_C": corollary2_rhs(cr, prec),
                "rhs_before": corollary2_rhs(cr - 1, prec) if cr > 10 else None,
                "verdict_at_C": corollary2_check(r, cr, prec),
                "verdict_before": corollary2_check(r, cr - 1, prec) if cr > 10 else None,
                "published": PUBLISHED_CR.get(r),
            }
        )
    return rows


def pc_rhs(c: int, prec: int = DEFAULT_PREC) -> Quantity:
    """Enclosure of ``(9 / (7 sqrt c)) (4/3^(3/4))^(c-1) (2c-4)/(3c-2)``."""
    with _ivprec(prec):
        val = (
            iv.mpf(9) / (iv.mpf(7) * iv.sqrt(iv.mpf(c)))
            * (2 * _rho()) ** (c - 1)
            * iv.mpf(2 * c - 4) / iv.mpf(3 * c - 2)
        )
        return Quantity.from_iv(val)


def pc_bound_check(c: int, prec: int = DEFAULT_PREC) -> ConditionReport:
    q = threshold_for(c)
    lhs = Quantity.of(math.comb(c - 1, q))
    rhs = pc_rhs(c, prec)
    notes = []
    data = {"rhs_approx": f"{rhs.mid:.2f}"}
    if c in PUBLISHED_PC:
        pub = float(PUBLISHED_PC[c])
        rel = abs(rhs.mid - pub) / pub
        data["published"] = PUBLISHED_PC[c]
        data["relative_difference"] = rel
        data["discrepancy"] = rel > 0.005
        if rel > 0.005:
            notes.append(f"reference value {PUBLISHED_PC[c]} differs from computed {rhs.mid:.2f}")
    return ConditionReport(f"p({c})", "<=", lhs, rhs, {"c>=10": c >= 10},
                           compare(lhs, rhs, "<=") if c >= 10 else "hypothesis-fails", {}, tuple(notes), data)


def pc_table(cs: Iterable[int] = (10, 11, 12, 13), prec: int = DEFAULT_PREC) -> list[ConditionReport]:
    return [pc_bound_check(c, prec) for c in cs]


def f_value(c, prec: int = DEFAULT_PREC) -> Quantity:
    """Enclosure of ``f(c) = 3c(3c+3)(2c-4) / ((3c+13)(3c+5)(3c-2) sqrt c) - (2c+4) / ((3c+10) sqrt(c+4))``."""
    with _ivprec(prec):
        return Quantity.from_iv(_f_iv(_ivfrac(Fraction(c))))


def _f_iv(x):
    a = 3 * x * (3 * x + 3) * (2 * x - 4) / ((3 * x + 13) * (3 * x + 5) * (3 * x - 2)) / iv.sqrt(x)
    b = (2 * x + 4) / (3 * x + 10) / iv.sqrt(x + 4)
    return a - b


def f_sign_scan(c_lo: int, c_hi: int, samples: int | None = None, prec: int = DEFAULT_PREC) -> ConditionReport:
    """Certify ``f < 0`` on a grid: every integer in ``[c_lo, c_hi]`` when
    ``samples`` is None, else ``samples`` evenly spaced rational points."""
    if not (10 <= c_lo < c_hi):
        raise ValueError("need 10 <= c_lo < c_hi")
    if samples is None:
        grid = [Fraction(c) for c in range(c_lo, c_hi + 1)]
    else:
        if samples < 2:
            raise ValueError("samples must be >= 2")
        grid = [Fraction(c_lo) + Fraction(c_hi - c_lo) * k / (samples - 1) for k in range(samples)]
    worst_hi = None
    worst = None
    uncertified = 0
    trail = []
    step = max(1, len(grid) // 8)
    with _ivprec(prec):
        for i, x in enumerate(grid):
            qv = Quantity.from_iv(_f_iv(_ivfrac(x)))
            if qv.hi >= 0:
                uncertified += 1
            if worst_hi is None or qv.hi > worst_hi:
                worst_hi, worst = qv.hi, (x, qv)
            if i % step == 0 or i == len(grid) - 1:
                trail.append({"c": str(x), "upper": _decimal(qv.hi, 12, True)})
    verdict = "all negative" if uncertified == 0 else "not certified"
    x, qv = worst
    return ConditionReport(
        "f_sign_scan", "<", qv, Quantity.of(0), {"c>=10": True}, verdict, {},
        (), {"points": len(grid), "uncertified": uncertified, "argmax": str(x), "trail": trail},
    )
