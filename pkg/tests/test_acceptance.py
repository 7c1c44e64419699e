"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
repeated at the end of the session.
"""

from __future__ import annotations

import functools
import math
import sys
import time

import numpy as np
import pytest

from oracles import random_tournament, spectrum_brute, tournament_from_bits
from tourpart.bounds import (
    PUBLISHED_CR,
    PUBLISHED_PC,
    c_table,
    corollary1_check,
    corollary2_threshold,
    f_sign_scan,
    lemma3_check,
    pc_bound_check,
    proposition1_check,
    theorem_check,
)
from tourpart.counting import (
    RealVector,
    m_real_all,
    omega_exact,
    outdegree_spectrum,
    prop1_hypothesis,
    smooth_extremes,
    smoothing_condition,
)
from tourpart.gen import gen_dominant, gen_near_regular, gen_random, gen_regular
from tourpart.mpt import Tournament
from tourpart.partitions import (
    count_partitions,
    enumerate_slots,
    find_strong_partition_exhaustive,
    omega_exhaustive,
    scan,
)
from tourpart.strong import strong_report

RESULTS: list[str] = []


def criterion(number: int, title: str, limit: float):
    """Record PASS/FAIL for the wrapped check, including its time limit."""

    def deco(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as e:
                line = f"[{number:2d}] FAIL  {title}: {type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''}"
                RESULTS.append(line)
                print(line)
                raise
            took = time.perf_counter() - t0
            ok = took < limit
            line = f"[{number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail} ({took:.1f}s, limit {limit:g}s)"
            RESULTS.append(line)
            print(line)
            assert ok, f"criterion {number} exceeded its time limit: {took:.1f}s >= {limit}s"

        return run

    return deco


def small_shapes(limit: int, r1_max_c: int):
    """All (r, c) with c >= 2 and (r!)^(c-1) <= limit; r = 1 is capped at r1_max_c."""
    out = [(1, c) for c in range(2, r1_max_c + 1)]
    r = 2
    while math.factorial(r) <= limit:
        c = 2
        while count_partitions(r, c) <= limit:
            out.append((r, c))
            c += 1
        r += 1
    return out


@criterion(1, "partition count (r!)^(c-1), distinct canonical partitions", 60)
def test_c01_partition_count():
    shapes = small_shapes(10**6, 30)
    total = 0
    for r, c in shapes:
        want = count_partitions(r, c)
        table = enumerate_slots(r, c)
        assert table.shape[0] == want
        if c > 1 and r > 1:
            # each part's slot assignment must be a permutation of 0..r-1
            per_part = np.sort(table.reshape(want, c - 1, r), axis=2)
            assert (per_part == np.arange(r, dtype=np.int8)).all(), (r, c)
            keys = np.ascontiguousarray(table).view(np.dtype((np.void, table.shape[1])))
            assert len(np.unique(keys)) == want, (r, c)
        total += want
    return f"{len(shapes)} shapes, {total} partitions, all distinct and valid"


@criterion(2, "out-degree spectrum equals brute-force transversal counts", 60)
def test_c02_spectrum_oracle():
    rng = np.random.default_rng(2)
    vertices = 0
    for seed in range(200):
        r, c = int(rng.integers(1, 4)), int(rng.integers(2, 7))
        inst = gen_random(r, c, seed)
        for x in range(inst.n):
            for d in "+-":
                assert list(outdegree_spectrum(inst, x, d).m) == spectrum_brute(inst, x, d), (seed, x, d)
            vertices += 1
    return f"200 instances, {vertices} vertices, both directions exact"


@criterion(3, "sum of F+ and F- equals exhaustive omega", 120)
def test_c03_omega_identity():
    shapes = [s for s in small_shapes(10**4, 12)]
    for i in range(100):
        r, c = shapes[i % len(shapes)]
        inst = gen_random(r, c, 1000 + i) if i % 3 else gen_near_regular(r, c, i)
        rep = omega_exact(inst)
        assert sum(rep.f_plus) + sum(rep.f_minus) == rep.omega == omega_exhaustive(inst), (r, c, i)
    return f"100 instances over {len(shapes)} shapes, exact equality"


@criterion(4, "non-strong tournaments have min semidegree <= floor((n-2)/4)", 60)
def test_c04_non_strong_degree_bound():
    non_strong = 0
    for bits in range(2**10):
        rep = strong_report(Tournament(tournament_from_bits(5, bits)))
        if not rep.is_strong:
            non_strong += 1
            assert rep.min_semidegree <= 0
    rng = np.random.default_rng(4)
    sampled = 0
    for i in range(100_000):
        n = 2 + i % 15
        rep = strong_report(Tournament(random_tournament(n, rng)))
        if not rep.is_strong:
            non_strong += 1
            assert rep.min_semidegree <= (n - 2) // 4, n
        sampled += 1
    return f"1024 order-5 + {sampled} random (n<=16); {non_strong} non-strong, 0 violations"


@criterion(5, "T+ bound on hypothesis-satisfying instances (exact)", 120)
def test_c05_lemma3():
    rng = np.random.default_rng(5)
    kept = vertices = 0
    for seed in range(1000):
        r, c = int(rng.integers(1, 4)), int(rng.integers(2, 9))
        kind = seed % 3
        if kind == 1 and r * (c - 1) % 2 == 0:
            inst = gen_regular(r, c, seed)
        elif kind == 2:
            inst = gen_near_regular(r, c, seed)
        else:
            inst = gen_random(r, c, seed)
        first = lemma3_check(inst, 0)
        if first.verdict == "hypothesis-fails":
            continue
        kept += 1
        for x in range(inst.n):
            for d in "+-":
                rep = lemma3_check(inst, x, d)
                assert rep.lhs.exact and rep.rhs.exact
                assert rep.lhs.lo <= rep.rhs.lo, (seed, x, d)
                vertices += 1
    assert kept > 0
    return f"{kept}/1000 instances satisfy the hypothesis; {vertices} vertex checks, 0 violations"


@criterion(6, "smoothing campaign: monotonicity and final inequality", 60)
def test_c06_proposition1():
    rng = np.random.default_rng(6)
    tol = 1e-9
    samples = smooth_checks = 0
    while samples < 10_000:
        s = int(rng.integers(4, 17))
        r = float(rng.integers(1, 9))
        q = int(rng.integers(1, max(2, s // 2)))
        g = rng.uniform(0, r, s)
        g[rng.random(s) < 0.08] = r
        g[rng.random(s) < 0.05] = 0.0
        g = RealVector(tuple(g), r)
        if not prop1_hypothesis(g, q).holds:
            continue
        samples += 1
        rep = proposition1_check(g, q, tol)
        assert rep.verdict == "holds", (g, q)
        if smoothing_condition(g, q):
            before = math.fsum(m_real_all(g)[: q + 1])
            after = math.fsum(m_real_all(smooth_extremes(g))[: q + 1])
            assert before <= after * (1 + tol), (g, q)
            smooth_checks += 1
    return f"10000 valid samples, {smooth_checks} smoothing checks, 0 violations (rel tol 1e-9)"


@criterion(7, "C(r) table reproduced with certified comparisons", 1)
def test_c07_c_table():
    rows = c_table(prec=160)
    got = {row["r"]: row["C"] for row in rows}
    assert got == PUBLISHED_CR, got
    for row in rows:
        assert row["verdict_at_C"] == "holds" and row["verdict_before"] == "fails", row
        assert corollary2_threshold(row["r"]) == row["C"]
    return "{" + ", ".join(f"{r}->{c}" for r, c in got.items()) + "}, no borderline"


@criterion(8, "p(c) base cases within 0.5%, c=12 discrepancy flagged", 1)
def test_c08_pc_table():
    parts = []
    for c in (10, 11, 13):
        rep = pc_bound_check(c)
        pub = float(PUBLISHED_PC[c])
        assert abs(rep.rhs.mid - pub) / pub <= 0.005, (c, rep.rhs.mid)
        assert rep.verdict == "holds"
        parts.append(f"c={c}: {rep.rhs.mid:.2f}")
    c12 = pc_bound_check(12)
    assert abs(c12.rhs.mid - 106.05) < 0.005
    assert c12.data["discrepancy"] and c12.notes
    parts.append(f"c=12: {c12.rhs.mid:.2f} (printed 105.05, flagged)")
    return "; ".join(parts)


@criterion(9, "f(c) < 0 certified on c = 10..10^4", 5)
def test_c09_f_scan():
    rep = f_sign_scan(10, 10_000)
    assert rep.verdict == "all negative" and rep.data["points"] == 9991
    assert rep.lhs.hi < 0
    return f"9991 points, max upper bound {float(rep.lhs.hi):.3e} at c={rep.data['argmax']}"


@criterion(10, "soundness: 'guaranteed' implies an exhaustive strong partition", 600)
def test_c10_soundness():
    guaranteed = cor_guaranteed = 0
    for i in range(100):
        c = (10, 11, 12)[i % 3]
        kind = i % 4
        if kind == 0:
            inst = gen_regular(2, c, i)
        elif kind == 1:
            inst = gen_near_regular(2, c, i)
        else:
            inst = gen_random(2, c, i)
        thm = theorem_check(inst)
        cor = corollary1_check(inst)
        if thm.verdict == "guaranteed":
            guaranteed += 1
            assert find_strong_partition_exhaustive(inst).status == "found", i
        if cor.verdict == "guaranteed":
            cor_guaranteed += 1
            assert find_strong_partition_exhaustive(inst).status == "found", i
    return (f"100 instances; theorem guaranteed {guaranteed}, corollary guaranteed {cor_guaranteed}; "
            "tripwire never fired")


@criterion(11, "dominant fixtures: no strong partition, omega >= (r!)^(c-1)", 120)
def test_c11_dominant():
    shapes = small_shapes(10**5, 12)
    for r, c in shapes:
        for seed in range(2):
            inst = gen_dominant(r, c, seed)
            res = find_strong_partition_exhaustive(inst)
            total = count_partitions(r, c)
            assert res.status == "none" and res.visited == total, (r, c, seed)
            assert omega_exact(inst).omega >= total, (r, c, seed)
    return f"{2 * len(shapes)} fixtures over {len(shapes)} shapes certified"


@criterion(12, "full 2^25 scan of regular (2,26), deterministic across thread counts", 600)
def test_c12_performance():
    inst = gen_regular(2, 26, 0)
    t0 = time.perf_counter()
    one = scan(inst, threads=1)
    t1 = time.perf_counter()
    two = scan(inst, threads=2)
    t2 = time.perf_counter()
    assert one == two
    assert one.visited == 2**25
    assert one.omega_sum == omega_exact(inst).omega
    if corollary1_check(inst).verdict == "guaranteed":
        assert one.strong_partitions > 0
    return (f"visited {one.visited}, strong {one.strong_partitions}, omega {one.omega_sum}; "
            f"1 thread {t1 - t0:.1f}s, 2 threads {t2 - t1:.1f}s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
