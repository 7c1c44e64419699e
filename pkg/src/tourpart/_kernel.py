"""Compiled inner loops for partition enumeration.

The odometer walks the mixed-radix index: part ``c-1`` is the least
significant digit, each digit is the lexicographic rank of that part's
permutation, so advancing the index by one is ``next_permutation`` on the
last part with carries to the left.  Member scores are updated in place,
only touched tournaments are re-checked.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def next_permutation(p):
    """Lexicographic successor in place; on the last permutation resets to
    the identity and returns False."""
    n = p.shape[0]
    i = n - 2
    while i >= 0 and p[i] >= p[i + 1]:
        i -= 1
    if i < 0:
        p[:] = p[::-1].copy()
        return False
    j = n - 1
    while p[j] <= p[i]:
        j -= 1
    p[i], p[j] = p[j], p[i]
    p[i + 1:] = p[i + 1:][::-1].copy()
    return True


@njit(cache=True)
def advance(perms):
    """Advance the odometer; returns the lowest part index whose permutation
    changed (parts ``k..c-1`` changed), or 0 on wrap-around."""
    c = perms.shape[0]
    j = c - 1
    while j >= 1:
        if next_permutation(perms[j]):
            return j
        j -= 1
    return 0


@njit(cache=True)
def strong_from_scores(scores, n, cnt):
    """Score-sequence test: strong iff no proper prefix of sorted scores sums to C(k,2)."""
    for s in range(n):
        cnt[s] = 0
    for v in range(n):
        cnt[scores[v]] += 1
    acc = 0
    k = 0
    for s in range(n):
        m = cnt[s]
        for _ in range(m):
            k += 1
            acc += s
            if k < n and acc == k * (k - 1) // 2:
                return False
    return True


@njit(cache=True)
def _member_stats(t, scores, c, threshold, cnt):
    row = scores[t]
    d = 0
    for j in range(c):
        s = row[j]
        o = c - 1 - s
        if (s if s < o else o) <= threshold:
            d += 1
    return strong_from_scores(row, c, cnt), d


@njit(cache=True)
def _init_state(adj, perms, r, c, members, scores):
    for t in range(r):
        for j in range(c):
            members[t, j] = j * r + perms[j, t]
    for t in range(r):
        for j in range(c):
            u = members[t, j]
            s = 0
            for k in range(c):
                s += adj[u, members[t, k]]
            scores[t, j] = s


@njit(cache=True)
def scan(adj, perms, r, c, count, threshold, stop_at_strong):
    """Visit ``count`` partitions starting at the state ``perms`` (mutated).

    Returns (visited, omega_sum, strong_partitions, first_strong_offset,
    min_omega, max_omega, strong_members).  ``first_strong_offset`` is -1
    if no strong partition was seen.
    """
    members = np.empty((r, c), dtype=np.int64)
    scores = np.empty((r, c), dtype=np.int64)
    cnt = np.empty(c, dtype=np.int64)
    strong = np.empty(r, dtype=np.bool_)
    defi = np.empty(r, dtype=np.int64)
    dirty = np.zeros(r, dtype=np.bool_)
    _init_state(adj, perms, r, c, members, scores)
    omega = 0
    n_strong = 0
    for t in range(r):
        st, d = _member_stats(t, scores, c, threshold, cnt)
        strong[t] = st
        defi[t] = d
        omega += d
        n_strong += st

    visited = 0
    omega_sum = 0
    strong_parts = 0
    first = -1
    min_om = 1 << 62
    max_om = -1
    strong_members = 0
    while visited < count:
        omega_sum += omega
        strong_members += n_strong
        if omega < min_om:
            min_om = omega
        if omega > max_om:
            max_om = omega
        if n_strong == r:
            strong_parts += 1
            if first < 0:
                first = visited
        visited += 1
        if visited == count or (stop_at_strong and first >= 0):
            break
        lowest = advance(perms)
        for j in range(lowest, c):
            for t in range(r):
                v_new = j * r + perms[j, t]
                v_old = members[t, j]
                if v_new == v_old:
                    continue
                s = 0
                for k in range(c):
                    if k == j:
                        continue
                    w = members[t, k]
                    scores[t, k] += np.int64(adj[w, v_new]) - np.int64(adj[w, v_old])
                    s += adj[v_new, w]
                scores[t, j] = s
                members[t, j] = v_new
                dirty[t] = True
        for t in range(r):
            if dirty[t]:
                dirty[t] = False
                st, d = _member_stats(t, scores, c, threshold, cnt)
                omega += d - defi[t]
                n_strong += np.int64(st) - np.int64(strong[t])
                strong[t] = st
                defi[t] = d
    return visited, omega_sum, strong_parts, first, min_om, max_om, strong_members


@njit(cache=True)
def slots(perms, r, c, count):
    """Membership table for ``count`` consecutive partitions: row ``i``,
    column ``(j-1)*r + a`` is the tournament holding vertex ``j*r + a``."""
    out = np.empty((count, (c - 1) * r), dtype=np.int8)
    for i in range(count):
        if i:
            advance(perms)
        for j in range(1, c):
            for t in range(r):
                out[i, (j - 1) * r + perms[j, t]] = t
    return out
