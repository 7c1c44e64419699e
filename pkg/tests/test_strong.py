import numpy as np
import pytest

from oracles import random_tournament, subset_strong, tournament_from_bits, warshall_strong
from tourpart.mpt import Tournament
from tourpart.strong import deficiency, is_strong, is_strong_scores, strong_report


def transitive(n):
    return Tournament(np.triu(np.ones((n, n), dtype=np.uint8), 1))


def test_cycle():
    rep = strong_report(Tournament.from_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
    assert rep.is_strong and rep.min_semidegree == 1 and rep.condensation_order == 1


def test_transitive_five():
    rep = strong_report(transitive(5))
    assert not rep.is_strong
    assert rep.min_semidegree == 0
    assert rep.condensation_order == 5
    assert rep.witness[0] == (0,)


def _check_witness(adj, rep):
    A, B = rep.witness
    assert A and B and sorted(A + B) == list(range(adj.shape[0]))
    assert adj[np.ix_(A, B)].all()


@pytest.mark.parametrize("n", range(1, 6))
def test_exhaustive_small(n):
    for bits in range(2 ** (n * (n - 1) // 2)):
        a = tournament_from_bits(n, bits)
        rep = strong_report(Tournament(a))
        assert rep.is_strong == subset_strong(a) == is_strong_scores(a.sum(axis=1))
        assert rep.is_strong == (rep.condensation_order == 1)
        if not rep.is_strong:
            _check_witness(a, rep)


def test_random_against_closure(rng):
    for _ in range(2000):
        n = int(rng.integers(2, 13))
        a = random_tournament(n, rng)
        rep = strong_report(Tournament(a))
        assert rep.is_strong == warshall_strong(a) == is_strong_scores(a.sum(axis=1))
        if not rep.is_strong:
            _check_witness(a, rep)


def test_non_strong_degree_bound(rng):
    for n in range(2, 8):
        bound = (n - 2) // 4
        for _ in range(3000):
            a = random_tournament(n, rng)
            rep = strong_report(Tournament(a))
            if not rep.is_strong:
                assert rep.min_semidegree <= bound


def test_deficiency():
    cyc = Tournament.from_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert deficiency(cyc, 0) == 0
    assert deficiency(transitive(3), 0) == 2


def test_deficiency_recount(rng):
    a = random_tournament(10, rng)
    t = Tournament(a)
    want = sum(1 for v in range(10) if min(a[v].sum(), a[:, v].sum()) <= 2)
    assert deficiency(t, 2) == want
    assert is_strong(t) == warshall_strong(a)
