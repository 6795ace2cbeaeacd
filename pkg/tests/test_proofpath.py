import itertools
import random

import pytest
from hypothesis import given, settings

from conftest import dags
from randdag.chain import ADDED, CONNECTED, DELETED, REVERSED, ChainConfig, MarkovChain, TransitionOutcome
from randdag.dag import Dag, is_connected
from randdag.exceptions import InputError
from randdag.oracle import build_matrix, enumerate_space, eccentricities, path_length_bound
from randdag.proofpath import (
    PathCertificate,
    build_path,
    cancel,
    dichain_to_hamiltonian,
    hamiltonian_dichain,
    is_dichain,
    is_tree,
    leaf_count,
    path_order,
    to_spanning_tree,
    tree_to_dichain,
    unrestricted_path,
)


def tournament(n, order=None):
    order = order or list(range(1, n + 1))
    return Dag(n, [(order[a], order[b]) for a in range(n) for b in range(a + 1, n)])


def replay_states(start, moves):
    return PathCertificate(start, start, moves).states()


def test_spanning_tree_examples():
    t = Dag(4, [(1, 2), (3, 2), (3, 4)])
    assert to_spanning_tree(t) == (t, [])
    tree, moves = to_spanning_tree(tournament(3))
    assert len(moves) == 1 and is_tree(tree)
    assert set(tree.arcs) < {(1, 2), (2, 3), (1, 3)}


@pytest.mark.parametrize("n", range(2, 10))
def test_tournament_needs_exactly_the_worst_case_deletions(n):
    tree, moves = to_spanning_tree(tournament(n))
    assert len(moves) == n * (n - 1) // 2 - (n - 1)
    assert all(mv.tag == DELETED for mv in moves)
    assert is_tree(tree)


def test_tree_to_dichain_examples():
    path = Dag(4, [(1, 2), (3, 2), (3, 4)])
    assert tree_to_dichain(path) == (path, [])
    star = Dag(4, [(1, 2), (1, 3), (1, 4)])
    chain, moves = tree_to_dichain(star)
    # u=2 is the smallest leaf, w=1, v=3; adding (3,2) keeps it acyclic
    assert moves == [TransitionOutcome(ADDED, (3, 2)), TransitionOutcome(DELETED, (1, 3))]
    assert is_dichain(chain)
    bent = Dag(3, [(2, 1), (2, 3)])
    assert tree_to_dichain(bent) == (bent, [])


@pytest.mark.parametrize("n", range(3, 10))
def test_star_takes_two_moves_per_extra_leaf(n):
    star = Dag(n, [(1, v) for v in range(2, n + 1)])
    chain, moves = tree_to_dichain(star)
    assert len(moves) == 2 * (n - 3)
    assert is_dichain(chain)


@settings(max_examples=150, deadline=None)
@given(dags(min_n=3, max_n=10, connected=True))
def test_leaf_elimination_is_monotone(g):
    tree, _ = to_spanning_tree(g)
    chain, moves = tree_to_dichain(tree)
    states = replay_states(tree, moves)
    leaves = [leaf_count(s) for s in states[::2]]
    assert all(b == a - 1 for a, b in zip(leaves, leaves[1:]))
    assert leaves[-1] == 2
    assert len(moves) <= 2 * max(0, (g.n - 1) - 2)


def test_dichain_examples():
    canon = hamiltonian_dichain([1, 2, 3, 4])
    assert dichain_to_hamiltonian(canon) == (canon, [])
    end, moves = dichain_to_hamiltonian(Dag(2, [(2, 1)]))
    assert end.arcs == [(1, 2)] and moves == [TransitionOutcome(REVERSED, (2, 1))]


def test_dichain_order_2134():
    # vertex order 2,1,3,4 along the path: 1 is relocated to an endpoint first
    c = Dag(4, [(2, 1), (1, 3), (3, 4)])
    end, moves = dichain_to_hamiltonian(c)
    assert end == hamiltonian_dichain([1, 2, 3, 4])
    states = replay_states(c, moves)
    assert states[-1] == end
    assert all(is_connected(s) for s in states)
    assert len(moves) <= 2 + 4 * (4 - 2) + (4 - 1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_every_dichain_reaches_canonical_within_budget(n):
    budget = 2 + 4 * (n - 2) + (n - 1)
    target = hamiltonian_dichain(range(1, n + 1))
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((0, 1), repeat=n - 1):
            arcs = [(perm[k], perm[k + 1]) if s else (perm[k + 1], perm[k]) for k, s in enumerate(signs)]
            c = Dag(n, arcs)
            end, moves = dichain_to_hamiltonian(c)
            assert end == target
            assert replay_states(c, moves)[-1] == target
            assert len(moves) <= budget


def test_path_order_reads_from_smaller_endpoint():
    assert path_order(Dag(4, [(4, 2), (2, 1), (3, 1)])) == [3, 1, 2, 4]


def test_build_path_examples():
    g = Dag(3, [(1, 2), (2, 3)])
    assert len(build_path(g, g)) == 0
    cert = build_path(Dag(2, [(1, 2)]), Dag(2, [(2, 1)]))
    assert cert.moves == [TransitionOutcome(REVERSED, (1, 2))]
    assert cert.to_text().splitlines()[1:] == ["REV 1 2"]


def test_build_path_rejects_non_members():
    with pytest.raises(InputError):
        build_path(Dag(3, [(1, 2)]), Dag(3, [(1, 2), (2, 3)]))
    with pytest.raises(InputError):
        build_path(Dag(2, [(1, 2)]), Dag(3, [(1, 2), (2, 3)]))


def test_n3_exhaustive_against_bfs_lower_bound():
    space = enumerate_space(ChainConfig(3, CONNECTED))
    m = build_matrix(space)
    from scipy.sparse import csgraph

    dist = csgraph.shortest_path(m.counts, unweighted=True)
    for x, g in enumerate(space.states):
        for y, h in enumerate(space.states):
            cert = build_path(g, h)
            assert cert.replay()
            assert dist[x, y] <= len(cert) <= path_length_bound(3)


@settings(max_examples=100, deadline=None)
@given(dags(min_n=2, max_n=12, connected=True), dags(min_n=2, max_n=12, connected=True))
def test_certificate_soundness_random(g, h):
    if g.n != h.n:
        h = Dag(g.n, [(i, i + 1) for i in range(1, g.n)])
    cert = build_path(g, h)
    cert.validate()
    assert len(cert) <= cert.bound
    back = cert.reversed()
    back.validate()
    assert back.start == h and back.end == g


@pytest.mark.parametrize("n", range(5, 13))
def test_tournament_pairs_stay_within_bound(n):
    rnd = random.Random(n)
    for _ in range(20):
        p, q = list(range(1, n + 1)), list(range(1, n + 1))
        rnd.shuffle(p)
        rnd.shuffle(q)
        cert = build_path(tournament(n, p), tournament(n, q))
        assert cert.replay()
        assert len(cert) <= path_length_bound(n)


def test_cancel_removes_back_and_forth():
    a = TransitionOutcome(ADDED, (1, 3))
    r = TransitionOutcome(REVERSED, (1, 2))
    moves = [r, a, TransitionOutcome(DELETED, (1, 3)), TransitionOutcome(REVERSED, (2, 1))]
    assert cancel(moves) == []


def test_text_roundtrip_and_tamper_detection():
    g = tournament(4)
    h = Dag(4, [(4, 1), (2, 1), (3, 2)])
    cert = build_path(g, h)
    again = PathCertificate.from_text(cert.to_text())
    assert again.start == g and again.end == h and again.moves == cert.moves
    assert again.replay()
    broken = PathCertificate(g, h, cert.moves[:-1])
    assert not broken.replay()
    with pytest.raises(InputError):
        PathCertificate.from_text("3 1>2,2>3\nADD 1 3\n")


def test_unrestricted_convenience_path():
    g, h = tournament(4), Dag(4, [(4, 3)])
    cert = unrestricted_path(g, h)
    cert.validate()
    assert len(cert) == 7


def test_certificates_never_beat_bfs_eccentricity_n4():
    space = enumerate_space(ChainConfig(4, CONNECTED))
    m = build_matrix(space)
    ecc = eccentricities(m, [0])
    worst = max(len(build_path(space.states[0], h)) for h in space.states)
    assert worst >= ecc[0]
