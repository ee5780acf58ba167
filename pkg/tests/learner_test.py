# coding=utf-8
from polytree_qe.learner import orient_edges, estimate_parameters, learn
from polytree_qe.skeleton import Skeleton
from polytree_qe.index import Vocabulary

from tests.helpers import true_network, sample_presence, inverted_from_presence, \
    TRUE_EDGES, TRUE_TERMS

import logging
import itertools
import pytest
import numpy as np


def _head_to_head(edges):
    parent_count = {}
    for _, child in edges:
        parent_count[child] = parent_count.get(child, 0) + 1
    return sorted(c for c, count in parent_count.items() if count > 1)


def test_learn_structure_recovery():
    """Test that learn recovers the skeleton and the head to head of a known polytree."""
    truth = true_network()
    recovered = 0
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        inv = inverted_from_presence(sample_presence(rng, truth, 20000))
        net = learn(inv, 0.95, Vocabulary(TRUE_TERMS))
        skeleton = sorted((min(u, v), max(u, v)) for u, v in net.edges)
        assert skeleton == sorted(TRUE_EDGES)
        assert _head_to_head(net.edges) in ([], [2])
        if net.edges == sorted(TRUE_EDGES):
            recovered += 1
    assert recovered >= 19


def test_orient_edges_chain():
    """Test that a chain is directed away from its smallest node without colliders."""
    rng = np.random.default_rng(7)
    presence = np.zeros((4, 5000), dtype=bool)
    presence[0] = rng.random(5000) < 0.4
    for node in range(1, 4):
        flip = rng.random(5000) < 0.1
        presence[node] = presence[node - 1] ^ flip
    inv = inverted_from_presence(presence)
    edges = orient_edges(Skeleton(4, [(0, 1), (1, 2), (2, 3)]), inv, 0.95)
    assert edges == [(0, 1), (1, 2), (2, 3)]


def test_orient_edges_collider():
    """Test that a head to head connection is found and propagated downstream."""
    rng = np.random.default_rng(8)
    n_docs = 10000
    presence = np.zeros((4, n_docs), dtype=bool)
    presence[0] = rng.random(n_docs) < 0.5
    presence[1] = rng.random(n_docs) < 0.5
    presence[2] = (presence[0] | presence[1]) ^ (rng.random(n_docs) < 0.05)
    presence[3] = presence[2] ^ (rng.random(n_docs) < 0.1)
    inv = inverted_from_presence(presence)
    edges = orient_edges(Skeleton(4, [(0, 2), (1, 2), (2, 3)]), inv, 0.95)
    assert edges == [(0, 2), (1, 2), (2, 3)]


def test_orient_edges_fragments():
    """Test that unconstrained fragments are directed away from their smallest node."""
    rng = np.random.default_rng(9)
    presence = np.zeros((5, 3000), dtype=bool)
    presence[0] = rng.random(3000) < 0.5
    presence[3] = presence[0] ^ (rng.random(3000) < 0.2)
    presence[1] = rng.random(3000) < 0.5
    presence[4] = presence[1] ^ (rng.random(3000) < 0.2)
    presence[2] = rng.random(3000) < 0.5
    inv = inverted_from_presence(presence)
    edges = orient_edges(Skeleton(5, [(0, 3), (4, 1)]), inv, 0.95)
    assert edges == [(0, 3), (1, 4)]


def test_estimate_parameters():
    """Test the estimate_parameters method against hand counts."""
    # documents:       1  2  3  4  5  6
    presence = np.array([
        [1, 1, 0, 0, 1, 0],  # a
        [1, 0, 1, 0, 0, 0],  # b
        [1, 1, 1, 0, 0, 1],  # c
    ], dtype=bool)
    inv = inverted_from_presence(presence)
    net = estimate_parameters([(0, 2), (1, 2)], inv, Vocabulary(['a', 'b', 'c']))
    assert net.prior(0) == pytest.approx((3 + 1) / 8.0)
    assert net.prior(1) == pytest.approx((2 + 1) / 8.0)
    # rows: a=0 b=0 -> docs 4, 6 (c in 6); a=0 b=1 -> doc 3 (c);
    # a=1 b=0 -> docs 2, 5 (c in 2); a=1 b=1 -> doc 1 (c)
    assert net.cpt(2) == pytest.approx(
        ((1 + 1) / 4.0, (1 + 1) / 3.0, (1 + 1) / 4.0, (1 + 1) / 3.0))
    assert net.terms == ('a', 'b', 'c')
    assert net.parents(2) == (0, 1)


def test_estimate_parameters_parent_cap():
    """Test that a node with too many parents is rejected."""
    presence = np.ones((4, 3), dtype=bool)
    inv = inverted_from_presence(presence)
    with pytest.raises(ValueError, match='Node 3'):
        estimate_parameters([(0, 3), (1, 3), (2, 3)], inv, max_parents=2)
    net = estimate_parameters([(0, 3), (1, 3), (2, 3)], inv, max_parents=3)
    assert len(net.cpt(3)) == 8
    assert net.terms == ('0', '1', '2', '3')


def test_learn_single_term():
    """Test that a one term vocabulary gives a one node network."""
    inv = inverted_from_presence(np.array([[1, 0, 1]], dtype=bool))
    net = learn(inv, 0.9)
    assert net.node_count == 1
    assert net.edges == []
    assert net.prior(0) == pytest.approx(3 / 5.0)
    assert net.confidence == 0.9


def test_learn_unsupported_confidence():
    """Test that unsupported confidence levels are rejected."""
    inv = inverted_from_presence(np.array([[1, 0, 1]], dtype=bool))
    with pytest.raises(ValueError):
        learn(inv, 0.8)


def _factorial_presence(bits, rows, repeats=25):
    """Get a presence matrix over every combination of independent bits.

    Args:
        bits: Number of independent bits.
        rows: A list of functions, one per node, mapping a bit tuple to presence.
        repeats: Number of documents per combination.
    """
    combos = list(itertools.product((0, 1), repeat=bits)) * repeats
    return np.array([[bool(row(c)) for c in combos] for row in rows], dtype=bool)


def test_orient_edges_conflict(caplog):
    """Test that the first direction of an edge stands when a later triplet contradicts it."""
    # bits (x, u): 1 = x xor u collides 0 and 2, then 2 = u collides 1 and 3
    presence = _factorial_presence(2, [
        lambda c: c[0],
        lambda c: c[0] ^ c[1],
        lambda c: c[1],
        lambda c: c[0]
    ])
    inv = inverted_from_presence(presence)
    with caplog.at_level(logging.WARNING, logger='polytree_qe.learner'):
        edges = orient_edges(Skeleton(4, [(0, 1), (1, 2), (2, 3)]), inv, 0.95)
    assert edges == [(0, 1), (2, 1), (3, 2)]
    conflicts = [r.getMessage() for r in caplog.records if 'conflict' in r.getMessage()]
    assert len(conflicts) == 1
    assert 'keeping 2 -> 1' in conflicts[0]


def test_orient_edges_forced(caplog):
    """Test that an edge between two nodes with parents runs from the lower id."""
    # bits (a, b, c, d): 1 = a xor b and 4 = c xor d are two head to head nodes
    presence = _factorial_presence(4, [
        lambda c: c[0],
        lambda c: c[0] ^ c[1],
        lambda c: c[1],
        lambda c: c[2],
        lambda c: c[2] ^ c[3],
        lambda c: c[3]
    ])
    inv = inverted_from_presence(presence)
    sk = Skeleton(6, [(0, 1), (1, 2), (1, 4), (3, 4), (4, 5)])
    with caplog.at_level(logging.WARNING, logger='polytree_qe.learner'):
        edges = orient_edges(sk, inv, 0.95)
    assert edges == [(0, 1), (1, 4), (2, 1), (3, 4), (5, 4)]
    forced = [r.getMessage() for r in caplog.records
              if 'both directions' in r.getMessage()]
    assert forced == ['Edge 1 - 4 is demanded in both directions; directing it 1 -> 4.']
    assert not any('conflict' in r.getMessage() for r in caplog.records)
