# coding=utf-8
from polytree_qe.inference import propagate, brute_force_posteriors, PosteriorVector
from polytree_qe.network import BayesNet, read_network

from tests.helpers import true_network, random_polytree

import time
import pytest
import numpy as np


def test_propagate_against_enumeration():
    """Test that propagate matches joint enumeration on random polytrees."""
    rng = np.random.default_rng(10)
    start = time.time()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 13))
        net = random_polytree(rng, n)
        size = int(rng.integers(0, min(n, 4) + 1))
        evidence = rng.choice(n, size=size, replace=False).tolist()
        fast = propagate(net, evidence).values
        slow = brute_force_posteriors(net, evidence).values
        worst = max(worst, max(abs(a - b) for a, b in zip(fast, slow)))
    assert worst <= 1e-9
    assert time.time() - start < 10


def test_propagate_forest():
    """Test propagation on a network of several components."""
    rng = np.random.default_rng(11)
    left, right = random_polytree(rng, 5), random_polytree(rng, 4)
    parents = {c: list(left.parents(c)) for c in range(5) if not left.is_root(c)}
    parents.update({c + 5: [p + 5 for p in right.parents(c)]
                    for c in range(4) if not right.is_root(c)})
    priors = {n: left.prior(n) for n in range(5) if left.is_root(n)}
    priors.update({n + 5: right.prior(n) for n in range(4) if right.is_root(n)})
    cpts = {c: left.cpt(c) for c in range(5) if not left.is_root(c)}
    cpts.update({c + 5: right.cpt(c) for c in range(4) if not right.is_root(c)})
    net = BayesNet(['n{}'.format(i) for i in range(9)], parents, priors, cpts)
    assert len(net.components()) == 2

    posteriors = propagate(net, [1, 7])
    expected = brute_force_posteriors(net, [1, 7])
    assert np.allclose(posteriors.values, expected.values, atol=1e-9, rtol=0)

    # evidence in one component leaves the other one at its marginals
    only_left = propagate(net, [1])
    assert only_left.values[5:] == net.prior_marginals()[5:]


def test_propagate_no_evidence():
    """Test that no evidence gives the prior marginals."""
    net = true_network()
    posteriors = propagate(net)
    expected = brute_force_posteriors(net)
    assert np.allclose(posteriors.values, expected.values, atol=1e-12, rtol=0)
    assert posteriors[0] == pytest.approx(0.3, abs=1e-12)
    assert posteriors[1] == pytest.approx(0.4, abs=1e-12)


def test_propagate_instantiation():
    """Test that evidence nodes have a posterior of exactly 1."""
    net = true_network()
    posteriors = propagate(net, [2, 6])
    assert posteriors[2] == 1.0
    assert posteriors[6] == 1.0
    assert posteriors.evidence == frozenset([2, 6])
    assert all(0 <= p <= 1 for p in posteriors)


def test_chain_bayes_rule():
    """Test the chain a -> b with evidence on b against Bayes rule."""
    net = read_network('./tests/assets/chain.net')
    posteriors = propagate(net, [1])
    assert posteriors[0] == pytest.approx(0.9 * 0.5 / (0.9 * 0.5 + 0.1 * 0.5), abs=1e-12)
    assert posteriors[2] == pytest.approx(0.3, abs=1e-12)
    assert brute_force_posteriors(net, [1])[0] == pytest.approx(0.9, abs=1e-12)


def test_head_to_head_explaining_away():
    """Test that the parents of an observed collider become dependent."""
    net = true_network()
    given_c = propagate(net, [2])
    given_cb = propagate(net, [2, 1])
    assert abs(given_c[0] - given_cb[0]) > 0.01
    # without evidence on c the parents are independent
    assert propagate(net, [1])[0] == pytest.approx(0.3, abs=1e-12)


def test_propagate_deterministic():
    """Test that the same network and evidence give the same posteriors."""
    net = true_network()
    assert propagate(net, [3, 0]).values == propagate(net, [0, 3]).values


def test_propagate_unknown_node():
    """Test that evidence outside the network is rejected."""
    with pytest.raises(ValueError):
        propagate(true_network(), [7])


def test_brute_force_limits():
    """Test the single root and the size guard of brute_force_posteriors."""
    single = BayesNet(['a'], {}, {0: 0.3})
    assert brute_force_posteriors(single)[0] == pytest.approx(0.3)
    big = BayesNet(['t{}'.format(i) for i in range(26)], {},
                   {i: 0.5 for i in range(26)})
    with pytest.raises(ValueError):
        brute_force_posteriors(big)


def test_posterior_vector():
    """Test the PosteriorVector class."""
    vector = PosteriorVector([0.2, 1.0, 0.9, 0.9, 0.95], [1])
    assert vector.above(0.5) == [4, 2, 3]
    assert vector.above(0.9) == [4]
    assert len(vector) == 5
    net = BayesNet(['a', 'b', 'c', 'd', 'e'], {}, {i: 0.5 for i in range(5)})
    assert vector.to_lines(net)[0] == 'a\t0.2'
