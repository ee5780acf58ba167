# coding=utf-8
"""Synthetic networks and corpora shared by the tests."""
import numpy as np
import networkx as nx

from polytree_qe.index import InvertedFile, Vocabulary, Index
from polytree_qe.network import BayesNet

# a -> c <- b is a head to head connection, c -> d -> e and d -> f -> g are chains
TRUE_TERMS = ('a', 'b', 'c', 'd', 'e', 'f', 'g')
TRUE_EDGES = [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (5, 6)]


def true_network():
    """Get the 7 node polytree the structure recovery tests sample from."""
    parents = {2: [0, 1], 3: [2], 4: [3], 5: [3], 6: [5]}
    priors = {0: 0.3, 1: 0.4}
    cpts = {
        2: [0.05, 0.85, 0.85, 0.98],
        3: [0.1, 0.85],
        4: [0.1, 0.8],
        5: [0.15, 0.85],
        6: [0.1, 0.9]
    }
    return BayesNet(TRUE_TERMS, parents, priors, cpts)


def random_polytree(rng, n):
    """Get a BayesNet over n nodes with a random polytree and random tables.

    Node i is linked to a random earlier node in a random direction.
    """
    parents = {}
    for node in range(1, n):
        other = int(rng.integers(0, node))
        if rng.random() < 0.5:
            parents.setdefault(node, []).append(other)
        else:
            parents.setdefault(other, []).append(node)
    priors = {i: float(rng.uniform(0.05, 0.95)) for i in range(n) if i not in parents}
    cpts = {c: rng.uniform(0.05, 0.95, 2 ** len(p)).tolist() for c, p in parents.items()}
    return BayesNet(['t{}'.format(i) for i in range(n)], parents, priors, cpts)


def sample_presence(rng, net, n_docs):
    """Sample a (nodes x documents) boolean presence matrix from a BayesNet."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(net.node_count))
    graph.add_edges_from(net.edges)
    presence = np.zeros((net.node_count, n_docs), dtype=bool)
    for node in nx.topological_sort(graph):
        if net.is_root(node):
            p_true = np.full(n_docs, net.prior(node))
        else:
            parents = net.parents(node)
            rows = np.zeros(n_docs, dtype=np.int64)
            for j, parent in enumerate(parents):
                rows |= presence[parent].astype(np.int64) << (len(parents) - 1 - j)
            p_true = np.asarray(net.cpt(node))[rows]
        presence[node] = rng.random(n_docs) < p_true
    return presence


def inverted_from_presence(presence):
    """Get an InvertedFile with documents 1 to N from a presence matrix."""
    postings = [[(int(d) + 1, 1) for d in np.flatnonzero(row)] for row in presence]
    return InvertedFile(range(1, presence.shape[1] + 1), postings)


def index_from_presence(presence, terms):
    """Get an Index whose sorted vocabulary matches the order of the terms."""
    assert list(terms) == sorted(terms), 'Terms must be sorted.'
    return Index(Vocabulary(terms), inverted_from_presence(presence))
