"""Learn a polytree thesaurus from an inverted file.

The learning runs in four stages:

1.  Build the maximum weight spanning forest of the Dep(a, b) weights, only
    adjoining pairs whose independence is rejected by a chi-square test with
    one degree of freedom.

2.  For every pair of skeleton edges a - c - b, direct them as a -> c <- b when
    Dep(a, b) < Dep(a, b | c) and a chi-square test with two degrees of freedom
    rejects the conditional independence of a and b given c.

3.  Direct the remaining edges without adding head to head connections.

4.  Estimate the priors of root nodes and the CPTs of all other nodes from the
    inverted file with add-one smoothing.
"""
import logging

try:
    import numpy as np
except ImportError as e:
    raise ImportError('Failed to import numpy.\n{}'.format(e))

try:
    import networkx as nx
except ImportError as e:
    raise ImportError('Failed to import networkx.\n{}'.format(e))

from .config import DEFAULT_MAX_PARENTS, validate_confidence
from .dependency import marginal_dep, conditional_dep, independence_test
from .index import pair_counts, triple_counts
from .network import BayesNet, config_row
from .skeleton import DependencyGraph, build_skeleton

_logger = logging.getLogger(__name__)


def _edge_key(u, v):
    return (u, v) if u < v else (v, u)


def _child(key, parent):
    return key[1] if key[0] == parent else key[0]


def orient_edges(sk, inv, confidence):
    """Turn a Skeleton into a set of directed (parent, child) edges.

    Triplets a - c - b are visited in ascending (c, min(a, b), max(a, b))
    order. When a triplet demands a direction that contradicts an edge that
    is already directed, the earlier direction stands and the conflict is
    logged. The remaining edges are directed away from nodes that already
    have a parent, and edges of fragments without any directed edge are
    directed away from the smallest node of the fragment.

    Args:
        sk: A Skeleton.
        inv: The InvertedFile the skeleton was learned from.
        confidence: Confidence level of the conditional independence test.

    Returns:
        A sorted list of (parent, child) tuples with one entry per skeleton edge.
    """
    validate_confidence(confidence)
    direction = {}  # (smaller id, larger id) -> parent id
    colliders, forced = set(), set()
    conflicts = 0
    for gamma in range(sk.n):
        neighbors = sk.neighbors(gamma)
        for i, alpha in enumerate(neighbors):
            for beta in neighbors[i + 1:]:
                marginal = marginal_dep(pair_counts(inv, alpha, beta))
                conditional = conditional_dep(triple_counts(inv, alpha, beta, gamma))
                if marginal.value >= conditional.value or \
                        independence_test(conditional, 2, confidence):
                    continue
                for tail in (alpha, beta):
                    key = _edge_key(tail, gamma)
                    current = direction.get(key)
                    if current is None:
                        direction[key] = tail
                        colliders.add(gamma)
                    elif current != tail:
                        conflicts += 1
                        _logger.warning(
                            'Orientation conflict on edge %d - %d: keeping %d -> %d '
                            'over the head to head at %d.', key[0], key[1],
                            current, _child(key, current), gamma)
    _logger.info('Orientation: %d edges directed by head to head rules (%d '
                 'conflicts).', len(direction), conflicts)

    # direct edges away from nodes that already have a parent
    has_parent = set(_child(key, parent) for key, parent in direction.items())
    changed = True
    while changed:
        changed = False
        for u, v in sk.edges:
            if (u, v) in direction:
                continue
            if u in has_parent and v in has_parent:
                _logger.warning('Edge %d - %d is demanded in both directions; '
                                'directing it %d -> %d.', u, v, u, v)
                direction[(u, v)] = u
                forced.add(v)
            elif u in has_parent:
                direction[(u, v)] = u
                has_parent.add(v)
            elif v in has_parent:
                direction[(u, v)] = v
                has_parent.add(u)
            else:
                continue
            changed = True

    # direct unconstrained fragments away from their smallest node
    fragment = nx.Graph()
    fragment.add_edges_from(e for e in sk.edges if e not in direction)
    for nodes in sorted(sorted(c) for c in nx.connected_components(fragment)):
        for parent, child in nx.bfs_edges(fragment, nodes[0]):
            direction[_edge_key(parent, child)] = parent
    _logger.info('Orientation: %d edges directed in total.', len(direction))

    edges = sorted((parent, _child(key, parent)) for key, parent in direction.items())
    _check_head_to_head(edges, colliders | forced)
    return edges


def _check_head_to_head(edges, allowed):
    """Assert that only the allowed nodes have more than one parent."""
    parent_count = {}
    for _, child in edges:
        parent_count[child] = parent_count.get(child, 0) + 1
    unexpected = sorted(c for c, count in parent_count.items()
                        if count > 1 and c not in allowed)
    assert not unexpected, 'Head to head connections were introduced at nodes ' \
        '{} without a triplet rule.'.format(unexpected)


def estimate_parameters(structure, inv, vocabulary=None,
                        max_parents=DEFAULT_MAX_PARENTS, confidence=None):
    """Estimate the priors and CPTs of a directed forest from an inverted file.

    Root priors are (df + 1) / (N + 2). A CPT entry of a child under a parent
    configuration is (documents with the child and the configuration + 1) /
    (documents with the configuration + 2).

    Args:
        structure: An iterable of (parent, child) edges over the term ids of inv.
        inv: An InvertedFile.
        vocabulary: Optional Vocabulary used to name the nodes. If None, the
            term ids are used as names.
        max_parents: Maximum number of parents of a node. (Default: 12).
        confidence: Optional confidence level stored with the network.

    Returns:
        A BayesNet.
    """
    n, N = len(inv), inv.N
    terms = vocabulary.terms if vocabulary is not None else \
        tuple(str(i) for i in range(n))
    parents = {}
    for parent, child in structure:
        parents.setdefault(child, []).append(parent)
    for child, parent_ids in sorted(parents.items()):
        if len(parent_ids) > max_parents:
            raise ValueError(
                'Node {} ({}) has {} parents, more than the maximum of {}. Its '
                'CPT would have {} rows.'.format(child, terms[child], len(parent_ids),
                                                  max_parents, 2 ** len(parent_ids)))
        parent_ids.sort()

    priors = {t: (inv.df[t] + 1.0) / (N + 2.0) for t in range(n) if t not in parents}
    presence, cpts = {}, {}

    def present(term_id):
        if term_id not in presence:
            presence[term_id] = inv.presence(term_id)
        return presence[term_id]

    for child, parent_ids in sorted(parents.items()):
        k = len(parent_ids)
        rows = config_row(present(p).astype(np.int64) for p in parent_ids)
        totals = np.bincount(rows, minlength=2 ** k)
        hits = np.bincount(rows[present(child)], minlength=2 ** k)
        cpts[child] = ((hits + 1.0) / (totals + 2.0)).tolist()
    return BayesNet(terms, parents, priors, cpts, confidence)


def learn(inv, confidence, vocabulary=None, max_parents=DEFAULT_MAX_PARENTS, jobs=1):
    """Learn a polytree BayesNet thesaurus from an inverted file.

    Args:
        inv: An InvertedFile.
        confidence: Confidence level of both independence tests.
        vocabulary: Optional Vocabulary used to name the nodes.
        max_parents: Maximum number of parents of a node. (Default: 12).
        jobs: Number of threads used in the dependency sweep. (Default: 1).

    Returns:
        A BayesNet with one node per term of the inverted file.
    """
    validate_confidence(confidence)
    _logger.info('Learning a polytree over %d terms at confidence %s.',
                 len(inv), confidence)
    with DependencyGraph(inv, confidence, jobs) as graph:
        skeleton = build_skeleton(graph)
    edges = orient_edges(skeleton, inv, confidence)
    net = estimate_parameters(edges, inv, vocabulary, max_parents, confidence)
    _logger.info('Learned %r.', net)
    return net
