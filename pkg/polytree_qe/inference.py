"""Exact posterior probabilities of term nodes given query terms as evidence.

Posteriors are computed with lambda/pi message passing over each connected
component of the polytree. A component is rooted at its smallest node; lambda
and pi messages are first collected towards the root and then distributed back
to the leaves, after which every node holds the messages of all its neighbors.
"""
import logging

try:
    import numpy as np
except ImportError as e:
    raise ImportError('Failed to import numpy.\n{}'.format(e))

from .network import config_bits, config_row

_logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 25  # 2^25 joint configurations
_NO_EVIDENCE = np.array([1.0, 1.0])
_RELEVANT = np.array([0.0, 1.0])


class PosteriorVector(object):
    """The probability p(node=1 | evidence) of every node of a network.

    Args:
        values: A list of posteriors ordered by node id.
        evidence: A frozenset of the node ids that were instantiated.
    """
    __slots__ = ('_values', '_evidence')

    def __init__(self, values, evidence=frozenset()):
        self._values = tuple(values)
        self._evidence = frozenset(evidence)

    @property
    def values(self):
        """Get a tuple of posteriors ordered by node id."""
        return self._values

    @property
    def evidence(self):
        """Get a frozenset of the evidence node ids."""
        return self._evidence

    def above(self, threshold):
        """Get the non-evidence node ids whose posterior is higher than a threshold.

        Nodes are sorted by descending posterior and then by ascending id.
        """
        nodes = [i for i, p in enumerate(self._values)
                 if p > threshold and i not in self._evidence]
        return sorted(nodes, key=lambda i: (-self._values[i], i))

    def to_lines(self, net):
        """Get a list of "term TAB posterior" lines for every node of a network."""
        return ['{}\t{:.12g}'.format(term, p) for term, p in zip(net.terms, self._values)]

    def __getitem__(self, node):
        return self._values[node]

    def __len__(self):
        return len(self._values)

    def __iter__(self):
        return iter(self._values)

    def __repr__(self):
        return 'PosteriorVector: {} nodes, {} evidence'.format(
            len(self._values), len(self._evidence))


def _evidence_set(net, evidence):
    evidence = frozenset(evidence)
    unknown = sorted(e for e in evidence if not 0 <= e < net.node_count)
    if unknown:
        raise ValueError('Evidence node {} is not part of the network.'.format(
            unknown[0]))
    return evidence


def _normalize(vector):
    total = vector.sum()
    return vector / total if total > 0 else vector


class _NodeTable(object):
    """The CPT of a node with its parents in the form used by the messages."""
    __slots__ = ('p_true', 'bits')

    def __init__(self, net, node):
        k = len(net.parents(node))
        self.p_true = np.asarray(net.cpt(node), dtype=np.float64)
        self.bits = np.array([config_bits(row, k) for row in range(2 ** k)],
                             dtype=np.int64).reshape(2 ** k, k)

    def factors(self, parent_messages):
        """Get a (rows x parents) array of the parent pi message of each row state."""
        return np.stack([parent_messages[j][self.bits[:, j]]
                         for j in range(self.bits.shape[1])], axis=1)

    def pi(self, parent_messages):
        """Get pi(x) of the node from the pi messages of all its parents."""
        product = self.factors(parent_messages).prod(axis=1)
        p_one = float(np.dot(self.p_true, product))
        return np.array([product.sum() - p_one, p_one])

    def lambda_to_parent(self, index, lam, parent_messages):
        """Get the lambda message of the node to its parent at a given position."""
        factors = self.factors(parent_messages)
        others = np.delete(factors, index, axis=1).prod(axis=1)
        likelihood = lam[1] * self.p_true + lam[0] * (1.0 - self.p_true)
        contribution = likelihood * others
        state = self.bits[:, index]
        return np.array([contribution[state == 0].sum(), contribution[state == 1].sum()])


def _propagate_component(net, component, evidence, values):
    """Run the collect and distribute phases on one component."""
    root = component[0]
    order, tree_parent = [root], {root: None}
    for node in order:  # breadth first
        for other in net.neighbors(node):
            if other not in tree_parent:
                tree_parent[other] = node
                order.append(other)

    pi_msg, lambda_msg, tables = {}, {}, {}

    def table(node):
        if node not in tables:
            tables[node] = _NodeTable(net, node)
        return tables[node]

    def local_lambda(node, exclude=None):
        lam = _RELEVANT.copy() if node in evidence else _NO_EVIDENCE.copy()
        for child in net.children(node):
            if child != exclude:
                lam *= lambda_msg[(child, node)]
        return lam

    def local_pi(node):
        if net.is_root(node):
            p = net.prior(node)
            return np.array([1.0 - p, p])
        return table(node).pi([pi_msg[(u, node)] for u in net.parents(node)])

    def send(node, target):
        if target in net.children(node):
            pi_msg[(node, target)] = _normalize(
                local_pi(node) * local_lambda(node, exclude=target))
        else:
            parents = net.parents(node)
            msg = table(node).lambda_to_parent(
                parents.index(target), local_lambda(node),
                [pi_msg.get((u, node), _NO_EVIDENCE) for u in parents])
            lambda_msg[(node, target)] = _normalize(msg)

    for node in reversed(order[1:]):
        send(node, tree_parent[node])
    for node in order:
        for other in net.neighbors(node):
            if tree_parent.get(other) == node:
                send(node, other)

    for node in component:
        if node in evidence:
            values[node] = 1.0
            continue
        belief = _normalize(local_pi(node) * local_lambda(node))
        values[node] = min(max(float(belief[1]), 0.0), 1.0)


def propagate(net, evidence=()):
    """Get the posterior of every node of a BayesNet given positive evidence.

    Components without evidence take the cached no-evidence marginals of the
    network, so only the components holding evidence are propagated.

    Args:
        net: A BayesNet.
        evidence: An iterable of node ids instantiated to 1 (relevant).

    Returns:
        A PosteriorVector.
    """
    evidence = _evidence_set(net, evidence)
    net.validate()
    values = [0.0] * net.node_count
    marginals = net.prior_marginals() if evidence else None
    for component in net.components():
        if not evidence or evidence.intersection(component):
            _propagate_component(net, component, evidence, values)
        else:
            for node in component:
                values[node] = marginals[node]
    return PosteriorVector(values, evidence)


def brute_force_posteriors(net, evidence=()):
    """Get posteriors by enumerating every joint configuration of a small network.

    Args:
        net: A BayesNet with no more than 25 nodes.
        evidence: An iterable of node ids instantiated to 1.

    Returns:
        A PosteriorVector.
    """
    n = net.node_count
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError('Joint enumeration is limited to {} nodes. The network '
                         'has {}.'.format(BRUTE_FORCE_LIMIT, n))
    evidence = _evidence_set(net, evidence)
    states = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
    weights = np.ones(2 ** n)
    for node in range(n):
        if net.is_root(node):
            p_true = np.full(2 ** n, net.prior(node))
        else:
            rows = config_row(states[:, parent] for parent in net.parents(node))
            p_true = np.asarray(net.cpt(node))[rows]
        weights *= np.where(states[:, node] == 1, p_true, 1.0 - p_true)
    for node in evidence:
        weights[states[:, node] == 0] = 0.0
    total = weights.sum()
    if total <= 0:
        raise ValueError('impossible evidence: {}'.format(sorted(evidence)))
    values = np.clip(weights.dot(states) / total, 0.0, 1.0)
    for node in evidence:
        values[node] = 1.0
    return PosteriorVector(values.tolist(), evidence)
