"""Maximum weight spanning forests of term graphs.

A forest is grown with Prim's method: starting from a one-node tree, the
heaviest edge crossing the cut is adjoined at every step. When the heaviest
crossing edge is not acceptable (zero weight or an independent pair) the
component is closed and growth restarts from the smallest unvisited node.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

try:
    import numpy as np
except ImportError as e:
    raise ImportError('Failed to import numpy.\n{}'.format(e))

try:
    import networkx as nx
except ImportError as e:
    raise ImportError('Failed to import networkx.\n{}'.format(e))

from .dependency import DepScore, independence_test, mutual_information

_logger = logging.getLogger(__name__)


class WeightedGraph(object):
    """A complete undirected graph with symmetric non-negative edge weights.

    Missing pairs have a weight of 0, which means that the pair passed the
    independence test and cannot be part of a skeleton.

    Args:
        n: Integer for the number of nodes (ids 0 to n - 1).
        weights: A dictionary with (u, v) node pairs as keys and weights as
            values. Each unordered pair may be given once in either order.
    """

    def __init__(self, n, weights=None):
        assert n >= 1, 'A graph needs at least one node.'
        self._n = n
        self._matrix = np.zeros((n, n), dtype=np.float64)
        for (u, v), w in (weights or {}).items():
            if u == v:
                raise ValueError('Self loops are not allowed ({}, {}).'.format(u, v))
            if w < 0:
                raise ValueError('Weight of ({}, {}) is negative: {}.'.format(u, v, w))
            self._matrix[u, v] = self._matrix[v, u] = w

    @property
    def n(self):
        """Get the number of nodes."""
        return self._n

    def weight(self, u, v):
        """Get the weight of the edge between two nodes."""
        return float(self._matrix[u, v])

    def row(self, u, targets):
        """Get a numpy array with the weights of u with each of the target nodes."""
        return self._matrix[u, targets]

    def accept(self, u, v, weight):
        """Check whether the edge u - v of a given weight may join the skeleton."""
        return weight > 0


class DependencyGraph(WeightedGraph):
    """The graph of term dependencies of an inverted file, evaluated lazily.

    The weight of a pair is Dep(a, b); the pair may only join the skeleton if
    the chi-square test with one degree of freedom rejects independence, so
    the effective weight of independent pairs is 0. Rows are computed on demand
    from a presence matrix and each pair is evaluated exactly once during a
    skeleton build.

    The graph is a context manager that owns the thread pool of the sweep.

    Args:
        inv: An InvertedFile.
        confidence: Confidence level of the independence test.
        jobs: Number of threads that share the evaluation of a row. (Default: 1).
        chunk_size: Number of terms counted by one task. (Default: 1024).
    """

    def __init__(self, inv, confidence, jobs=1, chunk_size=1024):
        self._n = len(inv)
        self._N = inv.N
        self.confidence = confidence
        self.jobs = jobs
        self.chunk_size = chunk_size
        self._presence = inv.presence_matrix()
        self._df = np.asarray(inv.df, dtype=np.float64)
        self._pool = ThreadPoolExecutor(max_workers=jobs) \
            if jobs > 1 and self._n > chunk_size else None
        self.pairs_done = 0
        self.pairs_total = self._n * (self._n - 1) // 2
        self._next_report = 0.1

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    def close(self):
        """Shut down the worker threads of the sweep."""
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def weight(self, u, v):
        n11 = self._presence[v].dot(self._presence[u])
        return max(float(mutual_information(
            n11, self._df[u], self._df[v], self._N)), 0.0)

    def _co_occurrences(self, u):
        """Get the number of documents shared by u and every node."""
        vector = self._presence[u]
        if self._pool is None:
            return self._presence.dot(vector)
        ranges = range(0, self._n, self.chunk_size)
        parts = self._pool.map(
            lambda i: self._presence[i:i + self.chunk_size].dot(vector), ranges)
        return np.concatenate(list(parts))

    def row(self, u, targets):
        targets = np.asarray(targets)
        n11 = self._co_occurrences(u)[targets]
        values = mutual_information(n11, self._df[u], self._df[targets], self._N)
        self._report(len(targets))
        return np.maximum(values, 0.0)

    def _report(self, count):
        self.pairs_done += count
        if self.pairs_total and self.pairs_done >= self._next_report * self.pairs_total:
            _logger.info('Dependency sweep: %d / %d pairs processed.',
                         self.pairs_done, self.pairs_total)
            while self._next_report * self.pairs_total <= self.pairs_done:
                self._next_report += 0.1

    def accept(self, u, v, weight):
        dep = DepScore(weight, self._N)
        return weight > 0 and not independence_test(dep, 1, self.confidence)


class Skeleton(object):
    """An undirected forest over node ids 0 to n - 1.

    Args:
        n: Integer for the number of nodes.
        edges: An iterable of (u, v) node pairs.
    """

    def __init__(self, n, edges=()):
        self._graph = nx.Graph()
        self._graph.add_nodes_from(range(n))
        self._graph.add_edges_from((min(u, v), max(u, v)) for u, v in edges)
        if not nx.is_forest(self._graph):
            raise ValueError('The skeleton edges contain a cycle.')

    @property
    def n(self):
        """Get the number of nodes."""
        return self._graph.number_of_nodes()

    @property
    def edges(self):
        """Get a sorted list of the edges as (smaller id, larger id) tuples."""
        return sorted((min(u, v), max(u, v)) for u, v in self._graph.edges())

    @property
    def graph(self):
        """Get the underlying networkx Graph."""
        return self._graph

    def neighbors(self, u):
        """Get a sorted list of the neighbors of a node."""
        return sorted(self._graph.neighbors(u))

    def components(self):
        """Get a list of sorted node lists, one per connected component."""
        return sorted(sorted(c) for c in nx.connected_components(self._graph))

    def total_weight(self, graph):
        """Get the sum of the weights of the edges in a WeightedGraph."""
        return sum(graph.weight(u, v) for u, v in self.edges)

    def __len__(self):
        return self._graph.number_of_edges()

    def __repr__(self):
        return 'Skeleton: {} nodes, {} edges'.format(self.n, len(self))


def build_skeleton(g):
    """Build the maximum weight spanning forest of a WeightedGraph with Prim's method.

    Ties between equally heavy crossing edges are broken by the smallest
    (smaller id, larger id) pair. Edges rejected by ``g.accept`` are never
    adjoined.

    Args:
        g: A WeightedGraph (or DependencyGraph).

    Returns:
        A Skeleton.
    """
    n = g.n
    nodes = np.arange(n)
    visited = np.zeros(n, dtype=bool)
    best = np.full(n, -np.inf)
    source = np.full(n, -1, dtype=np.int64)
    edges = []

    def adjoin(u):
        visited[u] = True
        targets = nodes[~visited]
        if len(targets) == 0:
            return
        weights = g.row(u, targets)
        low, high = np.minimum(u, targets), np.maximum(u, targets)
        old = source[targets]
        old_low, old_high = np.minimum(old, targets), np.maximum(old, targets)
        smaller = (old < 0) | (low < old_low) | ((low == old_low) & (high < old_high))
        better = (weights > best[targets]) | ((weights == best[targets]) & smaller)
        best[targets[better]] = weights[better]
        source[targets[better]] = u

    while not visited.all():
        root = int(np.flatnonzero(~visited)[0])
        adjoin(root)
        while True:
            outside = nodes[~visited]
            if len(outside) == 0:
                break
            weights = best[outside]
            top = weights.max()
            candidates = outside[weights == top]
            low = np.minimum(source[candidates], candidates)
            high = np.maximum(source[candidates], candidates)
            pick = np.lexsort((high, low))[0]
            v, u = int(candidates[pick]), int(source[candidates[pick]])
            if u < 0 or not g.accept(u, v, float(top)):
                break  # every crossing edge is lighter; the component is closed
            edges.append((u, v))
            adjoin(v)
            if len(edges) % 1000 == 0:
                _logger.info('Skeleton: %d edges adjoined.', len(edges))
        best[~visited] = -np.inf
        source[~visited] = -1
    _logger.info('Skeleton: %d edges adjoined over %d nodes.', len(edges), n)
    return Skeleton(n, edges)
