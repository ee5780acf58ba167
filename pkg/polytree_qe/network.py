"""The Bayesian network thesaurus: a polytree of terms with its probability tables."""
import io
import logging

try:
    import networkx as nx
except ImportError as e:
    raise ImportError('Failed to import networkx.\n{}'.format(e))

try:
    from ladybug.futil import write_to_file
except ImportError as e:
    raise ImportError('Failed to import ladybug.\n{}'.format(e))

from .config import header_comment, format_number

_logger = logging.getLogger(__name__)

NETWORK_FORMAT = 'PQENET'
NETWORK_VERSION = '1'


def config_bits(row, parent_count):
    """Get the parent states of a CPT row index.

    Parents are taken in ascending term id order and read as a binary number,
    so the lowest-id parent is the most significant bit.

    Args:
        row: Integer for the CPT row index.
        parent_count: Number of parents of the node.

    Returns:
        A tuple of 0/1 states, one per parent.
    """
    return tuple((row >> (parent_count - 1 - j)) & 1 for j in range(parent_count))


def config_row(states):
    """Get the CPT row index of a sequence of parent states (inverse of config_bits).

    The states may also be integer arrays, giving one row index per element.
    """
    row = 0
    for state in states:
        row = (row << 1) | state
    return row


class BayesNet(object):
    """A polytree Bayesian network over binary term nodes.

    Node ids are the term ids of the index the network was learned from. Every
    node is either a root with a prior p(node=1) or a child with one CPT entry
    p(node=1 | parent configuration) per configuration of its parents.

    Args:
        terms: A list of term strings ordered by node id.
        parents: A dictionary with child node ids as keys and lists of parent
            node ids as values. Nodes missing from the dictionary are roots.
        priors: A dictionary with root node ids as keys and p(node=1) as values.
        cpts: A dictionary with child node ids as keys and lists of
            2^parents probabilities as values, in the row order of config_bits.
        confidence: Optional confidence level the network was learned with.
    """

    def __init__(self, terms, parents=None, priors=None, cpts=None, confidence=None):
        self._terms = tuple(terms)
        self._ids = {t: i for i, t in enumerate(self._terms)}
        self._parents = {c: tuple(sorted(p)) for c, p in (parents or {}).items() if p}
        self._priors = dict(priors or {})
        self._cpts = {c: tuple(t) for c, t in (cpts or {}).items()}
        self.confidence = confidence
        children = {}
        for child, parent_ids in sorted(self._parents.items()):
            for parent in parent_ids:
                children.setdefault(parent, []).append(child)
        self._children = {p: tuple(c) for p, c in children.items()}
        self._components = None
        self._marginals = None
        self.validate()

    @property
    def terms(self):
        """Get a tuple of the term strings ordered by node id."""
        return self._terms

    @property
    def node_count(self):
        """Get the number of nodes."""
        return len(self._terms)

    @property
    def edges(self):
        """Get a sorted list of (parent, child) edges."""
        return sorted((p, c) for c, ps in self._parents.items() for p in ps)

    def node_id(self, term):
        """Get the node id of a term string or None if it is not a node."""
        return self._ids.get(term)

    def term(self, node):
        """Get the term string of a node id."""
        return self._terms[node]

    def parents(self, node):
        """Get a tuple of the parent ids of a node in ascending order."""
        return self._parents.get(node, ())

    def children(self, node):
        """Get a tuple of the child ids of a node in ascending order."""
        return self._children.get(node, ())

    def is_root(self, node):
        """Check whether a node has no parents."""
        return node not in self._parents

    def prior(self, node):
        """Get p(node=1) of a root node."""
        return self._priors[node]

    def cpt(self, node):
        """Get the tuple of p(node=1 | row) of a child node."""
        return self._cpts[node]

    def neighbors(self, node):
        """Get a sorted tuple of parents and children of a node."""
        return tuple(sorted(self.parents(node) + self.children(node)))

    def undirected_graph(self):
        """Get a networkx Graph of the network skeleton."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.edges)
        return graph

    def components(self):
        """Get a list of sorted node lists, one per connected component.

        Components are ordered by their smallest node id.
        """
        if self._components is None:
            self._components = sorted(
                tuple(sorted(c)) for c in nx.connected_components(
                    self.undirected_graph()))
        return self._components

    def prior_marginals(self):
        """Get a tuple of p(node=1) without any evidence, for every node.

        The marginals are computed once by propagation and cached.
        """
        if self._marginals is None:
            from .inference import propagate
            self._marginals = tuple(propagate(self, ()).values)
        return self._marginals

    def validate(self):
        """Check that the network is a polytree with complete probability tables."""
        n = self.node_count
        for child, parent_ids in self._parents.items():
            if not 0 <= child < n or not all(0 <= p < n for p in parent_ids):
                raise ValueError('Edge to node {} references an unknown node.'.format(
                    child))
            table = self._cpts.get(child)
            if table is None or len(table) != 2 ** len(parent_ids):
                raise ValueError('Node {} ({}) has {} parents but {} CPT rows.'.format(
                    child, self._terms[child], len(parent_ids),
                    0 if table is None else len(table)))
            if not all(0 < p < 1 for p in table):
                raise ValueError('CPT of node {} has values outside (0, 1).'.format(
                    child))
        extra = sorted(set(self._cpts) - set(self._parents))
        if extra:
            raise ValueError('Root node {} has a CPT.'.format(extra[0]))
        for node in range(n):
            if node not in self._parents:
                if node not in self._priors:
                    raise ValueError('Root node {} ({}) has no prior.'.format(
                        node, self._terms[node]))
                if not 0 < self._priors[node] < 1:
                    raise ValueError('Prior of node {} is outside (0, 1).'.format(node))
        if len(self._ids) != n:
            raise ValueError('Network terms are not unique.')
        if not nx.is_forest(self.undirected_graph()):
            raise ValueError('The network is not a polytree: its skeleton has a cycle.')
        if len(self.edges) != len(set(self.edges)):
            raise ValueError('The network repeats an edge.')
        return True

    def to_string(self):
        """Get the network in the PQENET text format.

        The format is line oriented: a ``PQENET 1 <confidence>`` header, a
        comment, one ``NODE <id> <term> PRIOR <p>`` or ``NODE <id> <term> CPT``
        line per node, one ``EDGE <parent> <child>`` line per edge, one
        ``CPT <id> <row> <p>`` line per CPT row and an ``END`` trailer.
        Probabilities are written with 12 significant digits.
        """
        confidence = format_number(self.confidence) \
            if self.confidence is not None else '-'
        lines = ['{} {} {}'.format(NETWORK_FORMAT, NETWORK_VERSION, confidence),
                 header_comment('learn', confidence=confidence, nodes=self.node_count,
                                edges=len(self.edges))]
        for node, term in enumerate(self._terms):
            if self.is_root(node):
                lines.append('NODE {} {} PRIOR {:.12g}'.format(
                    node, term, self._priors[node]))
            else:
                lines.append('NODE {} {} CPT'.format(node, term))
        lines.extend('EDGE {} {}'.format(p, c) for p, c in self.edges)
        for node in sorted(self._cpts):
            lines.extend('CPT {} {} {:.12g}'.format(node, row, p)
                         for row, p in enumerate(self._cpts[node]))
        lines.append('END')
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_string(cls, text):
        """Create a BayesNet from text in the PQENET format."""
        return load_network(io.StringIO(text))

    def __repr__(self):
        return 'BayesNet: {} nodes, {} edges'.format(self.node_count, len(self.edges))


def save_network(net, sink):
    """Write a BayesNet to a file object in the PQENET format."""
    sink.write(net.to_string())


def load_network(source):
    """Load a BayesNet from a file object in the PQENET format.

    Args:
        source: A file object or an iterable of lines.
    """
    lines = [line.rstrip('\r\n') for line in source]
    lines = [line for line in lines if line.strip() and not line.startswith('#')]
    header = lines[0].split() if lines else []
    if len(header) != 3 or header[:2] != [NETWORK_FORMAT, NETWORK_VERSION]:
        raise ValueError('Expected a "{} {} <confidence>" header but found {}.'.format(
            NETWORK_FORMAT, NETWORK_VERSION, lines[0] if lines else 'an empty file'))
    if lines[-1] != 'END':
        raise ValueError('The network file is truncated (no END line).')
    confidence = None if header[2] == '-' else float(header[2])
    terms, kinds, priors, parents, rows = [], {}, {}, {}, {}
    for line_number, line in enumerate(lines[1:-1], 2):
        parts = line.split()
        try:
            if parts[0] == 'NODE':
                node = int(parts[1])
                if node != len(terms):
                    raise ValueError('node ids must be dense and ascending')
                terms.append(parts[2])
                kinds[node] = parts[3]
                if parts[3] == 'PRIOR':
                    priors[node] = float(parts[4])
                elif parts[3] != 'CPT' or len(parts) != 4:
                    raise ValueError('unknown node kind')
            elif parts[0] == 'EDGE':
                parents.setdefault(int(parts[2]), []).append(int(parts[1]))
            elif parts[0] == 'CPT':
                rows.setdefault(int(parts[1]), {})[int(parts[2])] = float(parts[3])
            else:
                raise ValueError('unknown record "{}"'.format(parts[0]))
        except (IndexError, ValueError) as e:
            raise ValueError('Line {}: malformed network record "{}" ({}).'.format(
                line_number, line, e))
    cpts = {}
    for node, table in rows.items():
        expected = 2 ** len(parents.get(node, ()))
        if sorted(table) != list(range(expected)):
            raise ValueError('Node {} has {} CPT rows but {} parents.'.format(
                node, len(table), len(parents.get(node, ()))))
        cpts[node] = [table[r] for r in range(expected)]
    for node, kind in kinds.items():
        if (kind == 'CPT') != (node in parents):
            raise ValueError('Node {} is declared {} but has {} parents.'.format(
                node, kind, len(parents.get(node, ()))))
    return BayesNet(terms, parents, priors, cpts, confidence)


def write_network(net, file_path):
    """Write a BayesNet to a PQENET file."""
    return write_to_file(file_path, net.to_string(), mkdir=True)


def read_network(file_path):
    """Read a BayesNet from a PQENET file."""
    with io.open(file_path, 'r', encoding='utf-8') as inf:
        try:
            return load_network(inf)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))
