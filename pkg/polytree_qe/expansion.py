"""Query expansion with a learned BayesNet thesaurus.

The terms of a query are instantiated as relevant, the posteriors of all other
terms are computed and every term whose posterior is higher than a threshold
joins the query, weighted by its posterior. Original terms keep their raw tf
weights.
"""
import io
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

try:
    from ladybug.futil import write_to_file
except ImportError as e:
    raise ImportError('Failed to import ladybug.\n{}'.format(e))

from .config import header_comment, format_number, validate_threshold
from .corpus import read_queries
from .inference import propagate

_logger = logging.getLogger(__name__)

ORIGINAL = 'original'
ADDED = 'added'
EXPANDED_EXTENSION = '.exp'


class QueryVector(object):
    """A weighted query: an ordered list of (term, weight, flag) entries.

    Args:
        query_id: Integer for the query identifier.
        entries: A list of (term, weight, flag) tuples where flag is either
            'original' or 'added'. A term may appear only once.
    """
    __slots__ = ('query_id', '_entries', '_weights')

    def __init__(self, query_id, entries=()):
        self.query_id = query_id
        self._entries = tuple((term, weight, flag) for term, weight, flag in entries)
        self._weights = OrderedDict()
        for term, weight, flag in self._entries:
            if flag not in (ORIGINAL, ADDED):
                raise ValueError('Query {}: unknown term flag "{}".'.format(
                    query_id, flag))
            if weight < 0:
                raise ValueError('Query {}: term "{}" has a negative weight.'.format(
                    query_id, term))
            if term in self._weights:
                raise ValueError('Query {}: term "{}" appears twice.'.format(
                    query_id, term))
            self._weights[term] = weight

    @classmethod
    def from_tokens(cls, query_id, tokens):
        """Create an unexpanded QueryVector with raw tf weights from a token list.

        Terms keep the order of their first appearance.
        """
        counts = OrderedDict()
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        return cls(query_id, [(t, tf, ORIGINAL) for t, tf in counts.items()])

    @property
    def entries(self):
        """Get a tuple of (term, weight, flag) entries in query order."""
        return self._entries

    @property
    def terms(self):
        """Get a list of the query terms in order."""
        return list(self._weights)

    @property
    def weights(self):
        """Get an ordered dictionary of term weights."""
        return self._weights

    @property
    def original_terms(self):
        return [t for t, _, flag in self._entries if flag == ORIGINAL]

    @property
    def added_terms(self):
        return [t for t, _, flag in self._entries if flag == ADDED]

    def weight(self, term):
        """Get the weight of a term or 0 if it is not part of the query."""
        return self._weights.get(term, 0)

    def __contains__(self, term):
        return term in self._weights

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, QueryVector) and \
            (self.query_id, self._entries) == (other.query_id, other._entries)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'QueryVector: {} ({} original, {} added)'.format(
            self.query_id, len(self.original_terms), len(self.added_terms))


def query_evidence(query, net):
    """Get the node ids of the query terms that are part of a network.

    Missing terms are skipped and logged.
    """
    evidence, missing = [], []
    for term in query.terms:
        node = net.node_id(term)
        if node is None:
            missing.append(term)
        else:
            evidence.append(node)
    if missing:
        _logger.warning('Query %s: %d terms are not network nodes and give no '
                        'evidence: %s', query.query_id, len(missing), ' '.join(missing))
    return evidence


def query_posteriors(query, net):
    """Get the PosteriorVector of a query or None if no query term is a node."""
    evidence = query_evidence(query, net)
    return propagate(net, evidence) if evidence else None


def expand_query(query, net, threshold, posteriors=None):
    """Expand a query with the network terms whose posterior is above a threshold.

    Args:
        query: A QueryVector with at least one term.
        net: A BayesNet.
        threshold: Number between 0 and 1 (exclusive). Terms need a posterior
            strictly higher than it.
        posteriors: Optional PosteriorVector of the query from
            query_posteriors. Pass it to reuse one propagation for several
            thresholds.

    Returns:
        A new QueryVector with the original entries followed by the added terms
        in descending posterior order.
    """
    validate_threshold(threshold)
    if len(query) == 0:
        raise ValueError('Query {} has no terms to expand.'.format(query.query_id))
    if posteriors is None:
        posteriors = query_posteriors(query, net)
    if posteriors is None:
        _logger.warning('Query %s has no term in the network. It is not expanded.',
                        query.query_id)
        return QueryVector(query.query_id, query.entries)
    added = [(net.term(node), posteriors[node], ADDED)
             for node in posteriors.above(threshold) if net.term(node) not in query]
    return QueryVector(query.query_id, query.entries + tuple(added))


def _map(function, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(function, items))
    return [function(item) for item in items]


def all_query_posteriors(queries, net, jobs=1):
    """Get a list with the PosteriorVector (or None) of each query."""
    return _map(lambda q: query_posteriors(q, net), list(queries), jobs)


def expand_query_file(queries, net, threshold, posteriors=None, jobs=1):
    """Expand a list of queries with the same network and threshold.

    Args:
        queries: A list of QueryVectors.
        net: A BayesNet.
        threshold: Posterior threshold.
        posteriors: Optional list of PosteriorVectors aligned with queries.
        jobs: Number of threads expanding queries. (Default: 1).

    Returns:
        A list of expanded QueryVectors in input order.
    """
    queries = list(queries)
    if posteriors is None:
        posteriors = all_query_posteriors(queries, net, jobs)
    expanded = [expand_query(q, net, threshold, p) for q, p in zip(queries, posteriors)]
    if expanded:
        _logger.info('Expanded %d queries at threshold %s: %.2f added terms per '
                     'query.', len(expanded), format_number(threshold),
                     mean_added_terms(expanded))
    return expanded


def mean_added_terms(queries):
    """Get the mean number of added terms of a list of QueryVectors."""
    queries = list(queries)
    if not queries:
        return 0.0
    return sum(len(q.added_terms) for q in queries) / float(len(queries))


def expanded_to_string(queries, confidence=None, threshold=None):
    """Get the text of a list of QueryVectors in the expanded query format.

    Each query is a ``.I <query_id>`` line followed by one
    ``term TAB weight TAB original|added`` line per term.
    """
    lines = [header_comment(
        'expand',
        confidence=format_number(confidence) if confidence is not None else '-',
        threshold=format_number(threshold) if threshold is not None else '-')]
    for query in queries:
        lines.append('.I {}'.format(query.query_id))
        lines.extend('{}\t{:.12g}\t{}'.format(term, weight, flag)
                     for term, weight, flag in query.entries)
    return '\n'.join(lines) + '\n'


def load_expanded(source):
    """Load a list of QueryVectors from the expanded query format.

    Args:
        source: A file object or an iterable of lines.
    """
    queries, query_id, entries = [], None, []
    for line_number, line in enumerate(source, 1):
        line = line.rstrip('\r\n')
        if not line.strip() or line.startswith('#'):
            continue
        if line.startswith('.I'):
            if query_id is not None:
                queries.append(QueryVector(query_id, entries))
            try:
                query_id, entries = int(line.split()[1]), []
            except (IndexError, ValueError):
                raise ValueError('Line {}: malformed query id line "{}".'.format(
                    line_number, line))
            continue
        parts = line.split('\t')
        if query_id is None or len(parts) != 3:
            raise ValueError('Line {}: expected "term TAB weight TAB flag" after a '
                             '.I line but got "{}".'.format(line_number, line))
        try:
            entries.append((parts[0], float(parts[1]), parts[2]))
        except ValueError:
            raise ValueError('Line {}: weight "{}" is not a number.'.format(
                line_number, parts[1]))
    if query_id is not None:
        queries.append(QueryVector(query_id, entries))
    return queries


def write_expanded(queries, file_path, confidence=None, threshold=None):
    """Write QueryVectors to an expanded query file."""
    return write_to_file(
        file_path, expanded_to_string(queries, confidence, threshold), mkdir=True)


def read_expanded(file_path):
    """Read an expanded query file."""
    with io.open(file_path, 'r', encoding='utf-8') as inf:
        try:
            return load_expanded(inf)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))


def load_query_file(file_path, options=None):
    """Read QueryVectors from an expanded query file or a SMART query file.

    Files ending in .exp are read as expanded queries. Any other file is
    parsed as SMART queries and tokenized with the given IndexOptions.
    """
    if file_path.endswith(EXPANDED_EXTENSION):
        return read_expanded(file_path)
    return [QueryVector.from_tokens(qid, tokens)
            for qid, tokens in read_queries(file_path, options)]


def posteriors_to_string(queries, posteriors, net):
    """Get the posterior dump of a list of queries.

    Each query is a ``.I <query_id>`` line followed by ``term TAB posterior``
    lines for every network node. Queries without evidence are dumped with
    the no-evidence marginals.
    """
    lines = []
    for query, vector in zip(queries, posteriors):
        lines.append('.I {}'.format(query.query_id))
        if vector is None:
            lines.extend('{}\t{:.12g}'.format(term, p)
                         for term, p in zip(net.terms, net.prior_marginals()))
        else:
            lines.extend(vector.to_lines(net))
    return '\n'.join(lines) + '\n'
