"""Vector space retrieval with nnn weights (raw tf, no idf, no normalization)."""
import io
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

try:
    from ladybug.futil import write_to_file
except ImportError as e:
    raise ImportError('Failed to import ladybug.\n{}'.format(e))

from .config import header_comment

_logger = logging.getLogger(__name__)


class DocVector(object):
    """The nnn vector of a document: raw term frequencies.

    Args:
        doc_id: Integer for the document id.
        tfs: A dictionary with terms as keys and tf >= 1 as values.
    """
    __slots__ = ('doc_id', 'tfs')

    def __init__(self, doc_id, tfs):
        assert all(tf >= 1 for tf in tfs.values()), \
            'Document {} has a term with tf < 1.'.format(doc_id)
        self.doc_id = doc_id
        self.tfs = dict(tfs)

    def __repr__(self):
        return 'DocVector: {} ({} terms)'.format(self.doc_id, len(self.tfs))


def doc_vectors(index):
    """Get a list of the DocVectors of every document of an Index, sorted by id."""
    tfs = OrderedDict((d, {}) for d in index.inverted.doc_ids)
    for term_id, term in enumerate(index.vocabulary.terms):
        for doc_id, tf in index.inverted.postings(term_id):
            tfs[doc_id][term] = tf
    return [DocVector(d, t) for d, t in tfs.items()]


def score(doc, query):
    """Get the inner product of a DocVector and a QueryVector.

    Terms are accumulated in query order so the result equals the one of search.
    """
    total = 0.0
    for term, weight, _ in query.entries:
        tf = doc.tfs.get(term)
        if tf:
            total += tf * weight
    return total


def rank(scores, k=None):
    """Sort a dictionary of doc_id: score by descending score and ascending id.

    Documents with a score of 0 are dropped and the list is cut at k.
    """
    ranking = sorted(((d, s) for d, s in scores.items() if s > 0),
                     key=lambda x: (-x[1], x[0]))
    return ranking if k is None else ranking[:k]


def search(index, query, k=None):
    """Rank the documents of an Index for a query by term at a time accumulation.

    Args:
        index: An Index.
        query: A QueryVector.
        k: Optional number of documents to return. If None, every document
            with a score above 0 is returned.

    Returns:
        A list of (doc_id, score) tuples.
    """
    if k is not None and k < 1:
        raise ValueError('k must be at least 1. Got {}.'.format(k))
    accumulators = {}
    for term, weight, _ in query.entries:
        term_id = index.vocabulary.term_id(term)
        if term_id is None or weight == 0:
            continue
        for doc_id, tf in index.inverted.postings(term_id):
            accumulators[doc_id] = accumulators.get(doc_id, 0.0) + tf * weight
    return rank(accumulators, k)


class RankedRun(object):
    """The ranked results of a set of queries.

    Args:
        results: An ordered dictionary with query ids as keys and lists of
            (doc_id, score) tuples as values.
    """
    __slots__ = ('_results',)

    def __init__(self, results=None):
        self._results = OrderedDict()
        for query_id, ranking in (results or {}).items():
            self[query_id] = ranking

    @property
    def query_ids(self):
        """Get a list of the query ids in run order."""
        return list(self._results)

    def documents(self, query_id):
        """Get the ranked list of doc ids of a query (empty if the query is missing)."""
        return [d for d, _ in self._results.get(query_id, ())]

    def __setitem__(self, query_id, ranking):
        ranking = list(ranking)
        docs = [d for d, _ in ranking]
        assert len(set(docs)) == len(docs), \
            'Query {} ranks a document twice.'.format(query_id)
        self._results[query_id] = ranking

    def __getitem__(self, query_id):
        return self._results[query_id]

    def __contains__(self, query_id):
        return query_id in self._results

    def __len__(self):
        return len(self._results)

    def items(self):
        return self._results.items()

    def to_string(self, k=None):
        """Get the run in the run file format.

        Each line is ``query_id TAB rank TAB doc_id TAB score`` with ranks from 1.
        """
        lines = [header_comment('search', k=k if k is not None else 'all')]
        for query_id, ranking in self._results.items():
            lines.extend('{}\t{}\t{}\t{:.12g}'.format(query_id, r, d, s)
                         for r, (d, s) in enumerate(ranking, 1))
        return '\n'.join(lines) + '\n'

    def __repr__(self):
        return 'RankedRun: {} queries'.format(len(self._results))


def search_all(index, queries, k=None, jobs=1):
    """Search every query of a list and collect the results into a RankedRun.

    Args:
        index: An Index.
        queries: A list of QueryVectors.
        k: Optional cutoff of each ranking.
        jobs: Number of threads searching queries. (Default: 1).
    """
    queries = list(queries)
    if jobs > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rankings = list(pool.map(lambda q: search(index, q, k), queries))
    else:
        rankings = [search(index, q, k) for q in queries]
    run = RankedRun(OrderedDict((q.query_id, r) for q, r in zip(queries, rankings)))
    _logger.info('Searched %d queries.', len(run))
    return run


def load_run(source):
    """Load a RankedRun from a file object in the run file format.

    Queries that retrieved nothing have no lines, so they are absent from the
    loaded run.
    """
    results = OrderedDict()
    for line_number, line in enumerate(source, 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.rstrip('\r\n').split('\t')
        try:
            query_id, position, doc_id = int(parts[0]), int(parts[1]), int(parts[2])
            value = float(parts[3])
        except (IndexError, ValueError):
            raise ValueError('Line {}: expected "query_id TAB rank TAB doc_id TAB '
                             'score" but got "{}".'.format(line_number, line.strip()))
        ranking = results.setdefault(query_id, [])
        if position != len(ranking) + 1:
            raise ValueError('Line {}: rank {} of query {} is out of order.'.format(
                line_number, position, query_id))
        ranking.append((doc_id, value))
    return RankedRun(results)


def write_run(run, file_path, k=None):
    """Write a RankedRun to a run file."""
    return write_to_file(file_path, run.to_string(k), mkdir=True)


def read_run(file_path):
    """Read a run file into a RankedRun."""
    with io.open(file_path, 'r', encoding='utf-8') as inf:
        try:
            return load_run(inf)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))
