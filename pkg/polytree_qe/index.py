"""Vocabulary, inverted file and the co-occurrence counts derived from it.

The inverted file is the only data source of the thesaurus learner. Every
pairwise or three-way statistic is obtained from postings intersections and
inclusion-exclusion over the document frequencies; nothing is materialized for
all pairs of terms.
"""
import io
import logging
from collections import Counter

try:
    import numpy as np
except ImportError as e:
    raise ImportError('Failed to import numpy.\n{}'.format(e))

try:
    from ladybug.futil import write_to_file
except ImportError as e:
    raise ImportError('Failed to import ladybug.\n{}'.format(e))

from .config import header_comment
from .corpus import IndexOptions

_logger = logging.getLogger(__name__)

INDEX_FORMAT = 'PQEIDX'
INDEX_VERSION = '1'


class Vocabulary(object):
    """Bijection between term strings and dense integer term ids.

    Args:
        terms: An iterable of distinct term strings. Ids are assigned in
            lexicographic order of the terms.
    """
    __slots__ = ('_terms', '_ids')

    def __init__(self, terms):
        self._terms = tuple(sorted(set(terms)))
        self._ids = {term: i for i, term in enumerate(self._terms)}

    @property
    def terms(self):
        """Get a tuple of all term strings ordered by term id."""
        return self._terms

    def term(self, term_id):
        """Get the term string of a term id."""
        return self._terms[term_id]

    def term_id(self, term):
        """Get the id of a term string or None if the term is not in the vocabulary."""
        return self._ids.get(term)

    def __contains__(self, term):
        return term in self._ids

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __repr__(self):
        return 'Vocabulary: {} terms'.format(len(self._terms))


class InvertedFile(object):
    """Postings lists of a document collection.

    Args:
        doc_ids: An iterable of all document ids of the collection, including
            documents without any indexed term.
        postings: A list with one entry per term id. Each entry is a list of
            (doc_id, tf) tuples.
    """
    __slots__ = ('_doc_ids', '_postings', '_doc_lists', '_df')

    def __init__(self, doc_ids, postings):
        self._doc_ids = tuple(sorted(doc_ids))
        self._postings = tuple(tuple(sorted(p)) for p in postings)
        self._doc_lists = tuple(tuple(d for d, _ in p) for p in self._postings)
        self._df = tuple(len(p) for p in self._postings)
        self._check()

    def _check(self):
        n_docs = len(self._doc_ids)
        assert len(set(self._doc_ids)) == n_docs, 'Document ids must be unique.'
        for term_id, docs in enumerate(self._doc_lists):
            if not 1 <= len(docs) <= n_docs:
                raise ValueError('Term {} has a document frequency of {} in a '
                                 'collection of {} documents.'.format(
                                     term_id, len(docs), n_docs))
            if any(a >= b for a, b in zip(docs, docs[1:])):
                raise ValueError('Postings of term {} repeat a document.'.format(
                    term_id))
        for term_id, posting in enumerate(self._postings):
            if any(tf < 1 for _, tf in posting):
                raise ValueError('Term {} has a posting with tf < 1.'.format(term_id))

    @property
    def N(self):
        """Get the total number of documents in the collection."""
        return len(self._doc_ids)

    @property
    def doc_ids(self):
        """Get a sorted tuple of all document ids."""
        return self._doc_ids

    @property
    def df(self):
        """Get a tuple with the document frequency of each term id."""
        return self._df

    def postings(self, term_id):
        """Get a tuple of (doc_id, tf) pairs sorted by doc_id for a term id."""
        return self._postings[term_id]

    def documents(self, term_id):
        """Get a sorted tuple of the ids of the documents containing a term."""
        return self._doc_lists[term_id]

    def presence(self, term_id):
        """Get a boolean numpy array over doc_ids noting where a term appears."""
        return np.isin(np.asarray(self._doc_ids),
                       np.asarray(self._doc_lists[term_id]), assume_unique=True)

    def presence_matrix(self, dtype=np.float64):
        """Get a (terms x documents) numpy matrix of binary term presence."""
        columns = {doc: i for i, doc in enumerate(self._doc_ids)}
        matrix = np.zeros((len(self._postings), len(self._doc_ids)), dtype=dtype)
        for term_id, docs in enumerate(self._doc_lists):
            matrix[term_id, [columns[d] for d in docs]] = 1
        return matrix

    def __len__(self):
        return len(self._postings)

    def __repr__(self):
        return 'InvertedFile: {} terms, {} documents'.format(
            len(self._postings), len(self._doc_ids))


class Index(object):
    """An indexed collection: Vocabulary, InvertedFile and the IndexOptions used.

    Args:
        vocabulary: A Vocabulary object.
        inverted: An InvertedFile object whose term ids follow the vocabulary.
        options: The IndexOptions the documents were tokenized with. Queries
            searched against this index must be tokenized with them too.
    """
    __slots__ = ('vocabulary', 'inverted', 'options')

    def __init__(self, vocabulary, inverted, options=None):
        assert len(vocabulary) == len(inverted), 'Vocabulary has {} terms while ' \
            'the inverted file has {}.'.format(len(vocabulary), len(inverted))
        self.vocabulary = vocabulary
        self.inverted = inverted
        self.options = options or IndexOptions()

    @classmethod
    def from_documents(cls, documents, options=None):
        """Create an Index from a list of tokenized Documents."""
        vocabulary, inverted = build_inverted_file(documents)
        return cls(vocabulary, inverted, options)

    def __repr__(self):
        return 'Index: {} terms, {} documents'.format(
            len(self.vocabulary), self.inverted.N)


class Contingency2(object):
    """Counts of the four presence patterns of two terms.

    Args:
        n11: Documents containing both terms.
        n10: Documents containing the first term and not the second.
        n01: Documents containing the second term and not the first.
        n00: Documents containing neither.
    """
    __slots__ = ('n11', 'n10', 'n01', 'n00')

    def __init__(self, n11, n10, n01, n00):
        assert min(n11, n10, n01, n00) >= 0, 'Counts must be non-negative.'
        self.n11, self.n10, self.n01, self.n00 = n11, n10, n01, n00

    @property
    def N(self):
        return self.n11 + self.n10 + self.n01 + self.n00

    @property
    def cells(self):
        """Get a tuple of (n11, n10, n01, n00)."""
        return (self.n11, self.n10, self.n01, self.n00)

    def __eq__(self, other):
        return isinstance(other, Contingency2) and self.cells == other.cells

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'Contingency2: n11={} n10={} n01={} n00={}'.format(*self.cells)


class Contingency3(object):
    """Counts of the eight presence patterns of three terms (alpha, beta, gamma).

    Args:
        counts: A dictionary with (i, j, k) presence tuples as keys, where each
            of i, j and k is 0 or 1, and document counts as values.
    """
    __slots__ = ('_counts',)
    PATTERNS = tuple((i, j, k) for i in (1, 0) for j in (1, 0) for k in (1, 0))

    def __init__(self, counts):
        assert set(counts) == set(self.PATTERNS), 'All eight patterns are required.'
        assert min(counts.values()) >= 0, 'Counts must be non-negative.'
        self._counts = dict(counts)

    @property
    def N(self):
        return sum(self._counts.values())

    def cell(self, i, j, k):
        """Get the count of documents with presence pattern (i, j, k)."""
        return self._counts[(i, j, k)]

    def marginalize(self, axis):
        """Sum out one variable and get the Contingency2 of the other two.

        Args:
            axis: 0 to sum out alpha, 1 for beta and 2 for gamma.
        """
        pair = Counter()
        for pattern, count in self._counts.items():
            rest = tuple(v for a, v in enumerate(pattern) if a != axis)
            pair[rest] += count
        return Contingency2(pair[(1, 1)], pair[(1, 0)], pair[(0, 1)], pair[(0, 0)])

    def __eq__(self, other):
        return isinstance(other, Contingency3) and self._counts == other._counts

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'Contingency3: {}'.format(' '.join(
            'n{}{}{}={}'.format(i, j, k, self._counts[(i, j, k)])
            for i, j, k in self.PATTERNS))


def build_inverted_file(documents):
    """Build the Vocabulary and the InvertedFile of a list of tokenized Documents.

    Args:
        documents: A non-empty list of Document objects.

    Returns:
        A tuple with two elements

        -   vocabulary -- A Vocabulary of every distinct token.

        -   inverted -- An InvertedFile with the term frequency of each term
            in each document.
    """
    if not documents:
        raise ValueError('Cannot build an inverted file of an empty corpus.')
    frequencies = [(doc.doc_id, Counter(doc.tokens)) for doc in documents]
    vocabulary = Vocabulary(t for _, counts in frequencies for t in counts)
    postings = [[] for _ in range(len(vocabulary))]
    for doc_id, counts in sorted(frequencies, key=lambda x: x[0]):
        for term, tf in counts.items():
            postings[vocabulary.term_id(term)].append((doc_id, tf))
    inverted = InvertedFile([doc_id for doc_id, _ in frequencies], postings)
    _logger.info('Indexed %d documents with %d terms.', inverted.N, len(vocabulary))
    return vocabulary, inverted


def intersect(first, second):
    """Intersect two sorted tuples of document ids by merging them."""
    result = []
    i, j = 0, 0
    len_1, len_2 = len(first), len(second)
    while i < len_1 and j < len_2:
        a, b = first[i], second[j]
        if a == b:
            result.append(a)
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return result


def pair_counts(inv, alpha, beta):
    """Get the Contingency2 of two distinct terms.

    Args:
        inv: An InvertedFile.
        alpha: Term id of the first term.
        beta: Term id of the second term.
    """
    if alpha == beta:
        raise ValueError('pair_counts needs two distinct terms. Got {} twice.'.format(
            alpha))
    n11 = len(intersect(inv.documents(alpha), inv.documents(beta)))
    df_a, df_b = inv.df[alpha], inv.df[beta]
    return Contingency2(n11, df_a - n11, df_b - n11, inv.N - df_a - df_b + n11)


def triple_counts(inv, alpha, beta, gamma):
    """Get the Contingency3 of three pairwise distinct terms.

    Args:
        inv: An InvertedFile.
        alpha: Term id of the first term.
        beta: Term id of the second term.
        gamma: Term id of the conditioning term.
    """
    if len({alpha, beta, gamma}) != 3:
        raise ValueError('triple_counts needs three distinct terms. Got {}, {}, '
                         '{}.'.format(alpha, beta, gamma))
    docs_a, docs_b, docs_c = \
        inv.documents(alpha), inv.documents(beta), inv.documents(gamma)
    ab = intersect(docs_a, docs_b)
    n_ab = len(ab)
    n_ac = len(intersect(docs_a, docs_c))
    n_bc = len(intersect(docs_b, docs_c))
    n_abc = len(intersect(ab, docs_c))
    df_a, df_b, df_c = inv.df[alpha], inv.df[beta], inv.df[gamma]
    counts = {
        (1, 1, 1): n_abc,
        (1, 1, 0): n_ab - n_abc,
        (1, 0, 1): n_ac - n_abc,
        (0, 1, 1): n_bc - n_abc,
        (1, 0, 0): df_a - n_ab - n_ac + n_abc,
        (0, 1, 0): df_b - n_ab - n_bc + n_abc,
        (0, 0, 1): df_c - n_ac - n_bc + n_abc,
        (0, 0, 0): inv.N - df_a - df_b - df_c + n_ab + n_ac + n_bc - n_abc
    }
    return Contingency3(counts)


def index_to_string(index):
    """Get the text of an Index in the PQEIDX format.

    The format is line oriented: a ``PQEIDX 1`` header, a comment, the
    tokenizer options, the document count and ids, a vocabulary block of
    ``term_id TAB term`` lines, a postings block of
    ``term_id TAB doc_id:tf,doc_id:tf,...`` lines and an ``END`` trailer.
    """
    options = index.options.to_dict()
    lines = ['{} {}'.format(INDEX_FORMAT, INDEX_VERSION),
             header_comment('index', **options)]
    lines.extend('OPTION {} {}'.format(key, options[key]) for key in sorted(options))
    inv, vocab = index.inverted, index.vocabulary
    lines.append('N {}'.format(inv.N))
    lines.append('DOCS {}'.format(','.join(str(d) for d in inv.doc_ids)))
    lines.append('VOCABULARY {}'.format(len(vocab)))
    lines.extend('{}\t{}'.format(i, term) for i, term in enumerate(vocab.terms))
    lines.append('POSTINGS {}'.format(len(inv)))
    for term_id in range(len(inv)):
        lines.append('{}\t{}'.format(term_id, ','.join(
            '{}:{}'.format(d, tf) for d, tf in inv.postings(term_id))))
    lines.append('END')
    return '\n'.join(lines) + '\n'


def save_index(index, sink):
    """Write an Index to a file object in the PQEIDX format."""
    sink.write(index_to_string(index))


def load_index(source):
    """Load an Index from a file object in the PQEIDX format.

    Args:
        source: A file object or an iterable of lines.
    """
    lines = [line.rstrip('\r\n') for line in source]
    lines = [line for line in lines if line and not line.startswith('#')]
    if not lines or lines[0].split() != [INDEX_FORMAT, INDEX_VERSION]:
        found = lines[0] if lines else 'an empty file'
        raise ValueError('Expected a "{} {}" header but found {}.'.format(
            INDEX_FORMAT, INDEX_VERSION, found))
    if lines[-1] != 'END':
        raise ValueError('The index file is truncated (no END line).')
    lines = lines[1:-1]
    pos, options = 0, {}
    while pos < len(lines) and lines[pos].startswith('OPTION '):
        _, key, value = lines[pos].split(' ', 2)
        options[key] = value
        pos += 1
    try:
        n_docs = int(lines[pos].split()[1])
        doc_ids = [int(d) for d in lines[pos + 1].split(' ', 1)[1].split(',') if d]
        n_terms = int(lines[pos + 2].split()[1])
        vocab_lines = lines[pos + 3:pos + 3 + n_terms]
        post_head = lines[pos + 3 + n_terms]
        post_lines = lines[pos + 4 + n_terms:]
    except (IndexError, ValueError):
        raise ValueError('The index file is truncated or malformed.')
    if len(doc_ids) != n_docs:
        raise ValueError('The index lists {} documents but declares N={}.'.format(
            len(doc_ids), n_docs))
    if post_head != 'POSTINGS {}'.format(n_terms) or len(post_lines) != n_terms:
        raise ValueError('The index postings block does not match its {} '
                         'terms.'.format(n_terms))
    terms, postings = [], []
    for expected, (v_line, p_line) in enumerate(zip(vocab_lines, post_lines)):
        v_id, term = v_line.split('\t')
        p_id, entries = p_line.split('\t')
        if int(v_id) != expected or int(p_id) != expected:
            raise ValueError('Term ids of the index are not dense at {}.'.format(
                expected))
        terms.append(term)
        postings.append([tuple(int(v) for v in e.split(':'))
                         for e in entries.split(',')])
    vocabulary = Vocabulary(terms)
    if vocabulary.terms != tuple(terms):
        raise ValueError('The index vocabulary is not in lexicographic order.')
    return Index(vocabulary, InvertedFile(doc_ids, postings),
                 IndexOptions.from_dict(options))


def write_index(index, file_path):
    """Write an Index to a PQEIDX file."""
    return write_to_file(file_path, index_to_string(index), mkdir=True)


def read_index(file_path):
    """Read an Index from a PQEIDX file."""
    with io.open(file_path, 'r', encoding='utf-8') as inf:
        try:
            return load_index(inf)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))
