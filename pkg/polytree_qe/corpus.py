"""Functions for reading SMART test collections and turning text into terms.

SMART collections (Adi, Cranfield, Medlars, ...) are made of records that start
with a ``.I <id>`` line followed by section markers such as ``.T`` (title),
``.A`` (authors), ``.W`` (abstract), ``.B`` (bibliography) and ``.X``
(cross references). Documents and queries share this layout.
"""
import io
import os
import re
import logging

try:
    from nltk.stem.porter import PorterStemmer
except ImportError as e:
    raise ImportError('Failed to import nltk.\n{}'.format(e))

from .config import DEFAULT_MIN_LEN, DEFAULT_STEM, DEFAULT_STOPLIST, parse_bool

_logger = logging.getLogger(__name__)

# sections whose text is indexed; authors, citations and cross references are not
INDEXED_FIELDS = ('T', 'W')
STOPLIST_FILE = os.path.join(os.path.dirname(__file__), 'data', 'stoplist.txt')

_ID_LINE = re.compile(r'^\.I\s+(\S+)\s*$')
_MARKER_LINE = re.compile(r'^\.([A-Z])\s*$')
_SPLITTER = re.compile(r'[^a-z0-9]+')
_STOPLISTS = {}
_STEMMER = PorterStemmer()


def load_stoplist(stoplist=DEFAULT_STOPLIST):
    """Get a frozenset of stopwords.

    Args:
        stoplist: Path to a file with one stopword per line or 'default' for
            the standard English stoplist bundled with this package.
    """
    path = STOPLIST_FILE if stoplist == DEFAULT_STOPLIST else stoplist
    try:
        return _STOPLISTS[path]
    except KeyError:
        with io.open(path, 'r', encoding='utf-8') as inf:
            words = frozenset(
                line.strip().lower() for line in inf
                if line.strip() and not line.startswith('#'))
        _STOPLISTS[path] = words
        return words


class IndexOptions(object):
    """Options of the text normalization applied to documents and queries.

    Args:
        stoplist: Path to a stoplist file or 'default' for the bundled one.
        stem: Boolean to note whether Porter suffix stripping is applied
            after all other normalization. (Default: True).
        min_len: Integer for the minimum length of a kept token. (Default: 2).
    """
    __slots__ = ('stoplist', 'stem', 'min_len', '_stopwords')

    def __init__(self, stoplist=DEFAULT_STOPLIST, stem=DEFAULT_STEM,
                 min_len=DEFAULT_MIN_LEN):
        self.stoplist = stoplist
        self.stem = stem
        self.min_len = min_len
        self._stopwords = None

    @classmethod
    def from_dict(cls, data):
        """Create IndexOptions from a dictionary of text values."""
        return cls(data.get('stoplist', DEFAULT_STOPLIST),
                   parse_bool(data.get('stem', DEFAULT_STEM)),
                   int(data.get('min_len', DEFAULT_MIN_LEN)))

    @property
    def stopwords(self):
        """Get a frozenset of the words dropped by the tokenizer."""
        if self._stopwords is None:
            self._stopwords = load_stoplist(self.stoplist)
        return self._stopwords

    def to_dict(self):
        """Get the options as a dictionary of text values."""
        return {
            'stoplist': self.stoplist,
            'stem': 'true' if self.stem else 'false',
            'min_len': str(self.min_len)
        }

    def __eq__(self, other):
        return isinstance(other, IndexOptions) and \
            self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'IndexOptions: stoplist={} stem={} min_len={}'.format(
            self.stoplist, self.stem, self.min_len)


def tokenize(raw_text, options=None):
    """Turn raw text into an ordered list of normalized terms.

    Text is lowercased and split on every non-alphanumeric character. Pure
    digit tokens, tokens shorter than min_len and stopwords are dropped and,
    when stemming is on, the Porter stemmer is applied last.

    Args:
        raw_text: Text to be tokenized.
        options: An IndexOptions object. If None, the default options are used.

    Returns:
        A list of terms in order of appearance. Repeated terms are kept.
    """
    options = options or IndexOptions()
    stopwords = options.stopwords
    terms = []
    for token in _SPLITTER.split(raw_text.lower()):
        if len(token) < options.min_len or token.isdigit() or token in stopwords:
            continue
        terms.append(_STEMMER.stem(token) if options.stem else token)
    return terms


class Document(object):
    """A record of a SMART collection.

    Args:
        doc_id: Positive integer for the identifier of the record.
        fields: Dictionary with the section marker (eg. 'T', 'W') as keys and
            the raw text of the section as values.
        tokens: List of normalized terms of the indexed sections.
    """
    __slots__ = ('doc_id', 'fields', 'tokens')

    def __init__(self, doc_id, fields=None, tokens=None):
        self.doc_id = doc_id
        self.fields = fields or {}
        self.tokens = tokens or []

    @property
    def text(self):
        """Get the raw text that is indexed (title and abstract)."""
        return '\n'.join(self.fields[f] for f in INDEXED_FIELDS if f in self.fields)

    def __repr__(self):
        return 'Document: {} ({} tokens)'.format(self.doc_id, len(self.tokens))


def _parse_id(text, line_number):
    try:
        doc_id = int(text)
    except ValueError:
        raise ValueError('Line {}: record id "{}" is not an integer.'.format(
            line_number, text))
    if doc_id < 1:
        raise ValueError('Line {}: record id {} is not positive.'.format(
            line_number, doc_id))
    return doc_id


def parse_smart_collection(text_stream, options=None):
    """Parse a SMART collection into a list of Documents.

    Args:
        text_stream: A file object or an iterable of lines in the SMART layout.
        options: An IndexOptions object used to tokenize the title and the
            abstract of each record. If None, the default options are used.

    Returns:
        A list of Document objects in file order.
    """
    documents, seen = [], set()
    current, marker, lines = None, None, []

    def close_section():
        if current is not None and marker is not None:
            current.fields[marker] = '\n'.join(lines).strip()

    for line_number, line in enumerate(text_stream, 1):
        line = line.rstrip('\r\n')
        id_match = _ID_LINE.match(line)
        if id_match:
            close_section()
            doc_id = _parse_id(id_match.group(1), line_number)
            if doc_id in seen:
                raise ValueError('Line {}: duplicate record id {}.'.format(
                    line_number, doc_id))
            seen.add(doc_id)
            current, marker, lines = Document(doc_id), None, []
            documents.append(current)
            continue
        marker_match = _MARKER_LINE.match(line)
        if marker_match:
            if current is None:
                raise ValueError('Line {}: section marker before any .I line.'.format(
                    line_number))
            close_section()
            marker, lines = marker_match.group(1), []
        elif line.strip():
            if current is None:
                raise ValueError('Line {}: content before any .I line.'.format(
                    line_number))
            if marker is None:
                raise ValueError('Line {}: content of record {} before any section '
                                 'marker.'.format(line_number, current.doc_id))
            lines.append(line)
    close_section()

    for doc in documents:
        doc.tokens = tokenize(doc.text, options)
    return documents


def read_smart_collection(file_path, options=None):
    """Read a SMART collection file into a list of Documents.

    Args:
        file_path: Path to a SMART documents or queries file.
        options: An IndexOptions object. If None, the default options are used.
    """
    with io.open(file_path, 'r', encoding='utf-8', errors='replace') as inf:
        try:
            return parse_smart_collection(inf, options)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))


def parse_qrels(text_stream):
    """Parse relevance judgments into a dictionary of sets.

    Each line holds a query id and a relevant document id separated by white
    space. Any further columns are ignored.

    Args:
        text_stream: A file object or an iterable of lines.

    Returns:
        A dictionary with query ids as keys and sets of relevant document ids
        as values.
    """
    qrels = {}
    for line_number, line in enumerate(text_stream, 1):
        parts = line.split()
        if not parts or parts[0].startswith('#'):
            continue
        if len(parts) < 2:
            raise ValueError('Line {}: expected "query_id doc_id" but got "{}".'.format(
                line_number, line.strip()))
        try:
            query_id, doc_id = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError('Line {}: ids must be integers. Got "{}".'.format(
                line_number, line.strip()))
        qrels.setdefault(query_id, set()).add(doc_id)
    return qrels


def read_qrels(file_path):
    """Read a relevance judgments file. See parse_qrels."""
    with io.open(file_path, 'r', encoding='utf-8') as inf:
        try:
            return parse_qrels(inf)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))


def parse_queries(text_stream, options=None):
    """Parse a SMART query file into a list of (query_id, tokens) tuples.

    Queries share the layout of documents, so the same sections are tokenized
    with the same options.

    Args:
        text_stream: A file object or an iterable of lines.
        options: The IndexOptions of the index the queries will be run against.
    """
    return [(doc.doc_id, doc.tokens) for doc in parse_smart_collection(text_stream, options)]


def read_queries(file_path, options=None):
    """Read a SMART query file. See parse_queries."""
    with io.open(file_path, 'r', encoding='utf-8', errors='replace') as inf:
        try:
            return parse_queries(inf, options)
        except ValueError as e:
            raise ValueError('{}: {}'.format(file_path, e))
