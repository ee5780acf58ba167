# coding=utf-8
from polytree_qe.corpus import IndexOptions, tokenize, parse_smart_collection, \
    read_smart_collection, parse_qrels, read_qrels, read_queries, load_stoplist

import io
import pytest


def test_tokenize():
    """Test the tokenize method with stopwords, digits and short tokens."""
    options = IndexOptions(stem=False)
    assert tokenize('The cat and 42 dogs, x-ray: a CAT!', options) == \
        ['cat', 'dogs', 'ray', 'cat']
    assert tokenize('', options) == []


def test_tokenize_stemming():
    """Test that stemming is applied after the other normalization."""
    assert tokenize('Retrieval systems retrieving documents') == \
        ['retriev', 'system', 'retriev', 'document']
    assert tokenize('Retrieval systems', IndexOptions(stem=False)) == \
        ['retrieval', 'systems']


def test_tokenize_min_len():
    """Test the min_len option of the tokenize method."""
    options = IndexOptions(stem=False, min_len=4)
    assert tokenize('cat bird tree', options) == ['bird', 'tree']


def test_load_stoplist():
    """Test the bundled stoplist."""
    words = load_stoplist()
    assert 'the' in words
    assert 'and' in words
    assert 'cat' not in words
    assert all(w == w.lower() for w in words)


def test_index_options_dict():
    """Test the IndexOptions to_dict and from_dict methods."""
    options = IndexOptions(stem=False, min_len=3)
    assert options.to_dict() == {'stoplist': 'default', 'stem': 'false', 'min_len': '3'}
    assert IndexOptions.from_dict(options.to_dict()) == options
    assert IndexOptions.from_dict({}) == IndexOptions()


def test_read_smart_collection():
    """Test the read_smart_collection method with the sample collection."""
    docs = read_smart_collection('./tests/assets/mini.all', IndexOptions(stem=False))
    assert [d.doc_id for d in docs] == [1, 2, 3, 4, 5]
    assert docs[0].fields['A'] == 'Nobody, A.'
    assert docs[0].tokens == ['cat', 'dog', 'cat', 'fish']
    assert docs[3].tokens == ['rock', 'rock', 'rock']


def test_parse_smart_collection_multiline():
    """Test that sections may span several lines."""
    text = '.I 7\n.T\nfirst line\nsecond line\n.W\nbody\n'
    docs = parse_smart_collection(io.StringIO(text), IndexOptions(stem=False))
    assert len(docs) == 1
    assert docs[0].fields['T'] == 'first line\nsecond line'
    assert docs[0].tokens == ['first', 'line', 'second', 'line', 'body']


def test_parse_smart_collection_errors():
    """Test the errors of the parse_smart_collection method."""
    with pytest.raises(ValueError, match='Line 1'):
        parse_smart_collection(io.StringIO('some text\n.I 1\n'))
    with pytest.raises(ValueError, match='duplicate'):
        parse_smart_collection(io.StringIO('.I 1\n.W\na\n.I 1\n.W\nb\n'))
    with pytest.raises(ValueError, match='not an integer'):
        parse_smart_collection(io.StringIO('.I one\n'))
    with pytest.raises(ValueError, match='not positive'):
        parse_smart_collection(io.StringIO('.I 0\n'))
    with pytest.raises(ValueError, match='before any section'):
        parse_smart_collection(io.StringIO('.I 1\ntext\n'))


def test_read_queries():
    """Test the read_queries method."""
    queries = read_queries('./tests/assets/mini.qry', IndexOptions(stem=False))
    assert queries == [(1, ['cat']), (2, ['dog', 'bird']), (3, ['fish', 'tree', 'rock'])]


def test_parse_qrels():
    """Test the parse_qrels method."""
    text = '# comment\n1 3 0 0\n1 5\n\n2 4 0 0\n'
    assert parse_qrels(io.StringIO(text)) == {1: {3, 5}, 2: {4}}
    with pytest.raises(ValueError, match='Line 1'):
        parse_qrels(io.StringIO('1\n'))
    with pytest.raises(ValueError, match='integers'):
        parse_qrels(io.StringIO('a b\n'))


def test_read_qrels():
    """Test the read_qrels method with the sample judgments."""
    qrels = read_qrels('./tests/assets/mini.rel')
    assert qrels == {1: {1, 5}, 2: {2, 5}, 3: {3, 4}}
