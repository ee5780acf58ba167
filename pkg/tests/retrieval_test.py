# coding=utf-8
from polytree_qe.retrieval import DocVector, doc_vectors, score, search, search_all, \
    RankedRun, load_run, write_run, read_run
from polytree_qe.expansion import QueryVector, load_query_file
from polytree_qe.corpus import IndexOptions, read_smart_collection, \
    parse_smart_collection
from polytree_qe.index import Index

import io
import os
import pytest
import numpy as np


def _mini_index():
    options = IndexOptions(stem=False)
    return Index.from_documents(
        read_smart_collection('./tests/assets/mini.all', options), options)


def _query(*pairs):
    return QueryVector(1, [(t, w, 'original') for t, w in pairs])


def test_score():
    """Test the score method with hand computed inner products."""
    doc = DocVector(1, {'a': 1, 'b': 3, 'c': 1})
    assert score(doc, _query(('a', 2), ('b', 1))) == 5.0
    assert score(DocVector(1, {'a': 1}), _query(('a', 1))) == 1.0
    assert score(doc, _query(('z', 4))) == 0.0


def test_search_mini():
    """Test the search method against the hand ranked sample collection."""
    idx = _mini_index()
    queries = load_query_file('./tests/assets/mini.qry', idx.options)
    assert search(idx, queries[0]) == [(1, 2.0), (5, 1.0)]
    assert search(idx, queries[1]) == [(2, 3.0), (1, 1.0), (5, 1.0)]
    assert search(idx, queries[2]) == [(3, 3.0), (4, 3.0), (1, 1.0), (5, 1.0)]
    assert search(idx, queries[2], k=2) == [(3, 3.0), (4, 3.0)]
    with pytest.raises(ValueError, match='k must be at least 1'):
        search(idx, queries[2], k=0)


def test_search_out_of_vocabulary():
    """Test that a query without indexed terms retrieves nothing."""
    assert search(_mini_index(), _query(('zebra', 1))) == []


def test_search_single_document():
    """Test a collection of one document."""
    options = IndexOptions(stem=False)
    docs = parse_smart_collection(io.StringIO('.I 9\n.W\nlonely cat\n'), options)
    idx = Index.from_documents(docs, options)
    assert search(idx, _query(('cat', 1))) == [(9, 1.0)]


def test_search_matches_score():
    """Test that term at a time accumulation equals document at a time scoring."""
    idx = _mini_index()
    vectors = doc_vectors(idx)
    rng = np.random.default_rng(12)
    terms = list(idx.vocabulary.terms) + ['zebra']
    for _ in range(50):
        chosen = rng.choice(len(terms), size=int(rng.integers(1, 5)), replace=False)
        query = _query(*[(terms[i], float(rng.uniform(0.1, 3))) for i in chosen])
        expected = sorted(((d.doc_id, score(d, query)) for d in vectors
                           if score(d, query) > 0), key=lambda x: (-x[1], x[0]))
        assert search(idx, query) == expected


def test_search_expansion_only_adds():
    """Test that an added term never removes a document from the full ranking."""
    idx = _mini_index()
    query = _query(('cat', 1))
    expanded = QueryVector(1, query.entries + (('tree', 0.6, 'added'),))
    before = set(d for d, _ in search(idx, query))
    after = dict(search(idx, expanded))
    assert before <= set(after)
    for doc_id, value in search(idx, query):
        assert after[doc_id] >= value


def test_search_all_and_run_file():
    """Test the search_all method and the run file format."""
    idx = _mini_index()
    queries = load_query_file('./tests/assets/mini.qry', idx.options)
    queries.append(QueryVector(4, [('zebra', 1, 'original')]))
    run = search_all(idx, queries)
    assert run.query_ids == [1, 2, 3, 4]
    assert run[4] == []
    assert search_all(idx, queries, jobs=2).to_string() == run.to_string()

    text = run.to_string()
    lines = text.splitlines()
    assert lines[0].startswith('# polytree-qe ')
    assert lines[1] == '1\t1\t1\t2'
    assert lines[3] == '2\t1\t2\t3'
    loaded = load_run(io.StringIO(text))
    assert loaded.query_ids == [1, 2, 3]
    assert loaded.documents(3) == [3, 4, 1, 5]
    assert loaded.documents(4) == []
    assert loaded.to_string() == text


def test_ranked_run():
    """Test the RankedRun class."""
    run = RankedRun({1: [(3, 2.0), (1, 1.0)]})
    assert run[1] == [(3, 2.0), (1, 1.0)]
    assert run.documents(1) == [3, 1]
    assert 1 in run and 2 not in run
    with pytest.raises(AssertionError):
        RankedRun({1: [(3, 2.0), (3, 1.0)]})


def test_load_run_errors():
    """Test the errors of the load_run method."""
    with pytest.raises(ValueError, match='Line 1'):
        load_run(io.StringIO('1\t1\t3\n'))
    with pytest.raises(ValueError, match='out of order'):
        load_run(io.StringIO('1\t2\t3\t1.0\n'))


def test_write_read_run():
    """Test the write_run and read_run methods."""
    run = RankedRun({1: [(3, 2.5), (1, 1.0)], 2: [(4, 7.0)]})
    file_path = './tests/assets/temp/sample.run'
    write_run(run, file_path, k=15)
    with io.open(file_path, 'r', encoding='utf-8') as inf:
        assert 'k=15' in inf.readline()
    assert read_run(file_path).to_string(15) == run.to_string(15)
    os.remove(file_path)
