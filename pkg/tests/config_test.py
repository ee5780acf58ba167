# coding=utf-8
from polytree_qe.config import RunConfig, read_config_file, header_comment, \
    parse_bool, parse_number_list, format_number, validate_confidence, \
    validate_threshold, CONFIDENCES, THRESHOLDS, DEFAULT_K

import os
import io
import pytest


def test_defaults():
    """Test the default RunConfig."""
    config = RunConfig()
    assert config.confidences == CONFIDENCES
    assert config.thresholds == THRESHOLDS
    assert config.k == DEFAULT_K == 15
    assert config.stem
    assert config.jobs >= 1
    assert config.validate() is config


def test_read_config_file():
    """Test the read_config_file method with a sample file."""
    values = read_config_file('./tests/assets/sample.cfg')
    assert values == {'confidences': '0.95, 0.99', 'thresholds': '0.7', 'k': '10',
                      'stem': 'false', 'jobs': '1'}


def test_read_config_file_errors():
    """Test that unknown keys and malformed lines are rejected with a line number."""
    file_path = './tests/assets/temp/bad.cfg'
    if not os.path.isdir('./tests/assets/temp'):
        os.makedirs('./tests/assets/temp')
    with io.open(file_path, 'w', encoding='utf-8') as outf:
        outf.write('# comment\nk = 10\ncolour = blue\n')
    with pytest.raises(ValueError, match=':3: unknown configuration key "colour"'):
        read_config_file(file_path)
    with io.open(file_path, 'w', encoding='utf-8') as outf:
        outf.write('k 10\n')
    with pytest.raises(ValueError, match=':1: expected key=value'):
        read_config_file(file_path)
    os.remove(file_path)


def test_from_sources():
    """Test that flags override the configuration file which overrides the defaults."""
    config = RunConfig.from_sources('./tests/assets/sample.cfg', k=20, jobs=None)
    assert config.confidences == (0.95, 0.99)
    assert config.thresholds == (0.7,)
    assert config.k == 20
    assert config.jobs == 1
    assert config.stem is False
    assert config.max_parents == 12

    config = RunConfig.from_sources(None, stem=False, confidences='0.9,0.995')
    assert config.confidences == (0.9, 0.995)
    assert 'confidences=0.9,0.995' in config.to_text()


def test_invalid_config():
    """Test that invalid values are rejected."""
    with pytest.raises(ValueError, match='Unsupported confidence'):
        RunConfig.from_sources(None, confidences='0.8')
    with pytest.raises(ValueError, match='Threshold'):
        RunConfig.from_sources(None, thresholds='1.0')
    with pytest.raises(ValueError, match='not found'):
        RunConfig.from_sources(None, docs='./tests/assets/missing.all')
    with pytest.raises(ValueError, match='Unknown configuration key'):
        RunConfig().update({'colour': 'blue'})
    with pytest.raises(ValueError, match='k must be at least 1'):
        RunConfig.from_sources(None, k=0)
    with pytest.raises(ValueError, match='jobs must be at least 1'):
        RunConfig.from_sources(None, jobs=0)
    config = RunConfig()
    config.update({'max_parents': '0'})
    with pytest.raises(ValueError, match='max_parents must be at least 1'):
        config.validate()


def test_parsers():
    """Test the small value parsers."""
    assert parse_bool('Yes') is True
    assert parse_bool('0') is False
    with pytest.raises(ValueError):
        parse_bool('maybe')
    assert parse_number_list('0.5, 0.6,') == (0.5, 0.6)
    assert parse_number_list([1, 2]) == (1.0, 2.0)
    assert format_number(0.975) == '0.975'
    assert format_number(0.9) == '0.9'
    assert validate_confidence(0.99) == 0.99
    assert validate_threshold(0.5) == 0.5
    with pytest.raises(ValueError):
        validate_threshold(0)


def test_header_comment():
    """Test that the header lists parameters sorted by name."""
    first = header_comment('expand', threshold=0.7, confidence=0.95)
    second = header_comment('expand', confidence=0.95, threshold=0.7)
    assert first == second
    assert first.startswith('# polytree-qe ')
    assert first.endswith(' expand confidence=0.95 threshold=0.7')
    assert header_comment('index').endswith(' index')
