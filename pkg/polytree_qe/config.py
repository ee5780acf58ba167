"""Polytree_qe configurations.

Global defaults such as the supported confidence levels and the expansion
thresholds are stored here, together with the RunConfig that merges them with
a key=value configuration file and command line flags.
"""
import os
import io
import multiprocessing

try:  # Try to get the version of the installed distribution
    from importlib.metadata import version as _dist_version
except ImportError:  # Python < 3.8
    try:
        from importlib_metadata import version as _dist_version
    except ImportError:
        _dist_version = None


# confidence levels of the chi-square independence tests
CONFIDENCES = (0.90, 0.95, 0.975, 0.99, 0.995)
# posterior thresholds above which a term is added to a query
THRESHOLDS = (0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_K = 15  # number of documents for the fixed cutoff recall and precision
DEFAULT_MAX_PARENTS = 12  # a node with more parents has a 2^parents CPT
DEFAULT_MIN_LEN = 2
DEFAULT_STEM = True
DEFAULT_STOPLIST = 'default'  # the stoplist bundled in polytree_qe/data

# keys accepted in a configuration file
CONFIG_KEYS = ('docs', 'queries', 'qrels', 'index', 'out', 'stoplist', 'stem',
               'min_len', 'confidences', 'thresholds', 'k', 'jobs', 'max_parents')
PATH_KEYS = ('docs', 'queries', 'qrels', 'index')


def tool_version():
    """Get text for the installed version of polytree-qe (eg. '0.3.1')."""
    if _dist_version is None:
        return 'dev'
    try:
        return _dist_version('polytree-qe')
    except Exception:  # not installed; running from a source checkout
        return 'dev'


def header_comment(command, **params):
    """Get the header comment line written at the top of every output file.

    Args:
        command: Text for the command that produced the file (eg. 'learn').
        params: Effective parameters of the command. They are written sorted
            by name so that the header never depends on argument order.
    """
    values = ' '.join('{}={}'.format(key, params[key]) for key in sorted(params))
    line = '# polytree-qe {} {}'.format(tool_version(), command)
    return '{} {}'.format(line, values) if values else line


def default_jobs():
    """Get the number of available processors, used as the default worker count."""
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not available on Mac and Windows
        return multiprocessing.cpu_count()


def format_number(value):
    """Get the shortest text for a confidence or threshold (eg. 0.975 -> '0.975')."""
    return '{:g}'.format(value)


def parse_bool(value):
    """Parse text for a boolean option of a configuration file."""
    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    elif text in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('Invalid boolean value "{}". Use true or false.'.format(value))


def parse_number_list(value):
    """Parse comma separated text (eg. '0.9, 0.95') into a tuple of floats."""
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    return tuple(float(v) for v in str(value).split(',') if v.strip())


def validate_confidence(confidence):
    """Check that a confidence level is one of the supported CONFIDENCES."""
    if confidence not in CONFIDENCES:
        raise ValueError(
            'Unsupported confidence level {}. Choose from the following:\n{}'.format(
                confidence, ' '.join(format_number(c) for c in CONFIDENCES)))
    return confidence


def validate_threshold(threshold):
    """Check that a posterior threshold lies in the open interval (0, 1)."""
    if not 0 < threshold < 1:
        raise ValueError(
            'Threshold must be between 0 and 1 (exclusive). Got {}.'.format(threshold))
    return threshold


def read_config_file(config_file):
    """Read a plain key=value configuration file into a dictionary.

    Blank lines and lines starting with # are ignored. Values are returned as
    text; RunConfig takes care of converting them.

    Args:
        config_file: Path to the configuration file.
    """
    values = {}
    with io.open(config_file, 'r', encoding='utf-8') as inf:
        for line_number, line in enumerate(inf, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ValueError('{}:{}: expected key=value but got "{}".'.format(
                    config_file, line_number, line))
            key, value = [part.strip() for part in line.split('=', 1)]
            if key not in CONFIG_KEYS:
                raise ValueError('{}:{}: unknown configuration key "{}".'.format(
                    config_file, line_number, key))
            values[key] = value
    return values


class RunConfig(object):
    """Effective parameters of a pipeline run.

    Values are resolved with built-in defaults first, then a configuration
    file, then explicit command line flags.

    Args:
        docs: Path to a SMART collection of documents.
        queries: Path to a SMART query file.
        qrels: Path to a relevance judgments file.
        index: Path to a PQEIDX index file.
        out: Path to an output file or directory.
        stoplist: Path to a stoplist file or 'default' for the bundled one.
        stem: Boolean to note whether suffix-stripping stemming is applied.
        min_len: Minimum length of an indexed token.
        confidences: List of confidence levels.
        thresholds: List of posterior thresholds.
        k: Number of documents for the fixed cutoff metrics.
        jobs: Number of parallel workers.
        max_parents: Maximum number of parents of a network node.
    """
    __slots__ = CONFIG_KEYS

    def __init__(self, docs=None, queries=None, qrels=None, index=None, out=None,
                 stoplist=DEFAULT_STOPLIST, stem=DEFAULT_STEM, min_len=DEFAULT_MIN_LEN,
                 confidences=CONFIDENCES, thresholds=THRESHOLDS, k=DEFAULT_K,
                 jobs=None, max_parents=DEFAULT_MAX_PARENTS):
        self.docs = docs
        self.queries = queries
        self.qrels = qrels
        self.index = index
        self.out = out
        self.stoplist = stoplist
        self.stem = stem
        self.min_len = min_len
        self.confidences = tuple(confidences)
        self.thresholds = tuple(thresholds)
        self.k = k
        self.jobs = jobs if jobs is not None else default_jobs()
        self.max_parents = max_parents

    @classmethod
    def from_sources(cls, config_file=None, **flags):
        """Create a RunConfig from a configuration file and command line flags.

        Args:
            config_file: Optional path to a key=value configuration file.
            flags: Command line values. None values are ignored so that they
                do not override the configuration file.
        """
        config = cls()
        if config_file is not None:
            config.update(read_config_file(config_file))
        config.update({k: v for k, v in flags.items() if v is not None})
        return config.validate()

    def update(self, values):
        """Update the config from a dictionary of (text or typed) values."""
        for key, value in values.items():
            if key not in CONFIG_KEYS:
                raise ValueError('Unknown configuration key "{}".'.format(key))
            if key == 'stem':
                value = value if isinstance(value, bool) else parse_bool(value)
            elif key in ('min_len', 'k', 'jobs', 'max_parents'):
                value = int(value)
            elif key in ('confidences', 'thresholds'):
                value = parse_number_list(value)
            setattr(self, key, value)

    def validate(self):
        """Check all values and return the config itself."""
        for conf in self.confidences:
            validate_confidence(conf)
        for thres in self.thresholds:
            validate_threshold(thres)
        for key in ('k', 'jobs', 'min_len', 'max_parents'):
            if getattr(self, key) < 1:
                raise ValueError('{} must be at least 1. Got {}.'.format(
                    key, getattr(self, key)))
        for key in PATH_KEYS:
            path = getattr(self, key)
            if path is not None and not os.path.isfile(path):
                raise ValueError('The {} file was not found: {}'.format(key, path))
        if self.stoplist != DEFAULT_STOPLIST and not os.path.isfile(self.stoplist):
            raise ValueError('The stoplist file was not found: {}'.format(self.stoplist))
        return self

    def to_text(self):
        """Get the effective config as key=value lines."""
        lines = []
        for key in CONFIG_KEYS:
            value = getattr(self, key)
            if isinstance(value, tuple):
                value = ','.join(format_number(v) for v in value)
            lines.append('{}={}'.format(key, value))
        return '\n'.join(lines)

    def __repr__(self):
        return 'RunConfig:\n{}'.format(self.to_text())
