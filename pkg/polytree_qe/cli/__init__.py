"""Command Line Interface (CLI) entry point for polytree-qe.

Note:

    Do not import this module in your code directly. For running the commands,
    execute them from the command line or as a subprocess
    (e.g. ``subprocess.call(['polytree-qe', 'learn', ...])``)

Polytree-qe is using click (https://click.palletsprojects.com/en/7.x/) for
creating the CLI.
"""

try:
    import click
except ImportError:
    raise ImportError(
        'click module is not installed. Try `pip install polytree-qe[cli]` command.'
    )

from polytree_qe.config import RunConfig, format_number
from polytree_qe.corpus import IndexOptions, read_smart_collection, read_qrels
from polytree_qe.index import Index, write_index, read_index
from polytree_qe.learner import learn as learn_network
from polytree_qe.network import read_network, write_network
from polytree_qe.expansion import load_query_file, all_query_posteriors, \
    expand_query_file, write_expanded, posteriors_to_string
from polytree_qe.retrieval import search_all, write_run, read_run
from polytree_qe.evaluation import report
from polytree_qe.battery import run_battery

from ladybug.futil import write_to_file

import sys
import logging
_logger = logging.getLogger(__name__)

_FILE = click.Path(exists=True, file_okay=True, dir_okay=False, resolve_path=True)


def _configure_logging(verbose):
    """Send the log records of the package to stderr."""
    package_logger = logging.getLogger('polytree_qe')
    for handler in package_logger.handlers:
        if getattr(handler, '_polytree_qe', False):
            handler.setStream(sys.stderr)  # stderr may have been swapped since
            break
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
        handler._polytree_qe = True
        package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def _resolve(config_file, **flags):
    """Merge the defaults, a configuration file and the flags into a RunConfig."""
    config = RunConfig.from_sources(config_file, **flags)
    click.echo('Effective configuration:\n{}'.format(config.to_text()), err=True)
    return config


def _require(config, *keys):
    for key in keys:
        if getattr(config, key) is None:
            raise ValueError('Missing value for "{}". Pass --{} or set it in the '
                             'configuration file.'.format(key, key))


def _index_options(config):
    return IndexOptions(config.stoplist, config.stem, config.min_len)


@click.group()
@click.version_option()
@click.option('--verbose', '-v', help='Log debugging messages.', is_flag=True,
              default=False)
def main(verbose):
    _configure_logging(verbose)


@main.command('index')
@click.option('--docs', help='Path to a SMART document collection.', type=_FILE,
              default=None)
@click.option('--out', help='Path to the output index file.', type=str, default=None)
@click.option('--stoplist', help='Path to a stoplist file. Use "default" for the '
              'bundled English stoplist.', type=str, default=None)
@click.option('--stem/--no-stem', help='Flag to note whether terms are stemmed.',
              default=None)
@click.option('--min-len', help='Minimum length of an indexed token.', type=int,
              default=None)
@click.option('--config', 'config_file', help='Path to a key=value configuration '
              'file.', type=_FILE, default=None)
def index(docs, out, stoplist, stem, min_len, config_file):
    """Index a SMART document collection into a PQEIDX file."""
    try:
        config = _resolve(config_file, docs=docs, out=out, stoplist=stoplist,
                          stem=stem, min_len=min_len)
        _require(config, 'docs', 'out')
        options = _index_options(config)
        documents = read_smart_collection(config.docs, options)
        idx = Index.from_documents(documents, options)
        write_index(idx, config.out)
        click.echo('Indexed {} documents and {} terms into {}'.format(
            idx.inverted.N, len(idx.vocabulary), config.out))
    except Exception as e:
        _logger.exception('Indexing the collection failed.\n{}'.format(e))
        sys.exit(1)
    else:
        sys.exit(0)


@main.command('learn')
@click.option('--index', 'index_file', help='Path to a PQEIDX index file.',
              type=_FILE, default=None)
@click.option('--confidence', help='Confidence level of the independence tests.',
              type=float, required=True)
@click.option('--out', help='Path to the output network file.', type=str, default=None)
@click.option('--max-parents', help='Maximum number of parents of a node.', type=int,
              default=None)
@click.option('--jobs', help='Number of worker threads.', type=int, default=None)
@click.option('--config', 'config_file', help='Path to a key=value configuration '
              'file.', type=_FILE, default=None)
def learn(index_file, confidence, out, max_parents, jobs, config_file):
    """Learn a polytree thesaurus from an index."""
    try:
        config = _resolve(config_file, index=index_file, out=out,
                          max_parents=max_parents, jobs=jobs)
        _require(config, 'index', 'out')
        idx = read_index(config.index)
        net = learn_network(idx.inverted, confidence, idx.vocabulary,
                            config.max_parents, config.jobs)
        write_network(net, config.out)
        click.echo('Learned a network with {} nodes and {} edges into {}'.format(
            net.node_count, len(net.edges), config.out))
    except Exception as e:
        _logger.exception('Learning the network failed.\n{}'.format(e))
        sys.exit(1)
    else:
        sys.exit(0)


@main.command('expand')
@click.option('--net', 'net_file', help='Path to a PQENET network file.', type=_FILE,
              required=True)
@click.option('--queries', help='Path to a SMART query file.', type=_FILE,
              default=None)
@click.option('--index', 'index_file', help='Path to the PQEIDX index file whose '
              'options are used to tokenize the queries.', type=_FILE, default=None)
@click.option('--threshold', help='Posterior threshold of added terms.', type=float,
              required=True)
@click.option('--out', help='Path to the output expanded query file.', type=str,
              default=None)
@click.option('--dump-posteriors', help='Optional path to a file for the posterior '
              'of every node given each query.', type=str, default=None)
@click.option('--jobs', help='Number of worker threads.', type=int, default=None)
@click.option('--config', 'config_file', help='Path to a key=value configuration '
              'file.', type=_FILE, default=None)
def expand(net_file, queries, index_file, threshold, out, dump_posteriors, jobs,
           config_file):
    """Expand the queries of a query file with a learned network."""
    try:
        config = _resolve(config_file, queries=queries, index=index_file, out=out,
                          jobs=jobs)
        _require(config, 'queries', 'out')
        if config.index is not None:
            options = read_index(config.index).options
        else:
            _logger.warning('No index was given; the queries are tokenized with the '
                            'configured stoplist, stem and min_len, which must match '
                            'the index that is searched later.')
            options = _index_options(config)
        net = read_network(net_file)
        query_list = load_query_file(config.queries, options)
        posteriors = all_query_posteriors(query_list, net, config.jobs)
        if dump_posteriors is not None:
            write_to_file(dump_posteriors,
                          posteriors_to_string(query_list, posteriors, net), mkdir=True)
        expanded = expand_query_file(query_list, net, threshold, posteriors)
        write_expanded(expanded, config.out, net.confidence, threshold)
        click.echo('Expanded {} queries into {}'.format(len(expanded), config.out))
    except Exception as e:
        _logger.exception('Expanding the queries failed.\n{}'.format(e))
        sys.exit(1)
    else:
        sys.exit(0)


@main.command('search')
@click.option('--index', 'index_file', help='Path to a PQEIDX index file.',
              type=_FILE, default=None)
@click.option('--queries', help='Path to a SMART query file or an expanded query '
              'file (.exp).', type=_FILE, default=None)
@click.option('--out', help='Path to the output run file.', type=str, default=None)
@click.option('-k', help='Number of documents per query. By default every document '
              'with a positive score is ranked.', type=int, default=None)
@click.option('--jobs', help='Number of worker threads.', type=int, default=None)
@click.option('--config', 'config_file', help='Path to a key=value configuration '
              'file.', type=_FILE, default=None)
def search(index_file, queries, out, k, jobs, config_file):
    """Rank the documents of an index for each query."""
    try:
        config = _resolve(config_file, index=index_file, queries=queries, out=out,
                          jobs=jobs)
        _require(config, 'index', 'queries', 'out')
        idx = read_index(config.index)
        query_list = load_query_file(config.queries, idx.options)
        run = search_all(idx, query_list, k, config.jobs)
        write_run(run, config.out, k)
        click.echo('Searched {} queries into {}'.format(len(run), config.out))
    except Exception as e:
        _logger.exception('Searching the queries failed.\n{}'.format(e))
        sys.exit(1)
    else:
        sys.exit(0)


@main.command('eval')
@click.option('--run', 'run_file', help='Path to a run file.', type=_FILE,
              required=True)
@click.option('--qrels', help='Path to a relevance judgments file.', type=_FILE,
              default=None)
@click.option('--baseline', 'baseline_file', help='Optional path to the run file of '
              'the baseline.', type=_FILE, default=None)
@click.option('-k', help='Cutoff of the fixed recall and precision.', type=int,
              default=None)
@click.option('--out', help='Optional path to the output report. By default the '
              'report is printed.', type=str, default=None)
@click.option('--config', 'config_file', help='Path to a key=value configuration '
              'file.', type=_FILE, default=None)
def eval_(run_file, qrels, baseline_file, k, out, config_file):
    """Evaluate a run with interpolated precision and fixed cutoff metrics."""
    try:
        config = _resolve(config_file, qrels=qrels, k=k, out=out)
        _require(config, 'qrels')
        baseline = read_run(baseline_file) if baseline_file is not None else None
        result = report(read_run(run_file), read_qrels(config.qrels), baseline,
                        config.k)
        if config.out is None:
            click.echo(result.to_tsv(), nl=False)
        else:
            write_to_file(config.out, result.to_tsv(), mkdir=True)
            click.echo('Average precision {:.4f} written to {}'.format(
                result.average, config.out))
    except Exception as e:
        _logger.exception('Evaluating the run failed.\n{}'.format(e))
        sys.exit(1)
    else:
        sys.exit(0)


@main.command('experiment')
@click.option('--docs', help='Path to a SMART document collection. Ignored when '
              '--index is given.', type=_FILE, default=None)
@click.option('--index', 'index_file', help='Path to a PQEIDX index file.',
              type=_FILE, default=None)
@click.option('--queries', help='Path to a SMART query file.', type=_FILE,
              default=None)
@click.option('--qrels', help='Path to a relevance judgments file.', type=_FILE,
              default=None)
@click.option('--confidences', help='Comma separated confidence levels.', type=str,
              default=None)
@click.option('--thresholds', help='Comma separated posterior thresholds.', type=str,
              default=None)
@click.option('--out', help='Path to the output folder.', type=str, default=None)
@click.option('-k', help='Cutoff of the fixed recall and precision.', type=int,
              default=None)
@click.option('--max-parents', help='Maximum number of parents of a node.', type=int,
              default=None)
@click.option('--jobs', help='Number of worker threads.', type=int, default=None)
@click.option('--config', 'config_file', help='Path to a key=value configuration '
              'file.', type=_FILE, default=None)
def experiment(docs, index_file, queries, qrels, confidences, thresholds, out, k,
               max_parents, jobs, config_file):
    """Run the full confidence x threshold expansion experiment."""
    try:
        config = _resolve(config_file, docs=docs, index=index_file, queries=queries,
                          qrels=qrels, confidences=confidences,
                          thresholds=thresholds, out=out, k=k,
                          max_parents=max_parents, jobs=jobs)
        _require(config, 'queries', 'qrels', 'out')
        if config.index is not None:
            idx = read_index(config.index)
        elif config.docs is not None:
            options = _index_options(config)
            idx = Index.from_documents(read_smart_collection(config.docs, options),
                                       options)
        else:
            raise ValueError('Missing value for "docs" or "index".')
        battery = run_battery(
            idx, load_query_file(config.queries, idx.options), read_qrels(config.qrels),
            config.confidences, config.thresholds, config.out, config.k, config.jobs,
            config.max_parents)
        best = battery.best_cell()
        click.echo('Baseline average precision: {:.4f}'.format(battery.baseline.average))
        if best is not None:
            click.echo('Best cell: confidence {} threshold {} with {:.4f}'.format(
                format_number(best.confidence), format_number(best.threshold),
                best.report.average))
        click.echo('Results written to {}'.format(config.out))
    except Exception as e:
        _logger.exception('Running the experiment failed.\n{}'.format(e))
        sys.exit(1)
    else:
        sys.exit(0)


if __name__ == "__main__":
    main()
