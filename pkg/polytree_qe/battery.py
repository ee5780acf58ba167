"""The expansion experiment: one thesaurus per confidence level, one expansion per threshold.

Every cell of the confidence x threshold grid is learned, expanded, searched
and evaluated against one shared unexpanded baseline. Networks, expanded
queries and runs go through their file formats before they are used, so each
cell matches the result of running the learn, expand, search and eval
commands by hand.
"""
import io
import os
import logging

try:
    from ladybug.futil import preparedir, write_to_file
except ImportError as e:
    raise ImportError('Failed to import ladybug.\n{}'.format(e))

from .config import CONFIDENCES, THRESHOLDS, DEFAULT_K, DEFAULT_MAX_PARENTS, \
    header_comment, format_number, validate_confidence, validate_threshold
from .evaluation import EvalReport, RECALL_LEVELS, LEVEL_COUNT, report, \
    percent_change, significance, format_change
from .expansion import all_query_posteriors, expand_query_file, expanded_to_string, \
    load_expanded, mean_added_terms
from .learner import learn
from .network import BayesNet
from .retrieval import search_all, load_run

_logger = logging.getLogger(__name__)


def network_name(confidence):
    return 'thesaurus_c{}.net'.format(format_number(confidence))


def cell_name(prefix, confidence, threshold, extension):
    return '{}_c{}_t{}.{}'.format(
        prefix, format_number(confidence), format_number(threshold), extension)


class BatteryCell(object):
    """The outcome of one (confidence, threshold) cell of the battery.

    Args:
        confidence: Confidence level of the thesaurus.
        threshold: Posterior threshold of the expansion.
        report: EvalReport of the cell against the baseline or None if the
            cell failed.
        added_terms: Mean number of added terms per query.
        error: Text of the error that made the cell fail.
    """
    __slots__ = ('confidence', 'threshold', 'report', 'added_terms', 'error')

    def __init__(self, confidence, threshold, report=None, added_terms=0.0, error=None):
        self.confidence = confidence
        self.threshold = threshold
        self.report = report
        self.added_terms = added_terms
        self.error = error

    @property
    def failed(self):
        return self.report is None

    def __repr__(self):
        state = 'failed' if self.failed else '{:.4f}'.format(self.report.average)
        return 'BatteryCell: c={} t={} {}'.format(
            format_number(self.confidence), format_number(self.threshold), state)


class BatteryReport(object):
    """The baseline report and all cells of an experiment battery."""

    def __init__(self, baseline, cells):
        self.baseline = baseline
        self.cells = list(cells)

    @property
    def succeeded(self):
        """Get the list of cells that did not fail."""
        return [c for c in self.cells if not c.failed]

    def best_cell(self):
        """Get the cell with the highest average precision or None."""
        cells = self.succeeded
        if not cells:
            return None
        return max(cells, key=lambda c: c.report.average)  # first one wins ties

    def average_levels(self):
        """Get the mean precision of each recall level over all successful cells."""
        cells = self.succeeded
        if not cells:
            return None
        return [sum(c.report.levels[i] for c in cells) / len(cells)
                for i in range(LEVEL_COUNT)]

    def average_report(self):
        """Get an EvalReport of the mean over all successful cells or None.

        The levels, recall at k and precision at k are each averaged over the
        cells and compared with the baseline.
        """
        cells = self.succeeded
        if not cells:
            return None
        recall = sum(c.report.recall for c in cells) / len(cells)
        precision = sum(c.report.precision for c in cells) / len(cells)
        return EvalReport(self.average_levels(), recall, precision, self.baseline.k,
                          self.baseline.query_count, self.baseline)

    def summary_to_tsv(self):
        """Get the summary table: one row per cell and the best cell."""
        lines = [header_comment('experiment'),
                 'confidence\tthreshold\taverage\tchange\tflag\trecall\tprecision\tadded']
        base = self.baseline
        lines.append('baseline\t-\t{:.4f}\t\t\t{:.4f}\t{:.4f}\t0'.format(
            base.average, base.recall, base.precision))
        for cell in self.cells:
            conf, thres = format_number(cell.confidence), format_number(cell.threshold)
            if cell.failed:
                lines.append('{}\t{}\tfailed\t\t\t\t\t'.format(conf, thres))
                continue
            result = cell.report
            lines.append('{}\t{}\t{:.4f}\t{}\t{}\t{:.4f}\t{:.4f}\t{:.2f}'.format(
                conf, thres, result.average, format_change(result.average_change),
                result.significance, result.recall, result.precision,
                cell.added_terms))
        best = self.best_cell()
        if best is not None:
            lines.append('best\t{}\t{}\t{:.4f}'.format(
                format_number(best.confidence), format_number(best.threshold),
                best.report.average))
        return '\n'.join(lines) + '\n'

    def average_to_tsv(self):
        """Get the baseline next to the mean over all cells.

        One row per recall level is followed by the Average, Recall and
        Precision rows, each with its percent change.
        """
        lines = [header_comment('experiment'), 'recall\tbaseline\taverage\tchange']
        mean = self.average_report()
        if mean is None:
            return '\n'.join(lines) + '\n'
        base = self.baseline
        for r, b, e in zip(RECALL_LEVELS, base.levels, mean.levels):
            lines.append('{:.1f}\t{:.4f}\t{:.4f}\t{}'.format(
                r, b, e, format_change(percent_change(b, e))))
        lines.append('Average\t{:.4f}\t{:.4f}\t{}\t{}'.format(
            base.average, mean.average, format_change(mean.average_change),
            significance(mean.average_change)))
        lines.append('Recall\t{:.4f}\t{:.4f}\t{}'.format(
            base.recall, mean.recall, format_change(mean.recall_change)))
        lines.append('Precision\t{:.4f}\t{:.4f}\t{}'.format(
            base.precision, mean.precision, format_change(mean.precision_change)))
        return '\n'.join(lines) + '\n'

    def __repr__(self):
        return 'BatteryReport: {} cells, {} failed'.format(
            len(self.cells), len(self.cells) - len(self.succeeded))


def _write(folder, name, text):
    if folder is not None:
        write_to_file(os.path.join(folder, name), text)


def run_battery(index, queries, qrels, confidences=CONFIDENCES, thresholds=THRESHOLDS,
                out_folder=None, k=DEFAULT_K, jobs=1, max_parents=DEFAULT_MAX_PARENTS):
    """Run the expansion experiment over a grid of confidences and thresholds.

    Args:
        index: An Index of the document collection.
        queries: A list of unexpanded QueryVectors.
        qrels: A dictionary of query_id: set of relevant doc ids.
        confidences: List of confidence levels, one thesaurus each.
        thresholds: List of posterior thresholds, one expansion each.
        out_folder: Optional folder for the networks, expanded queries, runs,
            reports and summary tables.
        k: Cutoff of the fixed recall and precision. (Default: 15).
        jobs: Number of worker threads. (Default: 1).
        max_parents: Maximum number of parents of a network node.

    Returns:
        A BatteryReport.
    """
    for conf in confidences:
        validate_confidence(conf)
    for thres in thresholds:
        validate_threshold(thres)
    if out_folder is not None:
        preparedir(out_folder, remove_content=False)

    run_text = search_all(index, queries, None, jobs).to_string()
    _write(out_folder, 'baseline.run', run_text)
    baseline_run = load_run(io.StringIO(run_text))
    baseline = report(baseline_run, qrels, k=k)
    _write(out_folder, 'baseline.tsv', baseline.to_tsv())
    _logger.info('Baseline average precision: %.4f.', baseline.average)

    cells = []
    for conf in confidences:
        try:
            net_text = learn(index.inverted, conf, index.vocabulary, max_parents,
                             jobs).to_string()
            _write(out_folder, network_name(conf), net_text)
            net = BayesNet.from_string(net_text)
            posteriors = all_query_posteriors(queries, net, jobs)
        except Exception as e:
            _logger.exception('Learning at confidence %s failed.', format_number(conf))
            cells.extend(BatteryCell(conf, t, error=str(e)) for t in thresholds)
            continue
        for thres in thresholds:
            try:
                cells.append(_run_cell(index, queries, qrels, net, posteriors, conf,
                                       thres, baseline_run, out_folder, k, jobs))
            except Exception as e:
                _logger.exception('Cell c=%s t=%s failed.', format_number(conf),
                                  format_number(thres))
                cells.append(BatteryCell(conf, thres, error=str(e)))
            _logger.info('%r', cells[-1])

    battery = BatteryReport(baseline, cells)
    _write(out_folder, 'summary.tsv', battery.summary_to_tsv())
    _write(out_folder, 'average.tsv', battery.average_to_tsv())
    return battery


def _run_cell(index, queries, qrels, net, posteriors, conf, thres, baseline_run,
              out_folder, k, jobs):
    expanded = expand_query_file(queries, net, thres, posteriors)
    exp_text = expanded_to_string(expanded, net.confidence, thres)
    _write(out_folder, cell_name('queries', conf, thres, 'exp'), exp_text)
    expanded = load_expanded(io.StringIO(exp_text))

    run_text = search_all(index, expanded, None, jobs).to_string()
    _write(out_folder, cell_name('run', conf, thres, 'run'), run_text)
    run = load_run(io.StringIO(run_text))

    cell_report = report(run, qrels, baseline_run, k)
    _write(out_folder, cell_name('report', conf, thres, 'tsv'), cell_report.to_tsv())
    _write(out_folder, cell_name('recall_precision', conf, thres, 'dat'),
           cell_report.to_dat())
    return BatteryCell(conf, thres, cell_report, mean_added_terms(expanded))
