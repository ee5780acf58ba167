"""Retrieval effectiveness: interpolated precision at ten recall levels and fixed cutoff metrics."""
import logging

try:
    from ladybug.futil import write_to_file
except ImportError as e:
    raise ImportError('Failed to import ladybug.\n{}'.format(e))

from .config import DEFAULT_K, header_comment

_logger = logging.getLogger(__name__)

LEVEL_COUNT = 10
RECALL_LEVELS = tuple((i + 1) / float(LEVEL_COUNT) for i in range(LEVEL_COUNT))
SIGNIFICANT = 5.0  # percent change of average precision
VERY_SIGNIFICANT = 10.0


def interpolated_precision(ranking, relevant):
    """Get the interpolated precision of a ranking at the ten recall levels.

    The precision at level r is the highest precision over the ranks whose
    recall is r or more, and 0 if no rank reaches recall r.

    Args:
        ranking: The full ranked list of doc ids of a query.
        relevant: A non-empty set of relevant doc ids.

    Returns:
        A list of 10 precisions for recall levels 0.1 to 1.0.
    """
    if not relevant:
        raise ValueError('Interpolated precision needs at least one relevant document.')
    total = len(relevant)
    best = [0.0] * LEVEL_COUNT
    hits = 0
    for position, doc_id in enumerate(ranking, 1):
        if doc_id not in relevant:
            continue
        hits += 1
        precision = hits / float(position)
        for level in range(LEVEL_COUNT):
            # recall hits / total >= (level + 1) / 10 in integer arithmetic
            if hits * LEVEL_COUNT >= (level + 1) * total and precision > best[level]:
                best[level] = precision
    return best


def fixed_k_metrics(ranking, relevant):
    """Get the recall and precision of a ranking already cut at k documents.

    The precision is taken over the documents actually retrieved, and 0 for an
    empty ranking.

    Returns:
        A tuple of (recall, precision).
    """
    hits = len(set(ranking) & set(relevant))
    recall = hits / float(len(relevant)) if relevant else 0.0
    precision = hits / float(len(ranking)) if ranking else 0.0
    return recall, precision


def percent_change(baseline, experiment):
    """Get 100 * (experiment - baseline) / baseline or None if the baseline is 0."""
    if baseline == 0:
        return None
    return 100.0 * (experiment - baseline) / baseline


def significance(change):
    """Get the significance flag of a percent change of average precision."""
    if change is None or abs(change) < SIGNIFICANT:
        return ''
    label = 'very significant' if abs(change) >= VERY_SIGNIFICANT else 'significant'
    return label if change > 0 else '{} loss'.format(label)


def format_change(change):
    """Get text for a percent change with two decimals or n/a."""
    return 'n/a' if change is None else '{:.2f}'.format(change)


class EvalReport(object):
    """Averaged effectiveness of a run, optionally compared with a baseline.

    Args:
        levels: A list of 10 mean interpolated precisions (recall 0.1 to 1.0).
        recall: Mean recall at k.
        precision: Mean precision at k.
        k: The cutoff of the recall and precision. (Default: 15).
        query_count: Number of queries averaged.
        baseline: Optional EvalReport of the baseline run.
    """

    def __init__(self, levels, recall=0.0, precision=0.0, k=DEFAULT_K,
                 query_count=0, baseline=None):
        assert len(levels) == LEVEL_COUNT, 'Expected {} recall levels. Got {}.'.format(
            LEVEL_COUNT, len(levels))
        self.levels = tuple(float(p) for p in levels)
        self.recall = float(recall)
        self.precision = float(precision)
        self.k = k
        self.query_count = query_count
        self.baseline = baseline

    @classmethod
    def from_levels(cls, levels, baseline_levels=None, recall=0.0, precision=0.0,
                    baseline_recall=0.0, baseline_precision=0.0, k=DEFAULT_K):
        """Create a report from published per-level precisions."""
        baseline = cls(baseline_levels, baseline_recall, baseline_precision, k) \
            if baseline_levels is not None else None
        return cls(levels, recall, precision, k, baseline=baseline)

    @property
    def average(self):
        """Get the mean of the ten level precisions."""
        return sum(self.levels) / LEVEL_COUNT

    @property
    def level_changes(self):
        """Get the percent change of each level over the baseline (None if not defined)."""
        if self.baseline is None:
            return [None] * LEVEL_COUNT
        return [percent_change(b, e) for b, e in zip(self.baseline.levels, self.levels)]

    @property
    def average_change(self):
        """Get the mean of the per-level percent changes.

        Levels whose baseline precision is 0 are left out of the mean.
        """
        changes = [c for c in self.level_changes if c is not None]
        return sum(changes) / len(changes) if changes else None

    @property
    def recall_change(self):
        return None if self.baseline is None else \
            percent_change(self.baseline.recall, self.recall)

    @property
    def precision_change(self):
        return None if self.baseline is None else \
            percent_change(self.baseline.precision, self.precision)

    @property
    def significance(self):
        """Get the significance flag of the average percent change."""
        return significance(self.average_change)

    def to_tsv(self):
        """Get the report as a table of recall levels, averages and fixed k metrics."""
        lines = [header_comment('eval', k=self.k)]
        if self.baseline is None:
            lines.append('recall\tprecision')
            lines.extend('{:.1f}\t{:.4f}'.format(r, p)
                         for r, p in zip(RECALL_LEVELS, self.levels))
            lines.append('Average\t{:.4f}'.format(self.average))
            lines.append('Recall\t{:.4f}'.format(self.recall))
            lines.append('Precision\t{:.4f}'.format(self.precision))
        else:
            base = self.baseline
            lines.append('recall\tbaseline\texperiment\tchange\tflag')
            for r, b, e, c in zip(RECALL_LEVELS, base.levels, self.levels,
                                  self.level_changes):
                lines.append('{:.1f}\t{:.4f}\t{:.4f}\t{}\t'.format(
                    r, b, e, format_change(c)))
            lines.append('Average\t{:.4f}\t{:.4f}\t{}\t{}'.format(
                base.average, self.average, format_change(self.average_change),
                self.significance))
            lines.append('Recall\t{:.4f}\t{:.4f}\t{}\t'.format(
                base.recall, self.recall, format_change(self.recall_change)))
            lines.append('Precision\t{:.4f}\t{:.4f}\t{}\t'.format(
                base.precision, self.precision, format_change(self.precision_change)))
        return '\n'.join(lines) + '\n'

    def to_dat(self):
        """Get gnuplot-ready recall precision data: recall, baseline, experiment."""
        lines = ['# recall baseline experiment']
        base = self.baseline.levels if self.baseline is not None else self.levels
        lines.extend('{:.1f} {:.4f} {:.4f}'.format(r, b, e)
                     for r, b, e in zip(RECALL_LEVELS, base, self.levels))
        return '\n'.join(lines) + '\n'

    def __repr__(self):
        return 'EvalReport: average precision {:.4f} over {} queries'.format(
            self.average, self.query_count)


def _evaluate(run, qrels, k):
    """Get the mean levels, recall and precision of a run and the query count."""
    sums = [0.0] * LEVEL_COUNT
    recall_sum = precision_sum = 0.0
    query_ids = sorted(q for q, relevant in qrels.items() if relevant)
    for query_id in run.query_ids:
        if query_id not in qrels or not qrels[query_id]:
            _logger.warning('Query %s has no relevance judgments and is skipped.',
                            query_id)
    if not query_ids:
        raise ValueError('None of the queries has relevance judgments.')
    for query_id in query_ids:
        relevant = qrels[query_id]
        ranking = run.documents(query_id)
        for level, p in enumerate(interpolated_precision(ranking, relevant)):
            sums[level] += p
        recall, precision = fixed_k_metrics(ranking[:k], relevant)
        recall_sum += recall
        precision_sum += precision
    count = float(len(query_ids))
    return [s / count for s in sums], recall_sum / count, precision_sum / count, \
        len(query_ids)


def report(run, qrels, baseline_run=None, k=DEFAULT_K):
    """Evaluate a RankedRun against relevance judgments.

    Every query with judgments is evaluated; a query missing from the run
    counts as an empty ranking.

    Args:
        run: A RankedRun holding the full ranking of each query.
        qrels: A dictionary of query_id: set of relevant doc ids.
        baseline_run: Optional RankedRun to compare with.
        k: Cutoff of the fixed recall and precision. (Default: 15).

    Returns:
        An EvalReport.
    """
    if k < 1:
        raise ValueError('k must be at least 1. Got {}.'.format(k))
    baseline = None
    if baseline_run is not None:
        missing = [q for q in baseline_run.query_ids if q not in run]
        if missing:
            raise ValueError('Query {} of the baseline run is missing from the '
                             'experiment run.'.format(missing[0]))
        levels, recall, precision, count = _evaluate(baseline_run, qrels, k)
        baseline = EvalReport(levels, recall, precision, k, count)
    levels, recall, precision, count = _evaluate(run, qrels, k)
    return EvalReport(levels, recall, precision, k, count, baseline)


def write_report(eval_report, file_path):
    """Write an EvalReport to a TSV file."""
    return write_to_file(file_path, eval_report.to_tsv(), mkdir=True)
