"""Dependency measures between binary term-presence variables.

Dep(a, b) is the mutual information (Kullback-Leibler cross entropy) between
the presence of two terms and Dep(a, b | c) the conditional mutual information
given a third one. Both are measured in nats from raw document frequencies and
use the 0 * ln 0 = 0 convention.
"""
try:
    import numpy as np
except ImportError as e:
    raise ImportError('Failed to import numpy.\n{}'.format(e))

try:
    from scipy.stats import chi2
except ImportError as e:
    raise ImportError('Failed to import scipy.\n{}'.format(e))

from .config import CONFIDENCES, validate_confidence


class DepScore(object):
    """A dependency degree together with the sample size it was measured on.

    Args:
        value: Dependency degree in nats. Values down to -1e-12 (numerical
            noise) are clamped to 0.
        N: Integer for the number of documents of the sample.
    """
    __slots__ = ('value', 'N')
    FLOOR = -1e-12

    def __init__(self, value, N):
        value = float(value)
        assert value >= self.FLOOR, 'Dependency degree cannot be negative. ' \
            'Got {}.'.format(value)
        self.value = max(value, 0.0)
        self.N = N

    @property
    def statistic(self):
        """Get the G statistic 2 * N * value of the likelihood ratio test."""
        return 2.0 * self.N * self.value

    def __repr__(self):
        return 'DepScore: {:.6g} nats (N={})'.format(self.value, self.N)


def _information_terms(n_xy, n_x, n_y, N):
    """Get the n_xy / N * ln(n_xy * N / (n_x * n_y)) terms of an information sum.

    All arguments may be numpy arrays. Cells with n_xy == 0 contribute 0.
    """
    n_xy = np.asarray(n_xy, dtype=np.float64)
    present = n_xy > 0
    denominator = np.where(present, np.asarray(n_x, dtype=np.float64) * n_y, 1.0)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(present, n_xy * N / denominator, 1.0)
        return np.where(present, n_xy / N * np.log(ratio), 0.0)


def mutual_information(n11, df_a, df_b, N):
    """Get the mutual information of term pairs from their co-occurrence counts.

    This is the vectorized form used both by marginal_dep and by the all-pairs
    sweep of the learner. The sum is arranged as t11 + t00 + (t10 + t01) so
    that swapping the two terms yields exactly the same floating point value.

    Args:
        n11: Number(s) of documents containing both terms.
        df_a: Document frequency (or frequencies) of the first term.
        df_b: Document frequency (or frequencies) of the second term.
        N: Number of documents.

    Returns:
        A numpy array (or scalar) of raw, unclamped values in nats.
    """
    n11 = np.asarray(n11, dtype=np.float64)
    df_a = np.asarray(df_a, dtype=np.float64)
    df_b = np.asarray(df_b, dtype=np.float64)
    n10, n01 = df_a - n11, df_b - n11
    n00 = N - df_a - df_b + n11
    t11 = _information_terms(n11, df_a, df_b, N)
    t00 = _information_terms(n00, N - df_a, N - df_b, N)
    t10 = _information_terms(n10, df_a, N - df_b, N)
    t01 = _information_terms(n01, N - df_a, df_b, N)
    return t11 + t00 + (t10 + t01)


def marginal_dep(ct):
    """Get Dep(a, b), the mutual information of a Contingency2.

    Args:
        ct: A Contingency2 of the two terms.

    Returns:
        A DepScore.
    """
    N = ct.N
    if N == 0:
        raise ValueError('Cannot measure a dependency on an empty sample (N=0).')
    value = mutual_information(ct.n11, ct.n11 + ct.n10, ct.n11 + ct.n01, N)
    return DepScore(float(value), N)


def conditional_dep(ct):
    """Get Dep(a, b | c), the conditional mutual information of a Contingency3.

    The sum runs over the eight presence patterns (i, j, k) of
    p_ijk * ln(p_ijk * p_k / (p_ik * p_jk)).

    Args:
        ct: A Contingency3 whose third variable is the conditioning term.

    Returns:
        A DepScore.
    """
    N = ct.N
    if N == 0:
        raise ValueError('Cannot measure a dependency on an empty sample (N=0).')
    total = 0.0
    for k in (1, 0):
        n_k = sum(ct.cell(i, j, k) for i in (1, 0) for j in (1, 0))
        for i in (1, 0):
            n_ik = ct.cell(i, 1, k) + ct.cell(i, 0, k)
            for j in (1, 0):
                n_ijk = ct.cell(i, j, k)
                if n_ijk == 0:
                    continue
                n_jk = ct.cell(1, j, k) + ct.cell(0, j, k)
                total += float(n_ijk) / N * np.log(float(n_ijk) * n_k / (n_ik * n_jk))
    return DepScore(total, N)


def chi2_quantile(confidence, df):
    """Get the chi-square quantile for a supported confidence level.

    Args:
        confidence: One of the supported CONFIDENCES (eg. 0.95).
        df: Degrees of freedom (1 for marginal tests, 2 for conditional ones).
    """
    validate_confidence(confidence)
    return _QUANTILES[(confidence, df)]


_QUANTILES = {(c, df): float(chi2.ppf(c, df)) for c in CONFIDENCES for df in (1, 2)}


def independence_test(dep, df, confidence):
    """Test whether two terms are independent based on their dependency degree.

    The G statistic 2 * N * Dep is compared with the chi-square quantile of the
    confidence level.

    Args:
        dep: A DepScore.
        df: Degrees of freedom of the test: 1 for Dep(a, b) and 2 for Dep(a, b | c).
        confidence: One of the supported CONFIDENCES.

    Returns:
        True if the terms are considered independent (G <= quantile).
    """
    if df not in (1, 2):
        raise ValueError('Independence tests use 1 or 2 degrees of freedom. '
                         'Got {}.'.format(df))
    return dep.statistic <= chi2_quantile(confidence, df)

