"""Group-comparison statistics for simulation outputs.

Cohen's d is reported as a magnitude (always >= 0). Kruskal-Wallis uses the
tie-corrected rank statistic with a chi-square p-value (k-1 degrees of
freedom). Kendall's correlation is tau-b, the tie-corrected variant, because
peak times on a discrete horizon tie heavily.
"""

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.stats import chi2

ALPHA = 0.05


class DegenerateSamplesError(ValueError):
    """Raised when a statistic is undefined for the given samples."""


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _sample_var(values: Sequence[float], mean: float) -> float:
    return sum((x - mean) ** 2 for x in values) / (len(values) - 1)


def cohens_d(a: Sequence[float], b: Sequence[float]) -> float:
    """|mean(a) - mean(b)| / pooled standard deviation.

    Zero when both samples are constant with equal means; undefined (raises)
    when the pooled deviation is zero but the means differ.
    """
    if len(a) < 2 or len(b) < 2:
        raise ValueError("cohens_d needs at least 2 observations per sample")
    na, nb = len(a), len(b)
    ma, mb = _mean(a), _mean(b)
    va, vb = _sample_var(a, ma), _sample_var(b, mb)
    pooled = math.sqrt(((na - 1) * va + (nb - 1) * vb) / (na + nb - 2))
    if pooled == 0.0:
        if ma == mb:
            return 0.0
        raise DegenerateSamplesError("zero pooled deviation with unequal means")
    return abs(ma - mb) / pooled


def _ranks_with_ties(values: Sequence[float]) -> tuple[list[float], list[int]]:
    """Average ranks (1-based) and the sizes of tie groups."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    tie_sizes = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Tie-corrected H statistic and chi-square p-value.

    All values identical across all groups yields (0, 1) rather than an error.
    """
    if len(groups) < 2:
        raise ValueError("kruskal_wallis needs at least 2 groups")
    if any(len(g) == 0 for g in groups):
        raise ValueError("kruskal_wallis groups must be non-empty")
    pooled = [x for g in groups for x in g]
    n = len(pooled)
    if all(x == pooled[0] for x in pooled):
        return 0.0, 1.0
    ranks, tie_sizes = _ranks_with_ties(pooled)
    h = 0.0
    offset = 0
    for g in groups:
        r_sum = sum(ranks[offset + i] for i in range(len(g)))
        h += r_sum * r_sum / len(g)
        offset += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)
    correction = 1.0 - sum(t**3 - t for t in tie_sizes) / (n**3 - n)
    h /= correction
    h = max(h, 0.0)
    p = float(chi2.sf(h, len(groups) - 1))
    return h, p


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> float:
    """Tau-b rank correlation in [-1, 1]; undefined when a vector is constant."""
    if len(x) != len(y):
        raise ValueError("samples must have equal length")
    n = len(x)
    if n < 2:
        raise ValueError("kendall_tau needs at least 2 pairs")
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = 1 if x[i] > x[j] else (-1 if x[i] < x[j] else 0)
            dy = 1 if y[i] > y[j] else (-1 if y[i] < y[j] else 0)
            prod = dx * dy
            if prod > 0:
                concordant += 1
            elif prod < 0:
                discordant += 1
    n0 = n * (n - 1) // 2
    n1 = sum(t * (t - 1) // 2 for t in _ranks_with_ties(x)[1])
    n2 = sum(t * (t - 1) // 2 for t in _ranks_with_ties(y)[1])
    denom = math.sqrt((n0 - n1) * (n0 - n2))
    if denom == 0.0:
        raise DegenerateSamplesError("tau undefined: at least one vector is constant")
    return (concordant - discordant) / denom


@dataclass(frozen=True)
class GroupComparison:
    """Pairwise effect size plus a Kruskal-Wallis significance call."""

    label_a: str
    label_b: str
    cohens_d: float
    kw_h: float
    kw_p: float
    significant: bool


def compare_groups(
    label_a: str,
    a: Sequence[float],
    label_b: str,
    b: Sequence[float],
    alpha: float = ALPHA,
) -> GroupComparison:
    d = cohens_d(a, b)
    h, p = kruskal_wallis([a, b])
    return GroupComparison(
        label_a=label_a,
        label_b=label_b,
        cohens_d=d,
        kw_h=h,
        kw_p=p,
        significant=p < alpha,
    )
