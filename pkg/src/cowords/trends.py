"""Rank-frequency power-law fitting and per-keyword linear trend analysis.

Both fits are ordinary least squares in closed form.  The power-law exponent
is the negated slope of log(count) on log(rank).  Keyword trends regress
yearly counts on the year; the slope's two-sided p-value comes from the
t distribution with n-2 degrees of freedom, evaluated through the
regularized incomplete beta function.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Sequence

from scipy.special import betainc

from .corpus import Corpus, FrequencyTable, filter_corpus, frequency_table

SIGNIFICANCE_LEVEL = 0.05

# Residual sums below this fraction of the total sum of squares are treated
# as exact fits; integer count data either fits exactly or misses by far more.
_PERFECT_FIT_RTOL = 1e-12


@dataclass(frozen=True)
class PowerLawFit:
    """Log-log OLS fit of counts against ranks.

    ``degenerate`` marks fits with zero response variance (all counts
    equal), for which r_squared is reported as 0 rather than undefined.
    """

    alpha: float
    r_squared: float
    intercept: float
    n_points: int
    degenerate: bool = False


@dataclass(frozen=True)
class TrendFit:
    keyword: str
    total_count: int
    slope: float
    stderr: float
    p_value: float
    years: tuple[int, int]

    @property
    def significant(self) -> bool:
        return self.p_value < SIGNIFICANCE_LEVEL


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for T ~ Student's t with df degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if not math.isfinite(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def _ols(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float, float]:
    """Closed-form simple regression.

    Returns (slope, intercept, ss_residual, ss_total).
    """
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    sxx = math.fsum((x - mean_x) ** 2 for x in xs)
    sxy = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    ss_total = math.fsum((y - mean_y) ** 2 for y in ys)
    if sxx == 0.0:
        raise ValueError("regression inputs have zero variance on the x axis")
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_residual = math.fsum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    return slope, intercept, ss_residual, ss_total


def powerlaw_fit(table: FrequencyTable) -> PowerLawFit:
    """Fit count ~ rank^-alpha by OLS on the log-log transformed table.

    Entries with count 0 are excluded; fewer than 3 usable entries is an
    error.
    """
    usable = [e for e in table.entries if e.count >= 1]
    if len(usable) < 3:
        raise ValueError(
            f"power-law fit needs at least 3 entries with count >= 1, got {len(usable)}"
        )
    xs = [math.log(e.rank) for e in usable]
    ys = [math.log(e.count) for e in usable]
    slope, intercept, ss_residual, ss_total = _ols(xs, ys)
    if ss_total == 0.0:
        return PowerLawFit(
            alpha=0.0, r_squared=0.0, intercept=intercept,
            n_points=len(usable), degenerate=True,
        )
    r_squared = 1.0 - ss_residual / ss_total
    return PowerLawFit(
        alpha=-slope,
        r_squared=min(max(r_squared, 0.0), 1.0),
        intercept=intercept,
        n_points=len(usable),
    )


def yearly_counts(
    corpus: Corpus, keyword: str, years: Sequence[int]
) -> tuple[tuple[int, int], ...]:
    """Papers per year carrying the keyword, one entry per requested year.

    Years without occurrences appear with count 0.
    """
    year_list = sorted(set(years))
    if not year_list:
        raise ValueError("yearly_counts requires a non-empty year range")
    counts = {year: 0 for year in year_list}
    for paper in corpus.papers:
        if paper.year in counts and keyword in paper.keywords:
            counts[paper.year] += 1
    return tuple((year, counts[year]) for year in year_list)


def linear_trend(
    keyword: str, series: Sequence[tuple[int, float]]
) -> TrendFit:
    """OLS trend of a yearly count series.

    Perfect fits report stderr 0 with p-value 0 (or 1 when the slope is also
    0, i.e. a constant series).
    """
    if len(series) < 3:
        raise ValueError(f"linear trend needs at least 3 points, got {len(series)}")
    xs = [float(year) for year, _ in series]
    ys = [float(count) for _, count in series]
    slope, _, ss_residual, ss_total = _ols(xs, ys)
    n = len(series)
    df = n - 2
    total = int(round(math.fsum(ys)))
    years_span = (int(min(xs)), int(max(xs)))
    if ss_residual <= _PERFECT_FIT_RTOL * max(ss_total, 1.0):
        p_value = 1.0 if slope == 0.0 else 0.0
        return TrendFit(
            keyword=keyword, total_count=total, slope=slope,
            stderr=0.0, p_value=p_value, years=years_span,
        )
    mean_x = math.fsum(xs) / n
    sxx = math.fsum((x - mean_x) ** 2 for x in xs)
    stderr = math.sqrt(ss_residual / df / sxx)
    p_value = student_t_two_sided_p(slope / stderr, df)
    return TrendFit(
        keyword=keyword, total_count=total, slope=slope,
        stderr=stderr, p_value=p_value, years=years_span,
    )


def rank_trends(
    corpus: Corpus,
    top_n: int,
    years: Sequence[int],
    normalize: bool = False,
) -> tuple[TrendFit, ...]:
    """Trend fits for the top_n most frequent keywords, sorted by slope
    descending (ties by keyword).

    With ``normalize`` the series become per-year proportions of papers
    instead of raw counts; the default stays raw because that is what the
    summary tables report.
    """
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    year_list = sorted(set(years))
    if not year_list:
        raise ValueError("rank_trends requires a non-empty year range")
    in_range = filter_corpus(corpus, years=(year_list[0], year_list[-1]))
    if len(year_list) != year_list[-1] - year_list[0] + 1:
        # Non-contiguous request: keep only papers from the listed years.
        year_set = set(year_list)
        in_range = replace(
            in_range, papers=tuple(p for p in in_range.papers if p.year in year_set)
        )
    table = frequency_table(in_range)
    papers_per_year = {year: 0 for year in year_list}
    for paper in in_range.papers:
        papers_per_year[paper.year] += 1
    fits = []
    for entry in table.top(top_n):
        series: list[tuple[int, float]] = []
        for year, count in yearly_counts(in_range, entry.keyword, year_list):
            if normalize:
                denom = papers_per_year[year]
                series.append((year, count / denom if denom else 0.0))
            else:
                series.append((year, float(count)))
        fit = linear_trend(entry.keyword, series)
        if normalize:
            # Proportions lose the raw total; restore the count for reporting.
            fit = TrendFit(
                keyword=fit.keyword, total_count=entry.count, slope=fit.slope,
                stderr=fit.stderr, p_value=fit.p_value, years=fit.years,
            )
        fits.append(fit)
    return tuple(sorted(fits, key=lambda f: (-f.slope, f.keyword)))


def trend_table_csv(fits: Sequence[TrendFit]) -> str:
    """Delimited trend report: keyword,total,slope,stderr,p,significant."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["keyword", "total", "slope", "stderr", "p", "significant"])
    for fit in fits:
        writer.writerow(
            [
                fit.keyword,
                fit.total_count,
                f"{fit.slope:.6f}",
                f"{fit.stderr:.6f}",
                f"{fit.p_value:.6f}",
                "true" if fit.significant else "false",
            ]
        )
    return buffer.getvalue()
