import math

import numpy as np
import pytest
from scipy import integrate, stats

from cowords.corpus import FrequencyEntry, FrequencyTable
from cowords.trends import (
    SIGNIFICANCE_LEVEL,
    PowerLawFit,
    TrendFit,
    linear_trend,
    powerlaw_fit,
    rank_trends,
    student_t_two_sided_p,
    trend_table_csv,
    yearly_counts,
)

YEARS = range(2004, 2014)


def t_density(x, df):
    log_c = (
        math.lgamma((df + 1) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * math.log(df * math.pi)
    )
    return math.exp(log_c - (df + 1) / 2.0 * math.log1p(x * x / df))


class TestStudentT:
    def test_matches_numerical_integration(self):
        for df in range(1, 31):
            for t in (0.3, 0.5, 1.0, 2.0, 3.5):
                tail, _ = integrate.quad(t_density, t, np.inf, args=(df,))
                assert student_t_two_sided_p(t, df) == pytest.approx(
                    2.0 * tail, abs=1e-8
                )

    def test_cauchy_hand_value(self):
        # df=1 is Cauchy: P(|T| >= 1) = 1/2 exactly
        assert student_t_two_sided_p(1.0, 1) == pytest.approx(0.5, abs=1e-12)

    def test_zero_statistic(self):
        assert student_t_two_sided_p(0.0, 5) == 1.0

    def test_sign_symmetric(self):
        assert student_t_two_sided_p(-2.3, 7) == student_t_two_sided_p(2.3, 7)

    def test_infinite_statistic(self):
        assert student_t_two_sided_p(math.inf, 4) == 0.0

    def test_monotone_in_statistic(self):
        ps = [student_t_two_sided_p(t, 9) for t in (0.0, 0.5, 1.0, 2.0, 4.0)]
        assert ps == sorted(ps, reverse=True)

    def test_invalid_df(self):
        with pytest.raises(ValueError):
            student_t_two_sided_p(1.0, 0)


class TestLinearTrend:
    def test_matches_linregress_on_noisy_series(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(4, 20))
            xs = np.arange(2000, 2000 + n)
            ys = 2.0 + 0.4 * (xs - 2000) + rng.normal(0, 1.5, size=n)
            fit = linear_trend("kw", list(zip(xs.tolist(), ys.tolist())))
            ref = stats.linregress(xs, ys)
            assert fit.slope == pytest.approx(ref.slope, abs=1e-9)
            assert fit.stderr == pytest.approx(ref.stderr, abs=1e-9)
            assert fit.p_value == pytest.approx(ref.pvalue, abs=1e-9)

    def test_perfect_line(self):
        fit = linear_trend("kw", [(1, 2.0), (2, 4.0), (3, 6.0)])
        assert fit.slope == pytest.approx(2.0)
        assert fit.stderr == 0.0
        assert fit.p_value == 0.0
        assert fit.significant

    def test_constant_series(self):
        fit = linear_trend("kw", [(2004, 3.0), (2005, 3.0), (2006, 3.0)])
        assert fit.slope == 0.0
        assert fit.stderr == 0.0
        assert fit.p_value == 1.0
        assert not fit.significant

    def test_year_shift_leaves_statistics_unchanged(self):
        series = [(2004, 1.0), (2005, 4.0), (2006, 2.0), (2007, 6.0), (2008, 5.0)]
        shifted = [(y + 100, c) for y, c in series]
        a = linear_trend("kw", series)
        b = linear_trend("kw", shifted)
        assert b.slope == pytest.approx(a.slope, abs=1e-12)
        assert b.stderr == pytest.approx(a.stderr, abs=1e-12)
        assert b.p_value == pytest.approx(a.p_value, abs=1e-12)
        assert b.years == (2104, 2108)

    def test_count_scaling_scales_slope_not_p(self):
        series = [(2004, 1.0), (2005, 4.0), (2006, 2.0), (2007, 6.0), (2008, 5.0)]
        scaled = [(y, 10.0 * c) for y, c in series]
        a = linear_trend("kw", series)
        b = linear_trend("kw", scaled)
        assert b.slope == pytest.approx(10.0 * a.slope, rel=1e-12)
        assert b.stderr == pytest.approx(10.0 * a.stderr, rel=1e-12)
        assert b.p_value == pytest.approx(a.p_value, abs=1e-12)

    def test_metadata_fields(self):
        fit = linear_trend("volume rendering", [(2004, 2.0), (2006, 0.0), (2005, 1.0)])
        assert fit.keyword == "volume rendering"
        assert fit.total_count == 3
        assert fit.years == (2004, 2006)

    def test_too_short_series(self):
        with pytest.raises(ValueError, match="at least 3"):
            linear_trend("kw", [(2004, 1.0), (2005, 2.0)])

    def test_degenerate_x_axis(self):
        with pytest.raises(ValueError, match="zero variance"):
            linear_trend("kw", [(2004, 1.0), (2004, 2.0), (2004, 3.0)])


class TestPowerLaw:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.66, 2.4, 3.0])
    def test_recovers_planted_exponent(self, alpha):
        # Synthetic counts follow the law exactly, so no integer rounding.
        # The amplitude keeps every count above the >= 1 exclusion floor.
        entries = tuple(
            FrequencyEntry(keyword=f"kw{r}", count=1e6 * r**-alpha, rank=r)
            for r in range(1, 26)
        )
        fit = powerlaw_fit(FrequencyTable(entries=entries))
        assert fit.alpha == pytest.approx(alpha, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-9)
        assert fit.intercept == pytest.approx(math.log(1e6), abs=1e-9)
        assert fit.n_points == 25
        assert not fit.degenerate

    def test_zero_counts_excluded(self):
        entries = (
            FrequencyEntry("a", 8, 1),
            FrequencyEntry("b", 4, 2),
            FrequencyEntry("c", 2, 3),
            FrequencyEntry("d", 0, 4),
            FrequencyEntry("e", 0, 5),
        )
        fit = powerlaw_fit(FrequencyTable(entries=entries))
        assert fit.n_points == 3

    def test_all_equal_counts_degenerate(self):
        entries = tuple(FrequencyEntry(f"kw{r}", 5, r) for r in range(1, 6))
        fit = powerlaw_fit(FrequencyTable(entries=entries))
        assert fit.degenerate
        assert fit.alpha == 0.0
        assert fit.r_squared == 0.0

    def test_too_few_entries(self):
        entries = (FrequencyEntry("a", 3, 1), FrequencyEntry("b", 1, 2))
        with pytest.raises(ValueError, match="at least 3"):
            powerlaw_fit(FrequencyTable(entries=entries))

    def test_noisy_fit_r_squared_below_one(self):
        rng = np.random.default_rng(8)
        entries = tuple(
            FrequencyEntry(
                keyword=f"kw{r}",
                count=float(1000.0 * r**-1.5 * math.exp(rng.normal(0, 0.3))),
                rank=r,
            )
            for r in range(1, 31)
        )
        fit = powerlaw_fit(FrequencyTable(entries=entries))
        assert 0.0 < fit.r_squared < 1.0
        assert 1.0 < fit.alpha < 2.0

    def test_fixture_table_fits(self, fixture_corpus):
        from cowords.corpus import frequency_table

        fit = powerlaw_fit(frequency_table(fixture_corpus))
        assert fit.n_points == 21
        assert fit.alpha > 0
        assert 0.0 < fit.r_squared <= 1.0


class TestYearlyCounts:
    def test_fixture_series(self, fixture_corpus):
        series = yearly_counts(fixture_corpus, "interaction", YEARS)
        assert series == tuple(
            zip(YEARS, (1, 0, 1, 1, 0, 2, 1, 2, 2, 3))
        )
        falling = yearly_counts(fixture_corpus, "flow visualization", YEARS)
        assert tuple(c for _, c in falling) == (1, 1, 1, 1, 1, 1, 1, 0, 0, 0)

    def test_series_total_matches_frequency(self, fixture_corpus):
        from cowords.corpus import frequency_table

        table = frequency_table(fixture_corpus)
        for keyword, expected in table.counts().items():
            series = yearly_counts(fixture_corpus, keyword, YEARS)
            assert sum(c for _, c in series) == expected

    def test_unknown_keyword_all_zero(self, fixture_corpus):
        series = yearly_counts(fixture_corpus, "nonexistent topic", YEARS)
        assert all(c == 0 for _, c in series)

    def test_subrange(self, fixture_corpus):
        series = yearly_counts(fixture_corpus, "interaction", range(2009, 2012))
        assert series == ((2009, 2), (2010, 1), (2011, 2))

    def test_empty_years_rejected(self, fixture_corpus):
        with pytest.raises(ValueError):
            yearly_counts(fixture_corpus, "interaction", [])


class TestRankTrends:
    def test_sorted_by_slope_descending(self, fixture_corpus):
        fits = rank_trends(fixture_corpus, top_n=10, years=YEARS)
        slopes = [f.slope for f in fits]
        assert slopes == sorted(slopes, reverse=True)
        assert len(fits) == 10

    def test_fixture_hand_slopes(self, fixture_corpus):
        fits = {f.keyword: f for f in rank_trends(fixture_corpus, 10, YEARS)}
        # interaction rises: Sxy/Sxx = 19.5/82.5 on the hand-tallied series
        assert fits["interaction"].slope == pytest.approx(19.5 / 82.5, abs=1e-12)
        assert fits["interaction"].significant
        # flow visualization declines: -10.5/82.5
        assert fits["flow visualization"].slope == pytest.approx(
            -10.5 / 82.5, abs=1e-12
        )
        assert fits["flow visualization"].significant
        assert fits["flow visualization"].p_value < 0.02

    def test_totals_match_frequency_table(self, fixture_corpus):
        from cowords.corpus import frequency_table

        counts = frequency_table(fixture_corpus).counts()
        for fit in rank_trends(fixture_corpus, 10, YEARS):
            assert fit.total_count == counts[fit.keyword]

    def test_top_n_selects_most_frequent(self, fixture_corpus):
        from cowords.corpus import frequency_table

        top3 = {e.keyword for e in frequency_table(fixture_corpus).top(3)}
        fits = rank_trends(fixture_corpus, 3, YEARS)
        assert {f.keyword for f in fits} == top3

    def test_normalized_mode_keeps_raw_totals(self, fixture_corpus):
        raw = {f.keyword: f for f in rank_trends(fixture_corpus, 5, YEARS)}
        norm = {
            f.keyword: f
            for f in rank_trends(fixture_corpus, 5, YEARS, normalize=True)
        }
        assert set(raw) == set(norm)
        for kw in raw:
            assert norm[kw].total_count == raw[kw].total_count
            assert norm[kw].slope != raw[kw].slope  # proportions rescale the series

    def test_non_contiguous_years_drop_between_papers(self, fixture_corpus):
        years = [2004, 2006, 2008, 2010, 2012]
        fits = rank_trends(fixture_corpus, 5, years)
        from cowords.corpus import frequency_table

        direct = {}
        for paper in fixture_corpus.papers:
            if paper.year in set(years):
                for kw in set(paper.keywords):
                    direct[kw] = direct.get(kw, 0) + 1
        for fit in fits:
            assert fit.total_count == direct[fit.keyword]
            assert fit.years == (2004, 2012)

    def test_invalid_arguments(self, fixture_corpus):
        with pytest.raises(ValueError):
            rank_trends(fixture_corpus, 0, YEARS)
        with pytest.raises(ValueError):
            rank_trends(fixture_corpus, 5, [])


class TestTrendTableCsv:
    def test_format(self):
        fits = (
            TrendFit(
                keyword="interaction", total_count=13, slope=0.2363636,
                stderr=0.0727273, p_value=0.0117, years=(2004, 2013),
            ),
            TrendFit(
                keyword="user studies", total_count=7, slope=0.0,
                stderr=0.05, p_value=1.0, years=(2004, 2013),
            ),
        )
        text = trend_table_csv(fits)
        lines = text.splitlines()
        assert lines[0] == "keyword,total,slope,stderr,p,significant"
        assert lines[1] == "interaction,13,0.236364,0.072727,0.011700,true"
        assert lines[2] == "user studies,7,0.000000,0.050000,1.000000,false"
        assert text.endswith("\n")

    def test_significance_threshold(self):
        at_level = TrendFit("kw", 1, 1.0, 0.1, SIGNIFICANCE_LEVEL, (2004, 2013))
        below = TrendFit("kw", 1, 1.0, 0.1, SIGNIFICANCE_LEVEL - 1e-9, (2004, 2013))
        assert not at_level.significant  # strict inequality
        assert below.significant
