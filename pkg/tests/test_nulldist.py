"""Null-distribution simulation, published tables, and the sample container."""

import numpy as np
import pytest

from snsplit import (
    FormatError,
    NullSample,
    PublishedTable,
    builtin_table,
    load_null,
    save_null,
    simulate_G,
    simulate_GM,
)
from snsplit.nulldist import PUBLISHED_G, PUBLISHED_GM, STANDARD_LEVELS


def _toy_sample(kind="G", values=None):
    vals = np.sort(np.asarray(values if values is not None else np.arange(1.0, 11.0)))
    return NullSample(kind=kind, sample=vals, grid_size=100,
                      replicates=vals.size, seed=0)


class TestNullSample:
    def test_quantile_is_ceil_order_statistic(self):
        null = _toy_sample(values=np.arange(1.0, 11.0))  # 1..10
        assert null.quantile(0.90) == 9.0   # ceil(9.0) = 9 -> 9th value
        assert null.quantile(0.95) == 10.0  # ceil(9.5) = 10 -> 10th value
        assert null.quantile(0.05) == 1.0
        assert null.threshold(0.10) == 9.0

    def test_quantile_bounds(self):
        null = _toy_sample()
        with pytest.raises(ValueError):
            null.quantile(0.0)
        with pytest.raises(ValueError):
            null.quantile(1.0)

    def test_p_value_add_one_rule(self):
        null = _toy_sample(values=np.arange(1.0, 11.0))
        assert null.p_value(10.5) == pytest.approx(1 / 11)
        assert null.p_value(0.5) == pytest.approx(11 / 11)
        assert null.p_value(5.5) == pytest.approx(6 / 11)
        # ties count as >=
        assert null.p_value(5.0) == pytest.approx(7 / 11)

    def test_rejects_unsorted(self):
        with pytest.raises(FormatError):
            NullSample(kind="G", sample=np.array([2.0, 1.0]), grid_size=100,
                       replicates=2, seed=0)

    def test_rejects_wrong_count(self):
        with pytest.raises(FormatError):
            NullSample(kind="G", sample=np.arange(5.0), grid_size=100,
                       replicates=9, seed=0)

    def test_rejects_unknown_kind(self):
        with pytest.raises(FormatError):
            _toy_sample(kind="H")


class TestPublishedTables:
    def test_builtin_anchor_values(self):
        g = builtin_table("G")
        gm = builtin_table("GM")
        assert g.threshold(0.05) == pytest.approx(5.39)
        assert g.threshold(0.10) == pytest.approx(4.32)
        assert g.threshold(0.01) == pytest.approx(7.58)
        assert gm.threshold(0.05) == pytest.approx(23.16)
        assert gm.threshold(0.001) == pytest.approx(102.97)

    def test_threshold_interpolates(self):
        g = builtin_table("G")
        assert 5.39 < g.threshold(0.03) < 6.38

    def test_threshold_outside_anchors(self):
        g = builtin_table("G")
        assert g.threshold(0.5) == -np.inf  # below the 90% anchor
        assert g.threshold(0.0001) == np.inf

    def test_p_value_censoring(self):
        g = builtin_table("G")
        assert g.p_value(1.0) == 1.0          # below the table
        assert g.p_value(100.0) == pytest.approx(0.001)      # beyond the 99.9% anchor
        lo, hi = g.p_value_interval(100.0)
        assert (lo, hi) == (0.0, pytest.approx(0.001))
        lo, hi = g.p_value_interval(1.0)
        assert (lo, hi) == (pytest.approx(0.10), 1.0)

    def test_p_value_interpolated_between_anchors(self):
        g = builtin_table("G")
        p = g.p_value((4.32 + 5.39) / 2)
        assert 0.05 < p < 0.10

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            builtin_table("X")

    def test_published_dicts_levels(self):
        assert tuple(sorted(PUBLISHED_G)) == STANDARD_LEVELS
        assert tuple(sorted(PUBLISHED_GM)) == STANDARD_LEVELS
        assert all(PUBLISHED_GM[q] > PUBLISHED_G[q] for q in STANDARD_LEVELS)


class TestSimulate:
    def test_simulate_G_deterministic(self):
        a = simulate_G(60, 200, seed=7)
        b = simulate_G(60, 200, seed=7)
        np.testing.assert_array_equal(a.sample, b.sample)
        c = simulate_G(60, 200, seed=8)
        assert not np.array_equal(a.sample, c.sample)

    def test_simulate_GM_deterministic(self):
        a = simulate_GM(60, 120, stride=2, seed=7)
        b = simulate_GM(60, 120, stride=2, seed=7)
        np.testing.assert_array_equal(a.sample, b.sample)
        assert a.kind == "GM" and a.stride == 2

    def test_parameter_floors(self):
        with pytest.raises(ValueError):
            simulate_G(10, 200, seed=0)
        with pytest.raises(ValueError):
            simulate_G(100, 50, seed=0)

    def test_sample_is_sorted_and_finite(self):
        null = simulate_G(60, 200, seed=1)
        assert np.all(np.diff(null.sample) >= 0)
        assert np.isfinite(null.sample).all()


class TestPersistence:
    def test_round_trip_bitwise(self, tmp_path):
        null = simulate_GM(60, 120, stride=3, seed=5)
        path = tmp_path / "gm.null"
        save_null(null, path)
        back = load_null(path)
        np.testing.assert_array_equal(back.sample, null.sample)
        assert back.describe() == null.describe()

    def test_missing_magic(self, tmp_path):
        path = tmp_path / "bad.null"
        path.write_text("not a null file\n")
        with pytest.raises(FormatError):
            load_null(path)

    def test_truncated_body(self, tmp_path):
        null = simulate_G(60, 200, seed=5)
        path = tmp_path / "g.null"
        save_null(null, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-10]) + "\n")
        with pytest.raises(FormatError, match="truncated"):
            load_null(path)

    def test_corrupt_value(self, tmp_path):
        null = simulate_G(60, 200, seed=5)
        path = tmp_path / "g.null"
        save_null(null, path)
        text = path.read_text().replace(repr(float(null.sample[50])), "oops", 1)
        path.write_text(text)
        with pytest.raises(FormatError):
            load_null(path)

    def test_missing_separator(self, tmp_path):
        path = tmp_path / "g.null"
        path.write_text("snsplit-null-sample v1\nkind: G\n")
        with pytest.raises(FormatError, match="separator"):
            load_null(path)

    def test_missing_header_field(self, tmp_path):
        path = tmp_path / "g.null"
        path.write_text("snsplit-null-sample v1\nkind: G\n---\n")
        with pytest.raises(FormatError, match="missing header field"):
            load_null(path)
