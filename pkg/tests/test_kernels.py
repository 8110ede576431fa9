"""Agreement of the numba and pure-numpy kernel paths, batch semantics."""

import numpy as np
import pytest

from snsplit import _kernels
from snsplit._kernels import _numpy as knp

numba_kernels = pytest.importorskip("snsplit._kernels._numba")


def _pairs_grid(N):
    return (np.arange(2, N - 2, dtype=np.int64),
            np.arange(4, N, dtype=np.int64))


class TestPathAgreement:
    def test_sn_ratios(self, rng):
        for _ in range(25):
            y = rng.standard_normal(int(rng.integers(8, 120)))
            np.testing.assert_allclose(
                numba_kernels.sn_ratios(y), knp.sn_ratios(y),
                rtol=1e-11, atol=1e-12,
            )

    def test_multi_scan_pairs(self, rng):
        for _ in range(10):
            N = int(rng.integers(12, 80))
            y = rng.standard_normal(N)
            l1, l2 = _pairs_grid(N)
            a = numba_kernels.multi_scan_pairs(y, l1, l2)
            b = knp.multi_scan_pairs(y, l1, l2)
            np.testing.assert_allclose(a[0], b[0], rtol=1e-11)
            np.testing.assert_allclose(a[3], b[3], rtol=1e-11)
            assert tuple(a[1:3]) == tuple(b[1:3])  # same argmax pair
            assert tuple(a[4:6]) == tuple(b[4:6])

    def test_batches(self, rng):
        Y = rng.standard_normal((40, 60))
        np.testing.assert_allclose(
            numba_kernels.sn_stat_batch(Y), knp.sn_stat_batch(Y), rtol=1e-11
        )
        l1, l2 = _pairs_grid(60)
        np.testing.assert_allclose(
            numba_kernels.multi_scan_batch(Y, l1, l2),
            knp.multi_scan_batch(Y, l1, l2),
            rtol=1e-11,
        )


class TestBatchSemantics:
    @pytest.mark.parametrize("kernels", [knp, numba_kernels],
                             ids=["numpy", "numba"])
    def test_batch_matches_per_row(self, kernels, rng):
        Y = rng.standard_normal((15, 40))
        stats = kernels.sn_stat_batch(Y)
        for i in range(15):
            assert stats[i] == pytest.approx(
                np.nanmax(kernels.sn_ratios(Y[i])), rel=1e-14
            )

    @pytest.mark.parametrize("kernels", [knp, numba_kernels],
                             ids=["numpy", "numba"])
    def test_degenerate_row_gives_nan(self, kernels, rng):
        Y = rng.standard_normal((5, 40))
        Y[2] = 3.0  # constant row
        stats = kernels.sn_stat_batch(Y)
        assert np.isnan(stats[2])
        assert np.isfinite(np.delete(stats, 2)).all()

    @pytest.mark.parametrize("kernels", [knp, numba_kernels],
                             ids=["numpy", "numba"])
    def test_multi_batch_matches_scan(self, kernels, rng):
        Y = rng.standard_normal((8, 50))
        l1, l2 = _pairs_grid(50)
        stats = kernels.multi_scan_batch(Y, l1, l2)
        for i in range(8):
            out = kernels.multi_scan_pairs(Y[i], l1, l2)
            assert stats[i] == pytest.approx(out[0] + out[3], rel=1e-14)


class TestDispatch:
    def test_env_flag_selects_numpy(self):
        import os
        import subprocess
        import sys

        code = "import snsplit._kernels as k; print(k.USING_NUMBA)"
        env = dict(os.environ, SNSPLIT_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True,
            text=True,
        )
        assert out.stdout.strip() == "False"

    def test_set_threads_does_not_change_results(self, rng):
        Y = rng.standard_normal((30, 80))
        _kernels.set_threads(1)
        a = _kernels.sn_stat_batch(Y)
        _kernels.set_threads(0)
        b = _kernels.sn_stat_batch(Y)
        np.testing.assert_array_equal(a, b)
