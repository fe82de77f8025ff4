"""Large-array convergence diagnostics for the analog stage."""

import math

import numpy as np
import pytest

from conftest import make_channels
from hybridrelay import (
    QuantizationSpec,
    SystemConfig,
    check_fh_convergence,
    check_orthonormality,
    convergence_sweep,
    lemma_rng,
    sample_small_scale,
    sinc_penalty,
)
from hybridrelay.diagnostics import fh_parts, orthonormality_parts
from hybridrelay.hybrid import build_analog


def analog_pair(n, k=10, seed=0, bits=None):
    rng = lemma_rng(seed, n)
    h = sample_small_scale(n, k, rng)
    quant = QuantizationSpec(bits) if bits is not None else None
    return build_analog(h, k, quant), h, quant


class TestOrthonormality:
    def test_rows_have_exactly_unit_norm(self):
        # Each diagonal of F F^H averages N terms that are each exactly 1/N
        # up to rounding, so the deviation is at the float-noise level no
        # matter how small N is.
        for n in (16, 128, 1024):
            f, _, _ = analog_pair(n)
            diag_dev, _ = orthonormality_parts(f)
            assert diag_dev < 1e-12

    def test_off_diagonals_shrink_like_inverse_sqrt_n(self):
        meds = []
        for n in (100, 1000, 10000):
            devs = []
            for seed in range(50):
                f, _, _ = analog_pair(n, seed=seed)
                devs.append(orthonormality_parts(f)[1])
            meds.append(np.median(devs))
        assert meds[0] > meds[1] > meds[2]
        # Two decades of N -> one decade of deviation, within MC slack.
        ratio = meds[0] / meds[2]
        assert 3.3 < ratio < 30.0

    def test_report_passes_at_moderate_size(self):
        f, _, _ = analog_pair(256)
        rep = check_orthonormality(f, 256)
        assert rep.passed
        assert rep.metric_name == "orthonormality"
        assert rep.bound == pytest.approx(5.0 / 16.0)


class TestFhConvergence:
    def test_continuous_diagonal_approaches_unity(self):
        f, h, _ = analog_pair(20000)
        _, _, diag_mean = fh_parts(f, h, 20000)
        assert diag_mean == pytest.approx(1.0, abs=0.02)

    @pytest.mark.parametrize("bits", [1, 2, 3])
    def test_quantized_diagonal_approaches_sinc_penalty(self, bits):
        # Phase errors uniform on [-step, step) thin the coherent average
        # by exactly E[cos(err)] = sinc(step).
        f, h, quant = analog_pair(20000, bits=bits)
        _, _, diag_mean = fh_parts(f, h, 20000, quant)
        assert diag_mean == pytest.approx(sinc_penalty(quant), rel=0.02)

    def test_deviation_decreases_with_n(self):
        devs = []
        for n in (100, 1000, 10000):
            per_seed = []
            for seed in range(20):
                f, h, _ = analog_pair(n, seed=seed)
                diag_dev, off_dev, _ = fh_parts(f, h, n)
                per_seed.append(max(diag_dev, off_dev))
            devs.append(np.median(per_seed))
        assert devs[0] > devs[1] > devs[2]

    def test_report_fields(self):
        f, h, _ = analog_pair(400)
        rep = check_fh_convergence(f, h, 400)
        assert rep.metric_name == "fh_convergence"
        assert rep.n_antennas == 400
        assert rep.bound == pytest.approx(0.25)
        assert rep.passed == (rep.deviation <= rep.bound)


class TestSweep:
    CFG = SystemConfig(n_antennas=64, seed=0)

    def test_reports_in_requested_order(self):
        reps = convergence_sweep([64, 256], self.CFG, "orthonormality")
        assert [r.n_antennas for r in reps] == [64, 256]
        assert all(r.metric_name == "orthonormality" for r in reps)

    def test_passed_flag_matches_deviation_and_bound(self):
        for metric in ("orthonormality", "fh_convergence"):
            for rep in convergence_sweep([100, 900], self.CFG, metric):
                assert rep.passed == (rep.deviation <= rep.bound)

    def test_unknown_metric_rejected(self):
        with pytest.raises(ValueError, match="metric"):
            convergence_sweep([64], self.CFG, "condition_number")

    def test_sizes_validated(self):
        with pytest.raises(ValueError):
            convergence_sweep([], self.CFG, "orthonormality")
        with pytest.raises(ValueError):
            convergence_sweep([256, 64], self.CFG, "orthonormality")
        with pytest.raises(ValueError):
            convergence_sweep([4], self.CFG, "orthonormality")
