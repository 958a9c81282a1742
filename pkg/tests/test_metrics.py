"""Metric suite against naive double-loop oracles and anchor values."""

import numpy as np
import pytest

from scribsal.errors import ValidationError
from scribsal.metrics import (e_measure, e_measure_curve, f_beta, f_stats, mae,
                              prf_curve, s_measure, thresholds)

from oracles import e_curve_naive, prf_naive, s_measure_naive


def random_pair(rng, h=16, w=16):
    pred = rng.random((h, w))
    gt = (rng.random((h, w)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
    return pred, gt


class TestMae:
    def test_perfect(self):
        gt = np.zeros((4, 4), dtype=np.uint8)
        gt[1:3, 1:3] = 1
        assert mae(gt.astype(float), gt) == 0.0

    def test_inverted(self):
        gt = np.zeros((4, 4), dtype=np.uint8)
        assert mae(np.ones((4, 4)), gt) == 1.0

    def test_hand_example(self):
        pred = np.array([[1.0, 0.5], [0.0, 0.0]])
        gt = np.array([[1, 0], [0, 0]], dtype=np.uint8)
        assert mae(pred, gt) == pytest.approx(0.125, abs=1e-12)

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            mae(np.zeros((3, 3)), np.zeros((4, 4), dtype=np.uint8))

    def test_nonbinary_gt_rejected(self):
        with pytest.raises(ValidationError):
            mae(np.zeros((3, 3)), np.full((3, 3), 2, dtype=np.uint8))


class TestPrfCurve:
    def test_f_equals_precision_when_equal_recall(self):
        assert f_beta(np.array([0.7]), np.array([0.7]))[0] == pytest.approx(0.7, abs=1e-12)

    def test_hand_f_value(self):
        f = f_beta(np.array([0.8]), np.array([0.5]))[0]
        assert f == pytest.approx(1.3 * 0.8 * 0.5 / (0.3 * 0.8 + 0.5), abs=1e-12)
        assert f == pytest.approx(0.7027, abs=1e-4)

    def test_threshold_zero_with_positive_predictions(self):
        rng = np.random.default_rng(0)
        pred = rng.uniform(0.01, 1.0, (8, 8))  # strictly positive
        gt = (rng.random((8, 8)) < 0.5).astype(np.uint8)
        gt[0, 0] = 1  # ensure nonempty
        _, recall, _ = prf_curve(pred, gt)
        assert recall[0] == 1.0

    def test_recall_monotone_in_threshold(self):
        rng = np.random.default_rng(1)
        pred, gt = random_pair(rng)
        _, recall, _ = prf_curve(pred, gt)
        assert (np.diff(recall) <= 1e-15).all()

    def test_empty_gt_scores_zero(self):
        rng = np.random.default_rng(2)
        pred = rng.random((8, 8))
        p, r, f = prf_curve(pred, np.zeros((8, 8), dtype=np.uint8))
        assert (p == 0).all() and (r == 0).all() and (f == 0).all()

    def test_matches_naive(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            pred, gt = random_pair(rng, 12, 12)
            p, r, f = prf_curve(pred, gt)
            pn, rn, fn = prf_naive(pred, gt)
            np.testing.assert_allclose(p, pn, atol=1e-12)
            np.testing.assert_allclose(r, rn, atol=1e-12)
            np.testing.assert_allclose(f, fn, atol=1e-12)


class TestFStats:
    def test_constant_curve(self):
        f_avg, f_max = f_stats(np.full((1, 256), 0.5))
        assert f_avg == 0.5 and f_max == 0.5

    def test_max_ge_avg(self):
        rng = np.random.default_rng(4)
        f_avg, f_max = f_stats(rng.random((5, 256)))
        assert f_max >= f_avg

    def test_cross_image_average_first(self):
        from scribsal.metrics.measures import mean_f_curve

        curves = np.stack([np.linspace(0, 1, 256), np.linspace(1, 0, 256)])
        f_avg, f_max = f_stats(curves)
        np.testing.assert_allclose(mean_f_curve(curves), 0.5, atol=1e-12)
        assert f_max == pytest.approx(0.5, abs=1e-12)
        assert f_avg == pytest.approx(0.5, abs=1e-12)


class TestEMeasure:
    def test_perfect_is_one(self):
        gt = np.zeros((8, 8), dtype=np.uint8)
        gt[2:5, 3:7] = 1
        e_avg, e_max = e_measure(gt.astype(float), gt)
        assert e_avg == 1.0 and e_max == 1.0

    def test_complement_is_zero(self):
        gt = np.zeros((2, 2), dtype=np.uint8)
        gt[0, 0] = 1
        curve = e_measure_curve(1.0 - gt.astype(float), gt)
        # below threshold 1 the binarized prediction is the exact complement
        assert curve[1] == 0.0
        assert curve[128] == 0.0

    def test_values_in_unit_interval_and_match_naive(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            pred, gt = random_pair(rng, 10, 10)
            curve = e_measure_curve(pred, gt)
            assert curve.min() >= 0.0 and curve.max() <= 1.0
            np.testing.assert_allclose(curve, e_curve_naive(pred, gt), atol=1e-9)

    def test_degenerate_gt_conventions(self):
        rng = np.random.default_rng(6)
        pred = rng.random((6, 6))
        empty = np.zeros((6, 6), dtype=np.uint8)
        full = np.ones((6, 6), dtype=np.uint8)
        np.testing.assert_allclose(e_measure_curve(pred, empty),
                                   e_curve_naive(pred, empty), atol=1e-12)
        np.testing.assert_allclose(e_measure_curve(pred, full),
                                   e_curve_naive(pred, full), atol=1e-12)


class TestSMeasure:
    def test_perfect_binary_is_one(self):
        gt = np.zeros((10, 10), dtype=np.uint8)
        gt[2:7, 3:8] = 1
        assert s_measure(gt.astype(float), gt) == 1.0

    def test_alpha_half_is_arithmetic_mean(self):
        from scribsal.metrics.measures import _s_object, _s_region

        rng = np.random.default_rng(7)
        pred, gt = random_pair(rng, 12, 12)
        if not gt.any() or gt.all():
            gt[0, 0] = 1
            gt[5, 5] = 0
        s_half = s_measure(pred, gt, alpha=0.5)
        s_o = _s_object(pred, gt.astype(bool))
        s_r = _s_region(pred, gt.astype(bool))
        assert s_half == pytest.approx(max(0.5 * (s_o + s_r), 0.0), abs=1e-12)

    def test_matches_independent_reference(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            pred, gt = random_pair(rng, 16, 16)
            assert s_measure(pred, gt) == pytest.approx(
                s_measure_naive(pred, gt), abs=1e-6)

    def test_empty_gt_convention(self):
        pred = np.full((5, 5), 0.2)
        assert s_measure(pred, np.zeros((5, 5), dtype=np.uint8)) == pytest.approx(0.8)

    def test_full_gt_convention(self):
        pred = np.full((5, 5), 0.2)
        assert s_measure(pred, np.ones((5, 5), dtype=np.uint8)) == pytest.approx(0.2)


class TestOrderInvariance:
    def test_curve_grid(self):
        t = thresholds()
        assert len(t) == 256
        assert t[0] == 0.0 and t[-1] == 255 / 256
        assert (np.diff(t) > 0).all()
