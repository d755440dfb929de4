"""
Tests for Boweneye app sojourn sequences and time averages
"""

import numpy as np

from boweneye.sojourn import (
    EyeParams,
    accumulation_endpoints,
    cycle_extremes,
    segment_coverage_check,
    sojourn_sequence,
    time_average_weights,
)
from core.exceptions import InvalidParameters
from core.factories import EyeParamsFactory
from core.test_utils import BaseTestCase


class EyeParamsTests(BaseTestCase):
    """Test cases for EyeParams"""

    def test_ratios(self):
        """Test lambda = alpha_minus / beta_plus and sigma = beta_minus / alpha_plus"""
        p = EyeParams(alpha_plus=2.0, alpha_minus=3.0, beta_plus=0.5, beta_minus=5.0)
        self.assertEqual(p.lam, 6.0)
        self.assertEqual(p.sigma, 2.5)

    def test_dissipativity_required(self):
        """Test lambda * sigma = 1 is rejected"""
        with self.assertRaises(InvalidParameters):
            EyeParams.from_ratios(1, 1)
        with self.assertRaises(InvalidParameters):
            EyeParams.from_ratios(0.5, 1.5)
        with self.assertRaises(InvalidParameters):
            EyeParamsFactory(alpha_plus=0)


class SojournSequenceTests(BaseTestCase):
    """Test cases for sojourn_sequence"""

    def test_doubling(self):
        """Test lambda = sigma = 2 doubles every sojourn"""
        trace = sojourn_sequence(EyeParamsFactory(), 1.0, 4)
        self.assertEqual(trace.durations.tolist(), [1, 2, 4, 8, 16, 32, 64, 128])
        self.assertEqual(trace.saddles, ('A', 'B') * 4)
        self.assertEqual(trace.total, 255)

    def test_single_cycle(self):
        """Test K = 1 gives (A, s0), (B, lambda s0)"""
        trace = sojourn_sequence(EyeParams.from_ratios(3, 0.5), 2.0, 1)
        self.assertEqual(trace.rows(), [(1, 'A', 2.0, 2.0), (1, 'B', 6.0, 8.0)])

    def test_transit_shifts_starts(self):
        """Test a constant transit time separates sojourns"""
        trace = sojourn_sequence(EyeParamsFactory(), 1.0, 2, transit=0.5)
        self.assertEqual(trace.starts.tolist(), [0.0, 1.5, 4.0, 8.5])
        self.assertEqual(trace.total, 16.5)

    def test_preconditions(self):
        p = EyeParamsFactory()
        for args in ((0.0, 3), (1.0, 0), (1.0, 3, -1.0)):
            with self.assertRaises(InvalidParameters, msg=args):
                sojourn_sequence(p, *args)
        with self.assertRaises(InvalidParameters):
            sojourn_sequence(p, 1.0, 2000)


class TimeAverageTests(BaseTestCase):
    """Test cases for time_average_weights and accumulation_endpoints"""

    def test_end_of_first_sojourn(self):
        """Test w_A = 1 while still near A"""
        trace = sojourn_sequence(EyeParamsFactory(), 1.0, 3)
        self.assertEqual(time_average_weights(trace, 1.0), (1.0, 0.0))
        self.assertEqual(time_average_weights(trace, 0.25), (1.0, 0.0))

    def test_weights_sum_to_one(self):
        """Test w_A + w_B = 1 exactly at arbitrary times"""
        trace = sojourn_sequence(EyeParams.from_ratios(1.7, 2.3), 0.3, 12)
        for t in np.linspace(trace.total / 1000, trace.total, 97):
            w_a, w_b = time_average_weights(trace, t)
            self.assertEqual(w_a + w_b, 1.0)

    def test_late_sojourns_approach_endpoints(self):
        """Test late A and B ends approach mu1 and mu2"""
        p = EyeParamsFactory()
        trace = sojourn_sequence(p, 1.0, 20)
        mu1, mu2 = accumulation_endpoints(p)
        w_a, _ = time_average_weights(trace, trace.ends[-2])
        self.assertAlmostEqual(w_a, mu1[0], delta=1e-9)
        _, w_b = time_average_weights(trace, trace.ends[-1])
        self.assertAlmostEqual(w_b, mu2[1], delta=1e-9)
        self.assertAlmostEqual(w_b, 2 / 3, delta=1e-9)

    def test_monotone_sweep(self):
        """Test w_A increases near A and decreases near B"""
        trace = sojourn_sequence(EyeParamsFactory(), 1.0, 6)
        for i in (6, 7):
            times = np.linspace(trace.starts[i], trace.ends[i], 50)[1:]
            weights = [time_average_weights(trace, t)[0] for t in times]
            steps = np.diff(weights)
            if trace.saddles[i] == 'A':
                self.assertTrue((steps > 0).all())
            else:
                self.assertTrue((steps < 0).all())

    def test_transit_share(self):
        """Test travel time counts towards neither saddle"""
        trace = sojourn_sequence(EyeParamsFactory(), 1.0, 2, transit=0.5)
        w_a, w_b = time_average_weights(trace, 1.5)
        self.assertAlmostEqual(w_a, 1 / 1.5)
        self.assertAlmostEqual(w_b, 0.0)
        w_a, w_b = time_average_weights(trace, 3.5)
        self.assertAlmostEqual(w_a, 1 / 3.5)
        self.assertAlmostEqual(w_b, 2 / 3.5)

    def test_time_out_of_range(self):
        trace = sojourn_sequence(EyeParamsFactory(), 1.0, 2)
        for t in (0.0, -1.0, trace.total + 1):
            with self.assertRaises(InvalidParameters):
                time_average_weights(trace, t)

    def test_endpoints(self):
        """Test the closed forms, their mirror symmetry and the sigma limit"""
        mu1, mu2 = accumulation_endpoints(EyeParamsFactory())
        self.assertAlmostEqual(mu1[0], 2 / 3)
        self.assertAlmostEqual(mu1[1], 1 / 3)
        self.assertAlmostEqual(mu2[0], 1 / 3)
        self.assertAlmostEqual(mu2[1], 2 / 3)
        mu1, mu2 = accumulation_endpoints(EyeParams.from_ratios(5, 5))
        self.assertEqual(mu1, mu2[::-1])
        mu1, _ = accumulation_endpoints(EyeParams.from_ratios(2, 1e9))
        self.assertAlmostEqual(mu1[0], 1.0, delta=1e-8)


class CycleExtremesTests(BaseTestCase):
    """Test cases for cycle_extremes"""

    def test_geometric_convergence(self):
        """Test errors stay below C (lambda sigma)^-k once C is fitted at k = 5"""
        p = EyeParamsFactory()
        report = cycle_extremes(p, sojourn_sequence(p, 1.0, 20))
        self.assertTrue(report.bounded())
        self.assertGreater(report.constant, 0)
        k, hi, lo, _, _, _ = report.rows[-1]
        self.assertEqual(k, 20)
        self.assertAlmostEqual(hi, 2 / 3, delta=1e-9)
        self.assertAlmostEqual(lo, 1 / 3, delta=1e-9)

    def test_fit_cycle_in_range(self):
        p = EyeParamsFactory()
        with self.assertRaises(InvalidParameters):
            cycle_extremes(p, sojourn_sequence(p, 1.0, 3))


class SegmentCoverageTests(BaseTestCase):
    """Test cases for segment_coverage_check"""

    def test_segment_covered(self):
        """Test every grid point of [1/3, 2/3] is visited"""
        report = segment_coverage_check(EyeParamsFactory(), 1.0, 20, 50, 0.02)
        self.assertTrue(report.all_passed, report.misses)
        self.assertEqual(len(report.grid), 50)

    def test_upper_endpoint(self):
        """Test grid = 1 checks mu1 at the end of an A sojourn"""
        report = segment_coverage_check(EyeParamsFactory(), 1.0, 20, 1, 1e-6)
        self.assertTrue(report.all_passed)
        self.assertAlmostEqual(report.grid[0], 2 / 3)

    def test_zero_tolerance_misses(self):
        """Test eps = 0 misses generic grid points"""
        report = segment_coverage_check(EyeParamsFactory(), 1.0, 20, 50, 0.0)
        self.assertFalse(report.all_passed)

    def test_transit_does_not_matter(self):
        """Test a bounded transit time leaves the late averages unchanged"""
        report = segment_coverage_check(EyeParamsFactory(), 1.0, 20, 50, 0.02, transit=3.0)
        self.assertTrue(report.all_passed)
