"""
Tests for Cocycle app matrix products and Lyapunov estimates
"""

import math

import numpy as np

from cocycle.products import (
    CocycleSpec,
    log_norm,
    lyapunov_estimate,
    lyapunov_irregularity_gap,
    lyapunov_trace,
    perturb,
    scalar_cocycle,
)
from core.exceptions import AlphabetMismatch, InvalidParameters, SingularMatrix, WindowOverrun
from core.factories import CocycleFactory, CylinderFunctionFactory, WordFactory
from core.test_utils import BaseTestCase
from shiftspace.subshifts import PaperShift
from splicer.program import OscillationSpec, build_point, plan_oscillation
from words.observables import CylinderFunction, birkhoff_average
from words.sequences import Alphabet, Word

TERNARY = Alphabet()


def rotation(angle):
    return [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]


class CocycleSpecTests(BaseTestCase):
    """Test cases for CocycleSpec construction and JSON tables"""

    def test_singular_matrix_rejected(self):
        """Test |det| below the threshold"""
        with self.assertRaises(SingularMatrix):
            CocycleSpec.constant([[1.0, 2.0], [2.0, 4.0]])

    def test_dimension_cap(self):
        """Test d is capped"""
        with self.assertRaises(InvalidParameters):
            CocycleSpec.constant(np.eye(9))

    def test_table_must_be_total(self):
        """Test one matrix per word of the window"""
        with self.assertRaises(InvalidParameters):
            CocycleSpec(TERNARY, 2, 1, np.stack([np.eye(2)] * 2))
        payload = {'dim': 1, 'window': 1, 'entries': [{'word': 'p', 'matrix': [2]}]}
        with self.assertRaises(InvalidParameters):
            CocycleSpec.from_json(payload)

    def test_json_table(self):
        """Test loading row-major matrices"""
        payload = {
            'dim': 2,
            'window': 1,
            'entries': [
                {'word': 'm', 'matrix': [2, 0, 0, 1]},
                {'word': '0', 'matrix': [1, 0, 0, 1]},
                {'word': 'p', 'matrix': [1, 1, 0, 1]},
            ],
        }
        A = CocycleSpec.from_json(payload)
        self.assertTrue(np.array_equal(A.matrix('p'), [[1, 1], [0, 1]]))
        self.assertEqual(CocycleSpec.from_json(A.to_dict()).to_dict(), A.to_dict())


class LyapunovEstimateTests(BaseTestCase):
    """Test cases for lyapunov_estimate and log_norm"""

    def test_identity(self):
        """Test the identity cocycle has exponent 0"""
        A = CocycleSpec.constant(np.eye(3))
        word = WordFactory(length=50)
        for n in (1, 10, 50):
            self.assertAlmostEqual(lyapunov_estimate(A, word, n), 0.0, places=12)

    def test_diagonal_power(self):
        """Test diag(2, 1/2) gives log 2"""
        A = CocycleSpec.constant(np.diag([2.0, 0.5]))
        word = Word.zeros(2000)
        for n in (1, 7, 2000):
            self.assertAlmostEqual(lyapunov_estimate(A, word, n), math.log(2), delta=1e-12)

    def test_rotation(self):
        """Test orthogonal products have norm 1"""
        A = CocycleSpec.constant(rotation(0.3))
        self.assertAlmostEqual(lyapunov_estimate(A, Word.zeros(500), 500), 0.0, delta=1e-12)

    def test_no_overflow(self):
        """Test long products of large matrices stay finite"""
        A = CocycleSpec.constant(np.diag([1e6, 1.0]))
        self.assertAlmostEqual(lyapunov_estimate(A, Word.zeros(5000), 5000), math.log(1e6), delta=1e-9)

    def test_window_overrun(self):
        """Test n + L - 1 beyond the word"""
        A = CocycleFactory(window=2)
        with self.assertRaises(WindowOverrun):
            lyapunov_estimate(A, Word.zeros(10), 10)

    def test_subadditivity(self):
        """Test log||A_(m+n)|| <= log||A_n(T^m x)|| + log||A_m(x)|| on random splits"""
        for _ in range(30):
            A = CocycleFactory(dim=3, window=2)
            word = WordFactory(length=80)
            m, n = 17, 40
            whole = log_norm(A, word, m + n)
            self.assertLessEqual(whole, log_norm(A, word, n, start=m) + log_norm(A, word, m) + 1e-9)

    def test_norm_kind_slack(self):
        """Test spectral and Frobenius estimates differ by at most (log d)/n"""
        A = CocycleFactory(dim=4)
        word = WordFactory(length=300)
        for n in (1, 5, 50, 300):
            spectral = lyapunov_estimate(A, word, n)
            frobenius = lyapunov_estimate(A, word, n, kind='frobenius')
            self.assertLessEqual(spectral, frobenius + 1e-12)
            self.assertLessEqual(frobenius - spectral, math.log(4) / n + 1e-12)

    def test_unknown_norm(self):
        with self.assertRaises(InvalidParameters):
            lyapunov_estimate(CocycleFactory(), Word.zeros(5), 5, kind='nuclear')


class ScalarCocycleTests(BaseTestCase):
    """Test cases for scalar_cocycle"""

    def test_zero_observable_is_identity(self):
        """Test f = 0 gives the identity cocycle"""
        A = scalar_cocycle(CylinderFunction.constant(TERNARY, 0), 2)
        self.assertTrue(np.array_equal(A.matrices, np.stack([np.eye(2)] * 3)))

    def test_exponent_is_birkhoff_average(self):
        """Test chi_n(A^f) equals the Birkhoff average of f"""
        for _ in range(5):
            f = CylinderFunctionFactory()
            word = WordFactory(length=1001)
            for dim in (1, 3):
                self.assertAlmostEqual(
                    lyapunov_estimate(scalar_cocycle(f, dim), word, 1000),
                    birkhoff_average(f, word, 1000),
                    delta=1e-9,
                )


class PerturbTests(BaseTestCase):
    """Test cases for perturb"""

    def test_zero_observable_leaves_cocycle(self):
        A = CocycleFactory()
        perturbed = perturb(A, CylinderFunction.constant(TERNARY, 0), 3)
        self.assertTrue(np.array_equal(perturbed.matrices, A.matrices))

    def test_exponent_identity(self):
        """Test chi_n(A_(k)) = chi_n(A) + (1/k) avg f"""
        for k in (1, 2, 7):
            A = CocycleFactory(dim=2)
            f = CylinderFunctionFactory(window=2)
            word = WordFactory(length=501)
            self.assertAlmostEqual(
                lyapunov_estimate(perturb(A, f, k), word, 500),
                lyapunov_estimate(A, word, 500) + birkhoff_average(f, word, 500) / k,
                delta=1e-9,
            )

    def test_large_k_limit(self):
        """Test entries move by at most 2 ||A|| ||f|| / k"""
        A = CocycleFactory(dim=2)
        f = CylinderFunctionFactory(window=2)
        k = 10 ** 6
        delta = np.abs(perturb(A, f, k).matrices - A.widen(2).matrices).max()
        self.assertLessEqual(delta, 2 * A.norm * f.norm / k)

    def test_preconditions(self):
        with self.assertRaises(InvalidParameters):
            perturb(CocycleFactory(), CylinderFunctionFactory(), 0)
        f = CylinderFunction.constant(Alphabet((0, 1)), 1)
        with self.assertRaises(AlphabetMismatch):
            perturb(CocycleFactory(), f, 1)


class IrregularityGapTests(BaseTestCase):
    """Test cases for lyapunov_irregularity_gap and traces"""

    def test_single_point(self):
        """Test N0 = N1 gives lo = hi"""
        A = CocycleFactory()
        lo, hi = lyapunov_irregularity_gap(A, WordFactory(length=40), 30, 30)
        self.assertEqual(lo, hi)

    def test_constant_matrix_gap_shrinks(self):
        """Test hi - lo <= 1/N0 for a constant upper-triangular matrix"""
        A = CocycleSpec.constant([[2.0, 1.0], [0.0, 1.0]])
        word = Word.zeros(400)
        for n_lo in (10, 50, 200):
            lo, hi = lyapunov_irregularity_gap(A, word, n_lo, 400)
            self.assertLessEqual(hi - lo, 1 / n_lo)

    def test_trace_matches_pointwise_estimates(self):
        A = CocycleFactory(dim=3, window=2)
        word = WordFactory(length=60)
        trace = lyapunov_trace(A, word, 5, 50)
        self.assertEqual(len(trace.rows()), 46)
        for n, chi in trace.rows()[::9]:
            self.assertAlmostEqual(chi, lyapunov_estimate(A, word, n), delta=1e-12)

    def test_spliced_point_is_lyapunov_irregular(self):
        """Test the scalar cocycle of the coordinate swings with the Birkhoff averages"""
        shift = PaperShift('1/4')
        f = CylinderFunction.coordinate(TERNARY)
        osc = OscillationSpec(f=f, alpha=-0.75, beta=0.75, tau=0.05, num_checkpoints=4)
        program = plan_oscillation(shift, osc, ('m', 'p'))
        word = build_point(shift, program)
        lo, hi = lyapunov_irregularity_gap(scalar_cocycle(f, 2), word, program.checkpoints[0], program.length)
        self.assertGreaterEqual(hi - lo, 1.4 - 1e-9)
