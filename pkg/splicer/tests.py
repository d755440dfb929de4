"""
Tests for Splicer app oscillation planning, building and verification
"""

import math

from django.conf import settings
from django.test import override_settings

from core.exceptions import (
    IllegalWord,
    InfeasibleTargets,
    InvalidParameters,
    LegalityViolation,
)
from core.test_utils import BaseTestCase
from measures.metric import MetricTruncation, accumulation_profile
from shiftspace.subshifts import FiniteTypeShift, FullShift, PaperShift
from splicer.program import (
    OscillationSpec,
    Segment,
    SpliceProgram,
    _window_sum,
    build_point,
    oscillation_hypothesis_margin,
    plan_oscillation,
    verify_oscillation,
)
from words.observables import CylinderFunction, birkhoff_average
from words.sequences import Alphabet, Word

COORDINATE = CylinderFunction.coordinate(Alphabet())
SIGNED_RUNS = ('m', 'p')


def quarter_spec(**overrides):
    params = {'f': COORDINATE, 'alpha': -0.75, 'beta': 0.75, 'tau': 0.05, 'num_checkpoints': 6}
    params.update(overrides)
    return OscillationSpec(**params)


class OscillationSpecTests(BaseTestCase):
    """Test cases for OscillationSpec and oscillation_hypothesis_margin"""

    def test_invalid_parameters(self):
        """Test ordering, tolerance, checkpoint and growth checks"""
        for overrides in (
            {'alpha': 0.5, 'beta': 0.5},
            {'tau': -0.1},
            {'num_checkpoints': 0},
            {'growth': 1.0},
        ):
            with self.assertRaises(InvalidParameters, msg=overrides):
                quarter_spec(**overrides)

    def test_targets_start_high(self):
        """Test targets alternate beta, alpha, beta, ..."""
        osc = quarter_spec()
        self.assertEqual([osc.target(k) for k in range(4)], [0.75, -0.75, 0.75, -0.75])
        self.assertTrue(osc.reached(0, 0.7))
        self.assertFalse(osc.reached(0, 0.69))
        self.assertTrue(osc.reached(1, -0.7))
        self.assertFalse(osc.reached(1, -0.69))

    def test_margin(self):
        """Test (beta - alpha) - 2 kappa (sup f - inf f)"""
        osc = quarter_spec()
        self.assertAlmostEqual(oscillation_hypothesis_margin(osc, 0.25), 0.5)
        self.assertLess(oscillation_hypothesis_margin(osc, 1), 0)

    def test_to_dict_keeps_observable(self):
        """Test the exported spec can be read back"""
        osc = quarter_spec(growth=5.0)
        self.assertEqual(OscillationSpec.from_dict(osc.to_dict()).to_dict(), osc.to_dict())


class PlanOscillationTests(BaseTestCase):
    """Test cases for plan_oscillation on PaperShift(1/4)"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.shift = PaperShift('1/4')
        cls.osc = quarter_spec()
        cls.program = plan_oscillation(cls.shift, cls.osc, SIGNED_RUNS)

    def test_schedule(self):
        """Test checkpoints grow geometrically and stay within the length budget"""
        program = self.program
        self.assertEqual(len(program.checkpoints), 6)
        self.assertLessEqual(program.length, settings.ERGOLAB['MAX_WORD_LENGTH'])
        before = 0
        for segment, checkpoint in zip(program.segments, program.checkpoints):
            self.assertGreater(checkpoint, before)
            if before:
                self.assertGreaterEqual(segment.reps * len(segment.block), self.osc.growth * before)
            before = checkpoint

    def test_gaps_are_minimal(self):
        """Test gap_k = m(r_k) + 1 between opposite-sign runs"""
        for segment in self.program.segments[1:]:
            self.assertEqual(segment.gap, self.shift.m(segment.reps) + 1)
        self.assertEqual(self.program.segments[0].gap, 0)

    def test_predicted_averages(self):
        """Test predictions meet the one-sided targets"""
        for k, average in enumerate(self.program.predicted):
            if k % 2 == 0:
                self.assertGreaterEqual(average, 0.7)
                self.assertLessEqual(average, 1.0)
            else:
                self.assertLessEqual(average, -0.7)
                self.assertGreaterEqual(average, -1.0)
        self.assertTrue(self.program.certified)
        self.assertGreaterEqual(self.program.margin, 0)

    def test_block_error_inequality(self):
        """Test every checkpoint satisfies the block-average error bound"""
        self.assertEqual(len(self.program.bound_checks), 6)
        for check in self.program.bound_checks:
            self.assertTrue(check.holds, check)

    def test_reach_bound(self):
        """Test high averages stay below 1/(1 + kappa) + 1/G after the first"""
        for growth in (5.0, 10.0):
            program = plan_oscillation(self.shift, quarter_spec(growth=growth, num_checkpoints=5), SIGNED_RUNS)
            for k, average in enumerate(program.predicted[1:], start=1):
                self.assertLessEqual(abs(average), 0.8 + 1 / growth)

    def test_build_and_verify(self):
        """Test the built word is legal and matches the predictions"""
        word = build_point(self.shift, self.program)
        self.assertEqual(len(word), self.program.checkpoints[-1])
        self.assertTrue(self.shift.is_legal(word))
        for checkpoint, predicted in zip(self.program.checkpoints, self.program.predicted):
            self.assertAlmostEqual(birkhoff_average(COORDINATE, word, checkpoint), predicted, delta=1e-9)
        report = verify_oscillation(word, self.osc, self.program.checkpoints)
        self.assertTrue(report.all_passed, report.averages)
        self.assertGreaterEqual(report.spread, self.osc.beta - self.osc.alpha - 2 * self.osc.tau - 1e-9)

    def test_checkpoint_measures_disperse(self):
        """Test empirical measures at the checkpoints stay apart"""
        word = build_point(self.shift, self.program)
        profile = accumulation_profile(word, self.program.checkpoints[-3:], 1, MetricTruncation(3))
        self.assertGreaterEqual(profile.dispersion, 0.3)

    def test_program_round_trip_builds_same_word(self):
        """Test a program read back from JSON builds the same point"""
        copy = SpliceProgram.from_dict(self.program.to_dict())
        self.assertEqual(copy.checkpoints, self.program.checkpoints)
        self.assertEqual(copy.segments, self.program.segments)


class PlanOscillationEdgeTests(BaseTestCase):
    """Test cases for plan_oscillation preconditions and other subshifts"""

    def test_zero_tolerance(self):
        """Test tau = 0 predictions fall in [0.75, 1] and [-1, -0.75]"""
        program = plan_oscillation(PaperShift('1/4'), quarter_spec(tau=0.0, num_checkpoints=4), SIGNED_RUNS)
        for k, average in enumerate(program.predicted):
            self.assertGreaterEqual(abs(average), 0.75)
            self.assertEqual(average > 0, k % 2 == 0)
        word = build_point({'type': 'paper', 'kappa': '1/4'}, program)
        self.assertLegal(PaperShift('1/4'), word[:4000])

    def test_six_checkpoints_at_zero_tolerance(self):
        """Test kappa 1/4, +-0.75, tau = 0 over six checkpoints fits the default budget"""
        shift = PaperShift('1/4')
        for growth in (5.0, 10.0):
            program = plan_oscillation(shift, quarter_spec(tau=0.0, growth=growth), SIGNED_RUNS)
            self.assertEqual(len(program.checkpoints), 6)
            self.assertLessEqual(program.length, settings.ERGOLAB['MAX_WORD_LENGTH'])
            self.assertTrue(program.certified)
            total = 0
            for k, segment in enumerate(program.segments):
                sign = 1 if k % 2 == 0 else -1
                total += sign * segment.reps
                average = program.predicted[k]
                self.assertEqual(average, total / program.checkpoints[k])
                self.assertGreaterEqual(sign * average, 0.75)
                self.assertLessEqual(sign * average, 1.0)
                if k:
                    self.assertEqual(segment.gap, shift.m(segment.reps) + 1)

    def test_targets_beyond_reach(self):
        """Test +-0.99 exceeds the 1/(1 + kappa) reach"""
        with self.assertRaises(InfeasibleTargets):
            plan_oscillation(PaperShift('1/4'), quarter_spec(alpha=-0.99, beta=0.99, tau=0.0), SIGNED_RUNS)

    @override_settings(ERGOLAB={**settings.ERGOLAB, 'MAX_WORD_LENGTH': 1000})
    def test_length_budget_setting(self):
        """Test the budget is read from settings"""
        with self.assertRaises(InfeasibleTargets):
            plan_oscillation(PaperShift('1/4'), quarter_spec(num_checkpoints=4), SIGNED_RUNS)

    def test_hypothesis_margin_required(self):
        """Test beta - alpha must exceed 2 kappa (sup f - inf f)"""
        with self.assertRaises(InvalidParameters):
            plan_oscillation(PaperShift('1/1'), quarter_spec(), SIGNED_RUNS)

    def test_block_preconditions(self):
        """Test block legality and block averages"""
        with self.assertRaises(IllegalWord):
            plan_oscillation(PaperShift('1/4'), quarter_spec(), ('m', 'pm'))
        with self.assertRaises(InvalidParameters):
            plan_oscillation(PaperShift('1/4'), quarter_spec(), ('0', 'p'))
        with self.assertRaises(InvalidParameters):
            plan_oscillation(PaperShift('1/4'), quarter_spec(), ('m', ''))

    def test_full_shift_needs_no_gaps(self):
        """Test targets +-0.9 on the full shift glue directly"""
        osc = quarter_spec(alpha=-0.9, beta=0.9, tau=0.0, num_checkpoints=4)
        program = plan_oscillation(FullShift(3), osc, SIGNED_RUNS)
        self.assertEqual([s.gap for s in program.segments], [0, 0, 0, 0])
        self.assertEqual(program.segments[1].reps, 19)
        report = verify_oscillation(build_point(FullShift(3), program), osc, program.checkpoints)
        self.assertTrue(report.all_passed)
        self.assertTrue(program.certified)

    def test_wider_observable_on_sft(self):
        """Test a window-2 indicator on a finite-type shift"""
        shift = FiniteTypeShift(['pm', 'mp'])
        f = CylinderFunction.indicator(Alphabet(), Word((1, 1)))
        osc = OscillationSpec(f=f, alpha=0.2, beta=0.8, tau=0.05, num_checkpoints=4)
        program = plan_oscillation(shift, osc, SIGNED_RUNS)
        self.assertTrue(all(s.gap == 1 for s in program.segments[1:]))
        word = build_point(shift, program)
        self.assertLegal(shift, word[:3000])
        for checkpoint, predicted in zip(program.checkpoints, program.predicted):
            self.assertAlmostEqual(birkhoff_average(f, word, checkpoint - 1), predicted, delta=1e-9)
        self.assertTrue(verify_oscillation(word, osc, program.checkpoints).all_passed)


class WindowSumTests(BaseTestCase):
    """Test cases for window sums over periodic runs"""

    def test_matches_direct_sum(self):
        """Test closed-form sums against summing the built word"""
        f = CylinderFunction.from_values(Alphabet(), 3, [0.5 * i - 3 for i in range(27)])
        cases = (
            ((Word((1, 0)), 1), (Word.zeros(1), 5), (Word((-1, -1, 0)), 7)),
            ((Word((1,)), 1), (Word.zeros(1), 0), (Word((1, -1)), 1)),
            ((Word((0, 1)), 4),),
            ((Word((1, 1)), 1), (Word.zeros(1), 1)),
        )
        for pieces in cases:
            word = Word.concat([block * reps for block, reps in pieces])
            with self.subTest(word=word):
                expected = math.fsum(f.values(word, len(word) - 2)) if len(word) > 2 else 0.0
                self.assertAlmostEqual(_window_sum(f, pieces), expected, places=9)


class BuildPointTests(BaseTestCase):
    """Test cases for build_point"""

    def test_empty_program(self):
        """Test an empty program builds the empty word"""
        self.assertEqual(len(build_point({'type': 'paper', 'kappa': '1/4'}, SpliceProgram(shift={'type': 'paper'}))), 0)

    def test_tampered_program_rejected(self):
        """Test a gap below the minimum is caught"""
        program = SpliceProgram(
            shift={'type': 'paper', 'kappa': '1/4'},
            segments=[Segment(Word((1,)), 4, 0), Segment(Word((-1,)), 8, 2)],
            checkpoints=[4, 14],
        )
        with self.assertRaises(LegalityViolation):
            build_point(PaperShift('1/4'), program)

    def test_length_mismatch_rejected(self):
        """Test checkpoints that disagree with the segments"""
        program = SpliceProgram(shift={}, segments=[Segment(Word((1,)), 4, 0)], checkpoints=[5])
        with self.assertRaises(LegalityViolation):
            build_point(FullShift(3), program)


class VerifyOscillationTests(BaseTestCase):
    """Test cases for verify_oscillation"""

    def test_constant_word_fails(self):
        """Test a constant word cannot oscillate for tau > 0"""
        osc = quarter_spec(num_checkpoints=2)
        report = verify_oscillation(Word.zeros(200), osc, [10, 200])
        self.assertFalse(report.all_passed)
        self.assertEqual(report.spread, 0)

    def test_hand_built_word(self):
        """Test a short two-run word passes at both checkpoints"""
        osc = quarter_spec(num_checkpoints=2)
        word = Word.constant(1, 10) + Word.zeros(12) + Word.constant(-1, 40)
        report = verify_oscillation(word, osc, [10, 62])
        self.assertEqual(report.averages[0], 1.0)
        self.assertAlmostEqual(report.averages[1], -30 / 62)
        self.assertEqual(report.passed, [True, True])
        self.assertEqual(report.to_dict()['irregularity_gap']['hi'], 1.0)

    def test_checkpoint_past_end(self):
        """Test checkpoints must fit in the word"""
        with self.assertRaises(InvalidParameters):
            verify_oscillation(Word.zeros(10), quarter_spec(num_checkpoints=1), [20])

    def test_checkpoints_must_increase(self):
        """Test unordered or repeated checkpoints are rejected"""
        osc = quarter_spec(num_checkpoints=2)
        for checkpoints in ([10, 3], [5, 5], [0, 4]):
            with self.subTest(checkpoints=checkpoints):
                with self.assertRaises(InvalidParameters):
                    verify_oscillation(Word.zeros(12), osc, checkpoints)
