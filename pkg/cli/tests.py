"""
Tests for Cli app management commands, artifacts and the run ledger
"""

import json
import math
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError

from cli.acceptance import CRITERIA
from cli.artifacts import read_csv
from cli.models import ExperimentRun
from core.factories import ExperimentRunFactory
from core.test_utils import CommandTestCase, LedgerTestCase
from shiftspace.oracles import sgap_growth_root


class LangCommandTests(CommandTestCase):
    """Test cases for `lang count` and `lang entropy`"""

    def test_count_paper_length_two(self):
        """Test |L_2| = 7 at kappa = 1/1"""
        path = self.artifact_path('lang-count-two.json')
        stdout, _ = self.run_command('lang', 'count', '--spec', 'paper', '--kappa', '1/1', '--n', '2', '--out', path)
        self.assertEqual(stdout.strip(), path)
        data = self.load_artifact(path)
        self.assertEqual(data['command'], 'lang')
        self.assertEqual(data['action'], 'count')
        self.assertEqual(data['results'], {'n': 2, 'count': 7})
        self.assertEqual(data['config']['spec'], {'type': 'paper', 'kappa': '1'})
        self.assertEqual(data['seed'], 0)

    def test_listing_as_csv(self):
        """Test the word list with provenance lines"""
        path = self.artifact_path('lang-count-list.csv')
        self.run_command('lang', 'count', '--kappa', '1/1', '--n', '2', '--list', '--format', 'csv', '--out', path)
        provenance, header, rows = read_csv(path)
        self.assertEqual(header, ['index', 'word'])
        self.assertEqual([word for _, word in rows], ['mm', 'm0', '0m', '00', '0p', 'p0', 'pp'])
        self.assertEqual(provenance['command'], 'lang')
        self.assertEqual(provenance['tool'], 'ergolab 1.0.0')
        self.assertEqual(len(provenance['config_hash']), 64)
        self.assertNotIn('\r', Path(path).read_text())

    def test_count_cap_exhausted(self):
        """Test exit 2 beyond the counting cap"""
        error = self.run_failing_command(2, 'lang', 'count', '--n', '100')
        self.assertEqual(error['code'], 'cap-exceeded')
        self.assertEqual(error['details']['cap'], 64)

    def test_enum_cap_budget(self):
        """Test the enum_cap budget lowers the listing cap"""
        error = self.run_failing_command(2, 'lang', 'count', '--n', '5', '--list', '--enum-cap', '3')
        self.assertEqual(error['code'], 'cap-exceeded')

    def test_kappa_must_be_a_fraction(self):
        """Test decimal kappa is rejected with exit 1"""
        error = self.run_failing_command(1, 'lang', 'count', '--kappa', '0.25', '--n', '2')
        self.assertEqual(error['code'], 'invalid-parameters')
        self.assertIn('kappa', error['details']['errors']['spec'])

    def test_missing_parameter(self):
        error = self.run_failing_command(1, 'lang', 'count')
        self.assertIn('n', error['details']['errors'])

    def test_missing_action(self):
        with self.assertRaises(CommandError):
            call_command('lang')

    def test_entropy_of_sgap(self):
        """Test the S-gap growth ratio approaches its root"""
        path = self.artifact_path('lang-entropy.json')
        self.run_command('lang', 'entropy', '--spec', 'sgap', '--min-run', '2', '--n', '16', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertLessEqual(abs(results['ratio'] - sgap_growth_root(2)), 0.02)
        self.assertEqual([row['n'] for row in results['growth']], list(range(1, 17)))


class GlueCommandTests(CommandTestCase):
    """Test cases for the glue command"""

    def test_min_gap(self):
        """Test w = p, u = mmm needs m(3) + 1 = 5 zeros at kappa = 1/1"""
        path = self.artifact_path('glue-min-gap.json')
        self.run_command('glue', 'min-gap', '--w', 'p', '--u', 'mmm', '--kappa', '1/1', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertEqual(results['gap'], 5)
        self.assertEqual(results['bound'], 5)
        self.assertTrue(results['found'])

    def test_min_gap_beyond_v_max(self):
        """Test a gap past v_max is reported as absent"""
        path = self.artifact_path('glue-min-gap-absent.json')
        self.run_command('glue', 'min-gap', '--w', 'p', '--u', 'mmm', '--v-max', '3', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertIsNone(results['gap'])
        self.assertFalse(results['found'])

    def test_illegal_word(self):
        error = self.run_failing_command(1, 'glue', 'min-gap', '--w', 'pm', '--u', 'p')
        self.assertEqual(error['code'], 'illegal-word')

    def test_verify_as_csv(self):
        """Test exhaustive verification rows"""
        path = self.artifact_path('glue-verify.csv')
        self.run_command('glue', 'verify', '--kappa', '1/4', '--n', '6', '--w-max', '4', '--format', 'csv', '--out', path)
        _, header, rows = read_csv(path)
        self.assertEqual(header, ['n', 'pairs', 'max_gap', 'bound', 'max_ratio', 'gluing_ratio'])
        self.assertEqual([int(row[0]) for row in rows], list(range(1, 7)))
        for row in rows:
            self.assertLessEqual(int(row[2]), int(row[3]))

    def test_app_falsify(self):
        """Test no gluing exists at n = 20 and the long-connector control finds one"""
        path = self.artifact_path('glue-app.json')
        self.run_command('glue', 'app-falsify', '--kappa', '1/1', '--n', '20', '--out', path)
        self.assertFalse(self.load_artifact(path)['results']['found'])
        self.run_command(
            'glue', 'app-falsify', '--kappa', '1/1', '--n', '4', '--f-budget', '12', '--g-budget', '0', '--out', path,
        )
        results = self.load_artifact(path)['results']
        self.assertTrue(results['found'])
        self.assertEqual(results['witness']['w_changes'], 0)

    def test_app_falsify_budget(self):
        """Test exit 2 when the search exceeds its budget"""
        error = self.run_failing_command(
            2, 'glue', 'app-falsify', '--n', '40', '--f-budget', '20', '--g-budget', '3',
        )
        self.assertEqual(error['code'], 'budget-exceeded')


class SpliceCommandTests(CommandTestCase):
    """Test cases for planning, building and verifying spliced points"""

    def plan(self, name='splice-plan.json', *extra):
        path = self.artifact_path(name)
        self.run_command(
            'splice', 'plan', '--kappa', '1/4', '--alpha', '-0.75', '--beta', '0.75',
            '--tau', '0.05', '--checkpoints', '4', '--out', path, *extra,
        )
        return path

    def test_plan(self):
        """Test the plan artifact carries a certified program"""
        data = self.load_artifact(self.plan())
        results = data['results']
        self.assertTrue(results['certified'])
        self.assertEqual(len(results['checkpoints']), 4)
        self.assertEqual(results['targets'], [0.75, -0.75, 0.75, -0.75])
        self.assertAlmostEqual(results['hypothesis_margin'], 0.5)
        self.assertEqual(data['config']['params']['blocks'], ['m', 'p'])

    def test_build_then_verify(self):
        """Test the built word verifies against its program"""
        plan = self.plan('splice-plan-build.json')
        word_path = self.artifact_path('spliced.word')
        build = self.artifact_path('splice-build.json')
        self.run_command('splice', 'build', '--program', plan, '--word-out', word_path, '--out', build)
        built = self.load_artifact(build)['results']
        text = Path(word_path).read_text().strip()
        self.assertEqual(len(text), built['length'])
        self.assertEqual(text[:64], built['prefix'])

        verify = self.artifact_path('splice-verify.json')
        self.run_command('splice', 'verify', '--program', plan, '--word', f'@{word_path}', '--out', verify)
        results = self.load_artifact(verify)['results']
        self.assertTrue(results['all_passed'])
        self.assertTrue(results['legal'])
        self.assertGreaterEqual(results['irregularity_gap']['spread'], 1.4 - 1e-9)

    def test_tampered_program(self):
        """Test gluing opposite blocks directly makes the build fail legality"""
        plan = Path(self.plan('splice-plan-tampered.json'))
        data = json.loads(plan.read_text())
        segment = data['results']['segments'][1]
        data['results']['checkpoints'][-1] -= segment['gap']
        segment['gap'] = 0
        plan.write_text(json.dumps(data))
        error = self.run_failing_command(1, 'splice', 'build', '--program', str(plan))
        self.assertEqual(error['code'], 'legality-violation')

    def test_unordered_checkpoints(self):
        """Test a program whose checkpoints go backwards exits 1 on verify"""
        plan = Path(self.plan('splice-plan-unordered.json'))
        data = json.loads(plan.read_text())
        checkpoints = data['results']['checkpoints']
        checkpoints[0], checkpoints[1] = checkpoints[1], checkpoints[0]
        plan.write_text(json.dumps(data))
        error = self.run_failing_command(1, 'splice', 'verify', '--program', str(plan))
        self.assertEqual(error['code'], 'invalid-parameters')

    def test_infeasible_targets(self):
        """Test targets outside the range of the observable exit 1"""
        error = self.run_failing_command(
            1, 'splice', 'plan', '--kappa', '1/4', '--alpha', '-1.5', '--beta', '1.5', '--checkpoints', '2',
        )
        self.assertEqual(error['code'], 'infeasible-targets')

    def test_reversed_targets(self):
        error = self.run_failing_command(1, 'splice', 'plan', '--alpha', '0.5', '--beta', '-0.5')
        self.assertEqual(error['code'], 'invalid-parameters')


class MeasureCommandTests(CommandTestCase):
    """Test cases for the measure command"""

    def test_empirical(self):
        path = self.artifact_path('measure-empirical.json')
        self.run_command('measure', 'empirical', '--word', 'p0p0', '--n', '2', '--depth', '1', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertEqual(results['sample_count'], 2)
        self.assertEqual(results['entries'], [{'word': '0', 'freq': '1/2'}, {'word': 'p', 'freq': '1/2'}])

    def test_rho_point_masses(self):
        """Test the hand-computed distance 0.625"""
        path = self.artifact_path('measure-rho.json')
        self.run_command(
            'measure', 'rho', '--word', 'p', '--n', '1', '--other', 'm', '--K', '3', '--depth', '1', '--out', path,
        )
        results = self.load_artifact(path)['results']
        self.assertEqual(results['value'], 0.625)
        self.assertEqual(results['tail'], 0.125)
        self.assertEqual(results['truncation']['cylinders'], ['m', '0', 'p'])

    def test_profile_from_file(self):
        """Test a word read from a file"""
        word_path = Path(self.artifact_path('profile.word'))
        word_path.write_text('ppppmmmm\n')
        path = self.artifact_path('measure-profile.json')
        self.run_command(
            'measure', 'profile', '--word', f'@{word_path}', '--checkpoints', '4', '8',
            '--K', '3', '--depth', '1', '--out', path,
        )
        results = self.load_artifact(path)['results']
        self.assertEqual(results['distances'], [{'i': 4, 'j': 8, 'value': 0.3125}])

    def test_kappa_check(self):
        """Test the coordinate is kappa-controlled through the fixed points"""
        path = self.artifact_path('measure-kappa.json')
        self.run_command('measure', 'kappa-check', '--kappa', '1/4', '--blocks', 'p', 'm', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertTrue(results['certified'])
        self.assertEqual(results['spread'], '2')
        self.assertEqual(results['threshold'], '1/2')
        self.assertEqual([item['integral'] for item in results['integrals']], ['1', '-1'])

    def test_kappa_check_needs_gap_family(self):
        error = self.run_failing_command(1, 'measure', 'kappa-check', '--spec', 'full', '--blocks', 'p')
        self.assertEqual(error['code'], 'invalid-parameters')

    def test_missing_word_file(self):
        error = self.run_failing_command(1, 'measure', 'empirical', '--word', '@/nonexistent/word', '--n', '1')
        self.assertEqual(error['code'], 'invalid-parameters')


class CocycleCommandTests(CommandTestCase):
    """Test cases for the cocycle command"""

    def write_cocycle(self, name, matrix):
        path = Path(self.artifact_path(name))
        entries = [{'word': word, 'matrix': matrix} for word in ('m', '0', 'p')]
        path.write_text(json.dumps({'dim': 2, 'window': 1, 'entries': entries}))
        return str(path)

    def test_lyapunov_from_file(self):
        """Test diag(2, 1/2) has exponent log 2 on a seeded word"""
        cocycle = self.write_cocycle('diag.json', [2, 0, 0, 0.5])
        path = self.artifact_path('cocycle-lyapunov.json')
        self.run_command('cocycle', 'lyapunov', '--cocycle', cocycle, '--n-hi', '50', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertAlmostEqual(results['lo'], math.log(2), delta=1e-12)
        self.assertAlmostEqual(results['hi'], math.log(2), delta=1e-12)
        self.assertEqual(results['count'], 50)

    def test_scalar_cocycle_of_observable(self):
        """Test the default scalar cocycle follows the coordinate average"""
        path = self.artifact_path('cocycle-scalar.csv')
        self.run_command('cocycle', 'lyapunov', '--word', 'pppp', '--n-hi', '4', '--format', 'csv', '--out', path)
        _, header, rows = read_csv(path)
        self.assertEqual(header, ['n', 'chi'])
        for _, chi in rows:
            self.assertAlmostEqual(float(chi), 1.0, delta=1e-12)

    def test_perturb_check(self):
        path = self.artifact_path('cocycle-perturb.json')
        self.run_command('cocycle', 'perturb-check', '--n', '200', '--k', '3', '--seed', '4', '--out', path)
        data = self.load_artifact(path)
        self.assertTrue(data['results']['passed'])
        self.assertEqual(data['seed'], 4)

    def test_singular_cocycle(self):
        cocycle = self.write_cocycle('singular.json', [1, 2, 2, 4])
        error = self.run_failing_command(1, 'cocycle', 'lyapunov', '--cocycle', cocycle, '--n-hi', '5')
        self.assertEqual(error['code'], 'singular-matrix')

    def test_bounds_order(self):
        error = self.run_failing_command(1, 'cocycle', 'lyapunov', '--n-lo', '9', '--n-hi', '5')
        self.assertIn('n_hi', error['details']['errors'])


class BoweneyeCommandTests(CommandTestCase):
    """Test cases for the boweneye command"""

    def test_trace_as_csv(self):
        """Test lambda = sigma = 2 doubles each sojourn"""
        path = self.artifact_path('boweneye-trace.csv')
        self.run_command('boweneye', 'trace', '--K', '2', '--format', 'csv', '--out', path)
        _, header, rows = read_csv(path)
        self.assertEqual(header, ['k', 'saddle', 'duration', 'cumulative'])
        self.assertEqual(rows, [
            ['1', 'A', '1.0', '1.0'],
            ['1', 'B', '2.0', '3.0'],
            ['2', 'A', '4.0', '7.0'],
            ['2', 'B', '8.0', '15.0'],
        ])

    def test_weights(self):
        path = self.artifact_path('boweneye-weights.json')
        self.run_command('boweneye', 'weights', '--K', '3', '--t', '1', '3', '--out', path)
        points = self.load_artifact(path)['results']['points']
        self.assertEqual(points[0], {'t': 1.0, 'w_a': 1.0, 'w_b': 0.0})
        self.assertAlmostEqual(points[1]['w_a'], 1 / 3)

    def test_coverage(self):
        """Test the segment between the limit measures is covered"""
        path = self.artifact_path('boweneye-coverage.json')
        self.run_command('boweneye', 'coverage', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertTrue(results['passed'])
        self.assertEqual(results['coverage']['misses'], [])
        self.assertAlmostEqual(results['endpoints']['mu1'][0], 2 / 3)

    def test_not_dissipative(self):
        error = self.run_failing_command(1, 'boweneye', 'trace', '--lam', '0.5', '--sigma', '1.5')
        self.assertEqual(error['code'], 'invalid-parameters')


class ReproducibilityTests(CommandTestCase):
    """Test cases for byte-identical artifacts, config files and replays"""

    def test_threads_do_not_change_bytes(self):
        """Test artifacts are identical across thread counts"""
        outputs = []
        for threads in ('1', '4'):
            path = self.artifact_path(f'verify-threads-{threads}.json')
            self.run_command('glue', 'verify', '--kappa', '1/2', '--n', '6', '--threads', threads, '--out', path)
            outputs.append(Path(path).read_bytes())
        self.assertEqual(outputs[0], outputs[1])

    def test_output_path_not_hashed(self):
        first, second = self.artifact_path('hash-a.json'), self.artifact_path('hash-b.json')
        self.run_command('lang', 'count', '--n', '3', '--out', first)
        self.run_command('lang', 'count', '--n', '3', '--out', second)
        self.assertEqual(Path(first).read_bytes(), Path(second).read_bytes())

    def test_seed_changes_hash(self):
        first, second = self.artifact_path('seed-a.json'), self.artifact_path('seed-b.json')
        self.run_command('lang', 'count', '--n', '3', '--seed', '1', '--out', first)
        self.run_command('lang', 'count', '--n', '3', '--seed', '2', '--out', second)
        self.assertNotEqual(self.load_artifact(first)['config_hash'], self.load_artifact(second)['config_hash'])

    def test_toml_config_with_flag_override(self):
        """Test file values apply and flags win"""
        config = Path(self.artifact_path('experiment.toml'))
        config.write_text('seed = 5\n\n[spec]\ntype = "paper"\nkappa = "1/1"\n\n[params]\nn = 2\n')
        path = self.artifact_path('from-toml.json')
        self.run_command('lang', 'count', '--config', str(config), '--out', path)
        data = self.load_artifact(path)
        self.assertEqual(data['seed'], 5)
        self.assertEqual(data['results']['count'], 7)
        self.run_command('lang', 'count', '--config', str(config), '--n', '1', '--out', path)
        self.assertEqual(self.load_artifact(path)['results'], {'n': 1, 'count': 3})

    def test_toml_unknown_parameter(self):
        config = Path(self.artifact_path('unknown.toml'))
        config.write_text('[params]\nn = 2\nlength = 4\n')
        error = self.run_failing_command(1, 'lang', 'count', '--config', str(config))
        self.assertEqual(error['details']['unknown'], ['length'])

    def test_replay_reproduces_results(self):
        """Test a verify artifact replays, and a tampered one exits 3"""
        path = self.artifact_path('replay.json')
        self.run_command('glue', 'verify', '--kappa', '1/4', '--n', '5', '--out', path)
        again = self.artifact_path('replayed.json')
        self.run_command('glue', 'verify', '--replay', path, '--out', again)
        self.assertEqual(Path(path).read_bytes(), Path(again).read_bytes())

        data = json.loads(Path(path).read_text())
        data['results']['passed'] = False
        Path(path).write_text(json.dumps(data))
        error = self.run_failing_command(3, 'glue', 'verify', '--replay', path, '--out', again)
        self.assertEqual(error['code'], 'acceptance-failure')

    def test_replay_other_action(self):
        path = self.artifact_path('replay-count.json')
        self.run_command('lang', 'count', '--n', '2', '--out', path)
        error = self.run_failing_command(1, 'glue', 'verify', '--replay', path)
        self.assertEqual(error['code'], 'invalid-parameters')


class AcceptCommandTests(CommandTestCase):
    """Test cases for the accept command"""

    def test_subset_passes(self):
        path = self.artifact_path('accept-subset.json')
        self.run_command('accept', '--only', '6', '9', '10', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertTrue(results['passed'])
        self.assertEqual([c['number'] for c in results['criteria']], [6, 9, 10])
        self.assertEqual(results['failed'], [])

    def test_bytes_identical_across_threads(self):
        """Test accept artifacts do not depend on threads or reruns"""
        outputs = []
        for threads in ('1', '8', '1'):
            path = self.artifact_path(f'accept-{threads}-{len(outputs)}.json')
            self.run_command('accept', '--only', '6', '10', '11', '--threads', threads, '--out', path)
            outputs.append(Path(path).read_bytes())
        self.assertEqual(len(set(outputs)), 1)

    def test_failure_exits_three(self):
        """Test a failing criterion writes the artifact and exits 3"""
        path = self.artifact_path('accept-failing.json')
        with mock.patch.dict(CRITERIA, {6: ('always fails', lambda rng, threads: (False, {}))}):
            error = self.run_failing_command(3, 'accept', '--only', '6', '--out', path)
        self.assertEqual(error['details']['failed'], [6])
        self.assertFalse(self.load_artifact(path)['results']['passed'])

    def test_unknown_criterion(self):
        error = self.run_failing_command(1, 'accept', '--only', '12')
        self.assertIn('only', error['details']['errors'])


class LedgerTests(LedgerTestCase):
    """Test cases for the --record run ledger"""

    def test_successful_run_recorded(self):
        path = self.artifact_path('ledger-count.json')
        self.run_command('lang', 'count', '--n', '2', '--record', '--out', path)
        run = ExperimentRun.objects.get()
        self.assertEqual((run.command, run.action, run.verdict), ('lang', 'count', 'ok'))
        self.assertEqual(run.config_hash, self.load_artifact(path)['config_hash'])
        self.assertEqual(run.artifact_path, path)
        self.assertTrue(run.succeeded)

    def test_verdict_recorded(self):
        self.run_command('glue', 'verify', '--n', '4', '--record', '--out', self.artifact_path('ledger-verify.json'))
        self.assertEqual(ExperimentRun.objects.get().verdict, 'passed')

    def test_failed_run_recorded(self):
        self.run_failing_command(2, 'lang', 'count', '--n', '100', '--record')
        run = ExperimentRun.objects.get()
        self.assertEqual(run.exit_status, 2)
        self.assertEqual(run.verdict, 'error')
        self.assertEqual(run.error_code, 'cap-exceeded')
        self.assertFalse(run.succeeded)

    def test_nothing_recorded_without_flag(self):
        self.run_command('lang', 'count', '--n', '2', '--out', self.artifact_path('ledger-none.json'))
        self.assertFalse(ExperimentRun.objects.exists())

    def test_str_and_status(self):
        run = ExperimentRunFactory(command='glue', action='verify', verdict='passed')
        self.assertEqual(str(run), 'glue verify [passed]')
        self.assertTrue(run.succeeded)
        self.assertFalse(ExperimentRunFactory(exit_status=3, verdict='failed').succeeded)
