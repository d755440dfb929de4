"""
Tests for the acceptance suite runner and the artifact helpers
"""

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.conf import settings
from rest_framework import serializers

from cli.acceptance import CRITERIA, AcceptanceReport, CriterionResult, run_acceptance
from cli.artifacts import canonical_json, config_hash, dumps, envelope, flatten, read_csv, write_csv
from cli.base import load_config_file, read_json
from cli.serializers import CountParams, validate_config, validate_params
from core.exceptions import InvalidParameters
from core.test_utils import BaseTestCase, CommandTestCase
from shiftspace.subshifts import build_subshift
from words.codec import parse_word
from words.sequences import Word


def config(**overrides):
    data = {'spec': {}, 'observable': {}, 'budgets': {}, 'output': {}, 'params': {}}
    data.update(overrides)
    return validate_config(data)


class AcceptanceRunnerTests(BaseTestCase):
    """Test cases for run_acceptance and its report"""

    def test_eleven_criteria_registered(self):
        self.assertEqual(sorted(CRITERIA), list(range(1, 12)))

    def test_subset_reproduces_details(self):
        """Test a criterion's details do not depend on which others ran"""
        alone = run_acceptance([10]).results[0]
        together = run_acceptance([6, 10]).results[1]
        self.assertEqual(alone.number, 10)
        self.assertEqual(alone.to_dict(), together.to_dict())

    def test_other_seeds_pass(self):
        first = run_acceptance([10], seed=1).results[0]
        second = run_acceptance([10], seed=2).results[0]
        self.assertTrue(first.passed and second.passed)

    def test_bowen_eye_criterion(self):
        result = run_acceptance([9]).results[0]
        self.assertTrue(result.passed, result.details)

    def test_report(self):
        report = AcceptanceReport([
            CriterionResult(1, 'first', True),
            CriterionResult(2, 'second', False, {'reason': 'forced'}),
        ])
        self.assertFalse(report.passed)
        self.assertEqual(report.failed, [2])
        self.assertEqual(report.rows(), [(1, 'first', True), (2, 'second', False)])
        self.assertEqual(report.to_dict()['criteria'][1]['details'], {'reason': 'forced'})


class ArtifactTests(BaseTestCase):
    """Test cases for envelopes, hashing and the CSV layout"""

    def test_canonical_json_types(self):
        text = canonical_json({'b': np.int64(3), 'a': Fraction(1, 4), 'c': parse_word('p0m'), 'd': np.arange(2)})
        self.assertEqual(text, '{"a":"1/4","b":3,"c":"p0m","d":[0,1]}')

    def test_nan_rejected(self):
        with self.assertRaises(ValueError):
            dumps({'value': float('nan')})

    def test_hash_covers_command_and_config(self):
        base = config()
        self.assertEqual(config_hash('lang', 'count', base), config_hash('lang', 'count', config()))
        self.assertNotEqual(config_hash('lang', 'count', base), config_hash('lang', 'entropy', base))
        self.assertNotEqual(config_hash('lang', 'count', base), config_hash('lang', 'count', config(seed=1)))

    def test_envelope(self):
        data = envelope('glue', 'verify', config(), {'passed': True})
        self.assertEqual(data['schema_version'], settings.ERGOLAB['SCHEMA_VERSION'])
        self.assertEqual(data['tool'], {'name': 'ergolab', 'version': '1.0.0'})
        self.assertEqual(data['seed'], 0)
        self.assertTrue(dumps(data).endswith('}\n'))

    def test_flatten(self):
        rows = flatten({'b': {'y': None, 'x': Fraction(1, 2)}, 'a': [1, 2]})
        self.assertEqual(rows, [('a', '[1,2]'), ('b.x', '1/2'), ('b.y', '')])

    def test_csv_layout(self):
        path = Path(settings.ERGOLAB['ARTIFACT_DIR']) / 'layout.csv'
        payload = envelope('lang', 'count', config(), {})
        write_csv(path, payload, ('word', 'note'), [('p0', 'has, comma')])
        lines = path.read_text().split('\n')
        self.assertEqual(lines[0], f"# schema_version={settings.ERGOLAB['SCHEMA_VERSION']}")
        self.assertEqual(lines[6], 'word,note')
        self.assertEqual(lines[7], 'p0,"has, comma"')
        provenance, header, rows = read_csv(path)
        self.assertEqual(provenance['config_hash'], payload['config_hash'])
        self.assertEqual(rows, [['p0', 'has, comma']])


class ConfigTests(BaseTestCase):
    """Test cases for config validation and inputs"""

    def test_defaults(self):
        data = config()
        self.assertEqual(data['spec'], {'type': 'paper', 'kappa': '1'})
        self.assertEqual(data['observable'], {'kind': 'coordinate'})
        self.assertEqual(data['output'], {'format': 'json'})

    def test_kappa_normalized(self):
        self.assertEqual(config(spec={'kappa': '2/8'})['spec']['kappa'], '1/4')

    def test_bad_kappa(self):
        for value in ('0', '1/0', 'abc', '-1/4', '0.5'):
            with self.subTest(value=value):
                with self.assertRaises(serializers.ValidationError):
                    config(spec={'kappa': value})

    def test_descriptor_keeps_relevant_keys(self):
        self.assertEqual(config(spec={'type': 'sgap', 'kappa': '1/4'})['spec'], {'type': 'sgap', 'min_run': 2})

    def test_sft_needs_forbidden_words(self):
        with self.assertRaises(serializers.ValidationError):
            config(spec={'type': 'sft'})

    def test_sgap_min_run_positive(self):
        with self.assertRaises(serializers.ValidationError):
            config(spec={'type': 'sgap', 'min_run': 0})
        self.assertEqual(config(spec={'type': 'sgap', 'min_run': 1})['spec'], {'type': 'sgap', 'min_run': 1})

    def test_sft_keeps_alphabet(self):
        spec = config(spec={'type': 'sft', 'forbidden': ['22'], 'alphabet': 4})['spec']
        self.assertEqual(spec, {'type': 'sft', 'forbidden': ['22'], 'alphabet': 4})
        shift = build_subshift(spec)
        self.assertEqual(shift.alphabet.symbols, (-1, 0, 1, 2))
        self.assertFalse(shift.is_legal(Word((1, 2, 2))))

    def test_unknown_params(self):
        with self.assertRaises(InvalidParameters):
            validate_params(CountParams, {'n': 2, 'size': 3})

    def test_unknown_toml_section(self):
        path = Path(settings.ERGOLAB['ARTIFACT_DIR']) / 'sections.toml'
        path.write_text('[spec]\ntype = "full"\n\n[extras]\nx = 1\n')
        with self.assertRaises(InvalidParameters) as ctx:
            load_config_file(path)
        self.assertEqual(ctx.exception.details['unknown'], ['extras'])

    def test_read_json_unwraps_envelopes(self):
        path = Path(settings.ERGOLAB['ARTIFACT_DIR']) / 'wrapped.json'
        path.write_text(json.dumps(envelope('lang', 'count', config(), {'n': 1})))
        self.assertEqual(read_json(str(path)), {'n': 1})
        self.assertEqual(read_json('{"n": 2}'), {'n': 2})
        with self.assertRaises(InvalidParameters):
            read_json('{"n": ')


class AcceptSuiteCommandTests(CommandTestCase):
    """Test cases for the accept command over every criterion"""

    def test_full_suite_exits_zero(self):
        path = self.artifact_path('accept-all.json')
        self.run_command('accept', '--out', path)
        results = self.load_artifact(path)['results']
        self.assertTrue(results['passed'], results['failed'])
        self.assertEqual([c['number'] for c in results['criteria']], list(range(1, 12)))
        self.assertEqual(results['failed'], [])
